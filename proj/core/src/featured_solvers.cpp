#include "fgame/featured_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "fgame/errors.hpp"

namespace fgame {

namespace {

// Keeps one expression per denotation for the duration of a solver run so
// that repeated splitting and merging does not grow guard expressions.
class GuardPool {
 public:
  explicit GuardPool(const FeaturedGame& g) {
    intern(Guard::top(g.products().size()));
    for (std::size_t t = 0; t < g.transitions().size(); ++t) {
      intern(g.guard(t));
      intern(!g.guard(t));
    }
  }

  Guard intern(const Guard& g) {
    auto [it, inserted] = pool_.try_emplace(g.mask(), g);
    return it->second;
  }

  template <class X>
  void canonicalize(FeatureFunction<X>& f) {
    f.rewriteGuards([this](const Guard& g) { return intern(g); });
  }

 private:
  std::unordered_map<ProductMask, Guard> pool_;
};

void requireFeaturedNonBlocking(const FeaturedGame& g) {
  auto witnesses = validateNonBlocking(g);
  if (!witnesses.empty()) {
    const auto& w = witnesses.front();
    throw ValidationError("state '" + g.state(w.state).id + "' has no enabled transition in product " +
                          g.products()[w.product].toString(g.features()));
  }
}

void requireKind(const FeaturedGame& g, GameKind kind) {
  if (g.kind() != kind) {
    throw ParameterError("expected a " + std::string(toString(kind)) + " game, got " +
                         std::string(toString(g.kind())));
  }
}

// The per-kind ingredients of a featured attractor: initial valuation,
// transition transform, the two aggregators with their identities and the
// outer combination with the previous iterate.
struct ReachPolicy {
  using Value = bool;
  static constexpr bool kRanks = true;
  const FeaturedGame& g;
  Value initial(std::size_t s) const { return g.state(s).accepting; }
  Value neutral(Player p) const { return p == Player::Two; }
  Value transform(const Value& x, std::size_t, std::size_t) const { return x; }
  Value aggregate(Player p, const Value& a, const Value& b) const { return p == Player::One ? a || b : a && b; }
  Value outer(const Value& old, const Value& fresh) const { return old || fresh; }
};

struct MinReachPolicy {
  using Value = ExtNat;
  static constexpr bool kRanks = true;
  const FeaturedGame& g;
  Value initial(std::size_t s) const { return g.state(s).accepting ? ExtNat(0) : ExtNat::infinity(); }
  Value neutral(Player p) const { return p == Player::One ? ExtNat::infinity() : ExtNat(0); }
  Value transform(const Value& x, std::size_t t, std::size_t) const {
    return x.plus(static_cast<std::uint64_t>(*g.transition(t).weight));
  }
  Value aggregate(Player p, const Value& a, const Value& b) const {
    return p == Player::One ? std::min(a, b) : std::max(a, b);
  }
  Value outer(const Value& old, const Value& fresh) const { return std::min(old, fresh); }
};

struct DiscountedPolicy {
  using Value = double;
  static constexpr bool kRanks = false;
  const FeaturedGame& g;
  double lambda;
  Value initial(std::size_t) const { return 0.0; }
  Value neutral(Player p) const {
    return p == Player::One ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  }
  Value transform(const Value& x, std::size_t t, std::size_t) const { return *g.transition(t).weight + lambda * x; }
  Value aggregate(Player p, const Value& a, const Value& b) const {
    return p == Player::One ? std::max(a, b) : std::min(a, b);
  }
  Value outer(const Value&, const Value& fresh) const { return fresh; }
};

struct EnergyPolicy {
  using Value = EnergyValue;
  static constexpr bool kRanks = false;
  const FeaturedGame& g;
  EnergyDomain dom;
  Value initial(std::size_t) const { return EnergyValue(0); }
  Value neutral(Player p) const { return p == Player::One ? EnergyValue::top() : EnergyValue(0); }
  Value transform(const Value& x, std::size_t t, std::size_t) const {
    return dom.minus(x, static_cast<std::int64_t>(*g.transition(t).weight));
  }
  Value aggregate(Player p, const Value& a, const Value& b) const {
    return p == Player::One ? std::min(a, b) : std::max(a, b);
  }
  Value outer(const Value& old, const Value& fresh) const { return std::max(old, fresh); }
};

struct ParityPolicy {
  using Value = ParityMeasure;
  static constexpr bool kRanks = false;
  const FeaturedGame& g;
  MeasureSpace space;
  Value initial(std::size_t) const { return space.zero(); }
  Value neutral(Player p) const { return p == Player::One ? ParityMeasure::top() : space.zero(); }
  Value transform(const Value& x, std::size_t, std::size_t s) const {
    return space.prog(x, *g.state(s).priority);
  }
  Value aggregate(Player p, const Value& a, const Value& b) const {
    return p == Player::One ? std::min(a, b) : std::max(a, b);
  }
  Value outer(const Value& old, const Value& fresh) const { return std::max(old, fresh); }
};

// One application of the featured attractor at state s.
template <class Policy>
FeatureFunction<typename Policy::Value> attract(const FeaturedGame& g, const Policy& pol,
                                                const std::vector<FeatureFunction<typename Policy::Value>>& u,
                                                std::size_t s) {
  using X = typename Policy::Value;
  const Player owner = g.state(s).owner;
  const X neutral = pol.neutral(owner);
  auto acc = FeatureFunction<X>::constant(g.products().size(), neutral);
  for (auto t : g.outgoing(s)) {
    auto moved = map(u[g.transition(t).to], [&](const X& x) { return pol.transform(x, t, s); });
    auto through = restrict(moved, g.guard(t), neutral);
    acc = combine(acc, through, [&](const X& a, const X& b) { return pol.aggregate(owner, a, b); });
  }
  return acc;
}

template <class Policy>
FeaturedResult<typename Policy::Value> run(const FeaturedGame& g, const Policy& pol,
                                           const Observer<typename Policy::Value>& observe,
                                           double epsilon = 0.0) {
  using X = typename Policy::Value;
  const std::size_t n = g.products().size();
  const std::size_t count = g.states().size();
  GuardPool pool(g);

  FeaturedResult<X> r;
  r.values.reserve(count);
  for (std::size_t s = 0; s < count; ++s) r.values.push_back(FeatureFunction<X>::constant(n, pol.initial(s)));
  if constexpr (Policy::kRanks) r.ranks.assign(count, FeatureFunction<std::uint32_t>::constant(n, 0));

  std::vector<bool> dirty(count, true);
  for (;;) {
    ++r.iterations;
    const auto round = static_cast<std::uint32_t>(r.iterations);
    std::vector<FeatureFunction<X>> fresh = r.values;
    std::vector<bool> changed(count, false);
    double change = 0.0;
    for (std::size_t s = 0; s < count; ++s) {
      if (!dirty[s]) continue;
      auto next = combine(r.values[s], attract(g, pol, r.values, s),
                     [&](const X& old, const X& f) { return pol.outer(old, f); });
      pool.canonicalize(next);
      if (sameFunction(next, r.values[s])) continue;
      changed[s] = true;
      if constexpr (std::is_same_v<X, double>) {
        auto diff = combine(r.values[s], next, [](double a, double b) { return std::fabs(a - b); });
        for (const auto& c : diff) change = std::max(change, c.value);
      }
      if constexpr (Policy::kRanks) {
        auto moved = combine(r.values[s], next, [](const X& a, const X& b) { return !(a == b); });
        r.ranks[s] = combine(r.ranks[s], moved, [round](std::uint32_t k, bool m) { return m ? round : k; });
        pool.canonicalize(r.ranks[s]);
      }
      fresh[s] = std::move(next);
    }
    r.values = std::move(fresh);
    if (observe) observe(r.iterations, r.values);

    const bool done = std::is_same_v<X, double> ? change < epsilon
                                                 : std::none_of(changed.begin(), changed.end(), [](bool c) { return c; });
    if (done) return r;
    std::fill(dirty.begin(), dirty.end(), false);
    for (std::size_t s = 0; s < count; ++s) {
      if (!changed[s]) continue;
      for (auto p : g.predecessors(s)) dirty[p] = true;
    }
  }
}

}  // namespace

FeaturedResult<bool> fattrStar(const FeaturedGame& g, const Observer<bool>& observe) {
  requireKind(g, GameKind::Reachability);
  requireFeaturedNonBlocking(g);
  return run(g, ReachPolicy{g}, observe);
}

FeaturedResult<ExtNat> fwattrStar(const FeaturedGame& g, const Observer<ExtNat>& observe) {
  requireKind(g, GameKind::MinReachability);
  requireFeaturedNonBlocking(g);
  return run(g, MinReachPolicy{g}, observe);
}

FeaturedResult<double> fdattrStar(const FeaturedGame& g, double lambda, double epsilon,
                                  const Observer<double>& observe) {
  requireKind(g, GameKind::Discounted);
  if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("discount factor must lie in (0,1)");
  if (!(epsilon > 0.0)) throw ParameterError("precision must be positive");
  requireFeaturedNonBlocking(g);
  return run(g, DiscountedPolicy{g, lambda}, observe, epsilon);
}

EnergyDomain energyDomain(const FeaturedGame& g) {
  std::vector<std::int64_t> worst(g.states().size(), 0);
  for (const auto& t : g.transitions()) {
    worst[t.from] = std::max(worst[t.from], static_cast<std::int64_t>(-t.weight.value_or(0.0)));
  }
  EnergyDomain d;
  for (auto w : worst) d.bound += w;
  return d;
}

MeasureSpace measureSpace(const FeaturedGame& g) {
  std::vector<std::uint32_t> priorities;
  for (const auto& s : g.states()) {
    if (!s.priority) throw ValidationError("state '" + s.id + "' has no priority");
    priorities.push_back(*s.priority);
  }
  return MeasureSpace::forPriorities(priorities);
}

FeaturedResult<EnergyValue> feattrStar(const FeaturedGame& g, const Observer<EnergyValue>& observe) {
  requireKind(g, GameKind::Energy);
  requireFeaturedNonBlocking(g);
  return run(g, EnergyPolicy{g, energyDomain(g)}, observe);
}

FeaturedResult<ParityMeasure> fpattrStar(const FeaturedGame& g, const Observer<ParityMeasure>& observe) {
  requireKind(g, GameKind::Parity);
  requireFeaturedNonBlocking(g);
  return run(g, ParityPolicy{g, measureSpace(g)}, observe);
}

FeatureFunction<ParityMeasure> fprog(const FeatureFunction<ParityMeasure>& next, std::uint32_t priority,
                                     const MeasureSpace& space) {
  return map(next, [&](const ParityMeasure& m) { return space.prog(m, priority); });
}

FeatureFunction<bool> parityWinners(const FeaturedResult<ParityMeasure>& r, std::size_t state) {
  return map(r.values.at(state), [](const ParityMeasure& m) { return !m.isTop(); });
}

FeaturedValues solveFeatured(const FeaturedGame& g, const SolveParams& params) {
  switch (g.kind()) {
    case GameKind::Reachability:
      return fattrStar(g);
    case GameKind::MinReachability:
      return fwattrStar(g);
    case GameKind::Discounted:
      return fdattrStar(g, params.lambda, params.epsilon);
    case GameKind::Energy:
      return feattrStar(g);
    case GameKind::Parity:
      return fpattrStar(g);
  }
  throw ParameterError("unknown game kind");
}

std::optional<bool> winsWith(const bool& v) { return v; }
std::optional<bool> winsWith(const ExtNat& v) { return !v.isInfinite(); }
std::optional<bool> winsWith(const double&) { return std::nullopt; }
std::optional<bool> winsWith(const EnergyValue& v) { return !v.isTop(); }
std::optional<bool> winsWith(const ParityMeasure& v) { return !v.isTop(); }

// ------------------------------------------------------------------ strategies

namespace {

template <class X>
struct Ranked {
  X value;
  std::uint32_t rank;
  friend bool operator==(const Ranked&, const Ranked&) = default;
};

template <class X>
FeatureFunction<Ranked<X>> withRanks(const FeatureFunction<X>& v, const FeatureFunction<std::uint32_t>& r) {
  return combine(v, r, [](const X& x, std::uint32_t k) { return Ranked<X>{x, k}; });
}

// Cell-wise local optimality of transition t at its source.
template <class X>
FeatureFunction<bool> achieves(const FeaturedGame& g, const FeaturedResult<X>& r, std::size_t t,
                               const SolveParams& params, const EnergyDomain& dom, const MeasureSpace& space) {
  const Transition& tr = g.transition(t);
  const std::size_t s = tr.from;
  FeatureFunction<bool> ok;
  if constexpr (std::is_same_v<X, bool> || std::is_same_v<X, ExtNat>) {
    const auto here = withRanks(r.values[s], r.ranks[s]);
    const auto there = withRanks(r.values[tr.to], r.ranks[tr.to]);
    ok = combine(there, here, [&](const Ranked<X>& to, const Ranked<X>& from) {
      if constexpr (std::is_same_v<X, bool>) {
        if (!from.value || from.rank == 0) return true;
        return to.value && to.rank < from.rank;
      } else {
        if (from.value.isInfinite() || from.rank == 0) return true;
        return to.value.plus(static_cast<std::uint64_t>(*tr.weight)) == from.value && to.rank < from.rank;
      }
    });
  } else if constexpr (std::is_same_v<X, double>) {
    const DiscountedPolicy pol{g, params.lambda};
    const auto best = attract(g, pol, r.values, s);
    const auto moved = map(r.values[tr.to], [&](double x) { return pol.transform(x, t, s); });
    ok = combine(moved, best, [](double a, double b) { return a == b; });
  } else if constexpr (std::is_same_v<X, EnergyValue>) {
    ok = combine(r.values[tr.to], r.values[s], [&](const EnergyValue& to, const EnergyValue& from) {
      return from.isTop() || dom.minus(to, static_cast<std::int64_t>(*tr.weight)) == from;
    });
  } else {
    const std::uint32_t prio = *g.state(s).priority;
    ok = combine(r.values[tr.to], r.values[s], [&](const ParityMeasure& to, const ParityMeasure& from) {
      return from.isTop() || space.prog(to, prio) == from;
    });
  }
  return restrict(ok, g.guard(t), false);
}

}  // namespace

FeaturedStrategy extractFeaturedStrategy(const FeaturedGame& g, const FeaturedValues& solution,
                                         const SolveParams& params) {
  const std::size_t n = g.products().size();
  const EnergyDomain dom = g.kind() == GameKind::Energy ? energyDomain(g) : EnergyDomain{};
  const MeasureSpace space = g.kind() == GameKind::Parity ? measureSpace(g) : MeasureSpace{};
  GuardPool pool(g);
  FeaturedStrategy xi;
  xi.choice.assign(g.states().size(), std::nullopt);
  std::visit(
      [&](const auto& r) {
        for (std::size_t s = 0; s < g.states().size(); ++s) {
          if (g.state(s).owner != Player::One) continue;
          auto choice = FeatureFunction<std::optional<std::size_t>>::constant(n, std::nullopt);
          for (auto t : g.outgoing(s)) {
            const auto ok = achieves(g, r, t, params, dom, space);
            choice = combine(choice, ok, [t](const std::optional<std::size_t>& c, bool a) {
              return c ? c : (a ? std::optional<std::size_t>(t) : std::nullopt);
            });
          }
          for (const auto& c : choice) {
            if (!c.value) {
              throw ConsistencyError("no transition of state '" + g.state(s).id + "' attains its value in product " +
                                     g.products()[c.guard.mask().first()].toString(g.features()));
            }
          }
          auto f = map(choice, [](const std::optional<std::size_t>& c) { return *c; });
          pool.canonicalize(f);
          xi.choice[s] = std::move(f);
        }
      },
      solution);
  return xi;
}

}  // namespace fgame
