#include "fgame/plain_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fgame/errors.hpp"

namespace fgame {

namespace {

bool isP1(const GameStructure& g, std::size_t s) { return g.states()[s].owner == Player::One; }

void requireKind(const GameStructure& g, GameKind kind) {
  if (g.kind() != kind) {
    throw ParameterError("expected a " + std::string(toString(kind)) + " game, got " +
                         std::string(toString(g.kind())));
  }
}

void checkDiscount(double lambda, double epsilon) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("discount factor must lie in (0,1)");
  if (!(epsilon > 0.0)) throw ParameterError("precision must be positive");
}

// Jacobi sweeps of `next` until no value changes.  `next(s, U)` returns the
// new value of s.  Ranks record the round of the last change.
template <class X, class Next>
PlainResult<X> iterate(const GameStructure& g, std::vector<X> init, Next next) {
  PlainResult<X> r;
  r.values = std::move(init);
  r.ranks.assign(g.size(), 0);
  for (;;) {
    ++r.iterations;
    std::vector<X> fresh(g.size());
    bool changed = false;
    for (std::size_t s = 0; s < g.size(); ++s) {
      fresh[s] = next(s, r.values);
      if (!(fresh[s] == r.values[s])) {
        changed = true;
        r.ranks[s] = static_cast<std::uint32_t>(r.iterations);
      }
    }
    r.values = std::move(fresh);
    if (!changed) return r;
  }
}

}  // namespace

void requireNonBlocking(const GameStructure& g) {
  auto dead = g.deadEnds();
  if (!dead.empty()) {
    throw ValidationError("state '" + g.states()[dead.front()].id + "' has no outgoing transition");
  }
}

PlainResult<bool> attrStar(const GameStructure& g) {
  requireKind(g, GameKind::Reachability);
  requireNonBlocking(g);
  std::vector<bool> init(g.size());
  for (std::size_t s = 0; s < g.size(); ++s) init[s] = g.states()[s].accepting;
  return iterate<bool>(g, std::move(init), [&](std::size_t s, const std::vector<bool>& u) {
    if (u[s]) return true;
    const bool p1 = isP1(g, s);
    bool acc = !p1;
    for (auto k : g.outgoing(s)) {
      const bool v = u[g.transitions()[k].to];
      acc = p1 ? (acc || v) : (acc && v);
    }
    return acc;
  });
}

PlainResult<ExtNat> wattrStar(const GameStructure& g) {
  requireKind(g, GameKind::MinReachability);
  requireNonBlocking(g);
  for (const auto& t : g.transitions()) {
    if (t.weight < 0) throw ValidationError("min-reachability weights must be non-negative");
  }
  std::vector<ExtNat> init(g.size(), ExtNat::infinity());
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (g.states()[s].accepting) init[s] = ExtNat(0);
  }
  return iterate<ExtNat>(g, std::move(init), [&](std::size_t s, const std::vector<ExtNat>& u) {
    const bool p1 = isP1(g, s);
    ExtNat acc = p1 ? ExtNat::infinity() : ExtNat(0);
    for (auto k : g.outgoing(s)) {
      const auto& t = g.transitions()[k];
      const ExtNat v = u[t.to].plus(static_cast<std::uint64_t>(t.weight));
      acc = p1 ? std::min(acc, v) : std::max(acc, v);
    }
    return std::min(u[s], acc);
  });
}

PlainResult<double> dattrStar(const GameStructure& g, double lambda, double epsilon) {
  requireKind(g, GameKind::Discounted);
  checkDiscount(lambda, epsilon);
  requireNonBlocking(g);
  PlainResult<double> r;
  r.values.assign(g.size(), 0.0);
  for (;;) {
    ++r.iterations;
    std::vector<double> fresh(g.size());
    double change = 0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      const bool p1 = isP1(g, s);
      double acc = p1 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
      for (auto k : g.outgoing(s)) {
        const auto& t = g.transitions()[k];
        const double v = t.weight + lambda * r.values[t.to];
        acc = p1 ? std::max(acc, v) : std::min(acc, v);
      }
      fresh[s] = acc;
      change = std::max(change, std::fabs(acc - r.values[s]));
    }
    r.values = std::move(fresh);
    if (change < epsilon) return r;
  }
}

EnergyDomain energyDomain(const GameStructure& g) {
  std::vector<std::int64_t> worst(g.size(), 0);
  for (const auto& t : g.transitions()) {
    worst[t.from] = std::max(worst[t.from], static_cast<std::int64_t>(-t.weight));
  }
  EnergyDomain d;
  for (auto w : worst) d.bound += w;
  return d;
}

PlainResult<EnergyValue> eattrStar(const GameStructure& g) {
  requireKind(g, GameKind::Energy);
  requireNonBlocking(g);
  const EnergyDomain dom = energyDomain(g);
  return iterate<EnergyValue>(g, std::vector<EnergyValue>(g.size()), [&](std::size_t s, const std::vector<EnergyValue>& u) {
    const bool p1 = isP1(g, s);
    EnergyValue acc = p1 ? EnergyValue::top() : EnergyValue(0);
    for (auto k : g.outgoing(s)) {
      const auto& t = g.transitions()[k];
      const EnergyValue v = dom.minus(u[t.to], static_cast<std::int64_t>(t.weight));
      acc = p1 ? std::min(acc, v) : std::max(acc, v);
    }
    return std::max(u[s], acc);
  });
}

MeasureSpace measureSpace(const GameStructure& g) {
  std::vector<std::uint32_t> priorities;
  for (const auto& s : g.states()) {
    if (!s.priority) throw ValidationError("state '" + s.id + "' has no priority");
    priorities.push_back(*s.priority);
  }
  return MeasureSpace::forPriorities(priorities);
}

PlainResult<ParityMeasure> pattrStar(const GameStructure& g) {
  requireKind(g, GameKind::Parity);
  requireNonBlocking(g);
  const MeasureSpace space = measureSpace(g);
  return iterate<ParityMeasure>(
      g, std::vector<ParityMeasure>(g.size(), space.zero()), [&](std::size_t s, const std::vector<ParityMeasure>& u) {
        const bool p1 = isP1(g, s);
        const std::uint32_t prio = *g.states()[s].priority;
        ParityMeasure acc = p1 ? ParityMeasure::top() : space.zero();
        for (auto k : g.outgoing(s)) {
          ParityMeasure v = space.prog(u[g.transitions()[k].to], prio);
          if (p1 ? v < acc : acc < v) acc = std::move(v);
        }
        return std::max(u[s], acc);
      });
}

// ------------------------------------------------------------------ Zielonka

namespace {

// Attractor of `target` for `player` inside the subgame `alive`.  `pred`
// lists one entry per edge.
std::vector<bool> attractor(const GameStructure& g, const std::vector<std::vector<std::size_t>>& pred,
                            const std::vector<bool>& alive, std::vector<bool> target, Player player) {
  std::vector<std::size_t> remaining(g.size(), 0);
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (!alive[s]) continue;
    for (auto k : g.outgoing(s)) remaining[s] += alive[g.transitions()[k].to] ? 1 : 0;
  }
  std::vector<std::size_t> queue;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (target[s]) queue.push_back(s);
  }
  while (!queue.empty()) {
    const std::size_t v = queue.back();
    queue.pop_back();
    for (auto u : pred[v]) {
      if (!alive[u] || target[u]) continue;
      if (g.states()[u].owner == player || --remaining[u] == 0) {
        target[u] = true;
        queue.push_back(u);
      }
    }
  }
  return target;
}

// Returns player-1's winning region of the subgame.
std::vector<bool> zielonka(const GameStructure& g, const std::vector<std::vector<std::size_t>>& pred,
                           const std::vector<bool>& alive) {
  std::optional<std::uint32_t> minPrio;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (alive[s]) minPrio = std::min(minPrio.value_or(*g.states()[s].priority), *g.states()[s].priority);
  }
  std::vector<bool> none(g.size(), false);
  if (!minPrio) return none;
  const Player alpha = *minPrio % 2 == 0 ? Player::One : Player::Two;
  const Player beta = alpha == Player::One ? Player::Two : Player::One;

  std::vector<bool> top(g.size(), false);
  for (std::size_t s = 0; s < g.size(); ++s) top[s] = alive[s] && *g.states()[s].priority == *minPrio;
  const std::vector<bool> a = attractor(g, pred, alive, top, alpha);

  std::vector<bool> rest(g.size());
  for (std::size_t s = 0; s < g.size(); ++s) rest[s] = alive[s] && !a[s];
  const std::vector<bool> w1 = zielonka(g, pred, rest);
  std::vector<bool> wBeta(g.size(), false);
  bool betaEmpty = true;
  for (std::size_t s = 0; s < g.size(); ++s) {
    wBeta[s] = rest[s] && (beta == Player::One ? w1[s] : !w1[s]);
    betaEmpty = betaEmpty && !wBeta[s];
  }
  if (betaEmpty) {
    std::vector<bool> out(g.size(), false);
    for (std::size_t s = 0; s < g.size(); ++s) out[s] = alive[s] && alpha == Player::One;
    return out;
  }
  const std::vector<bool> b = attractor(g, pred, alive, wBeta, beta);
  for (std::size_t s = 0; s < g.size(); ++s) rest[s] = alive[s] && !b[s];
  std::vector<bool> out = zielonka(g, pred, rest);
  if (beta == Player::One) {
    for (std::size_t s = 0; s < g.size(); ++s) out[s] = out[s] || b[s];
  }
  return out;
}

}  // namespace

ZielonkaResult zielonkaOracle(const GameStructure& g) {
  requireKind(g, GameKind::Parity);
  requireNonBlocking(g);
  for (const auto& s : g.states()) {
    if (!s.priority) throw ValidationError("state '" + s.id + "' has no priority");
  }
  std::vector<std::vector<std::size_t>> pred(g.size());
  for (const auto& t : g.transitions()) pred[t.to].push_back(t.from);
  return {zielonka(g, pred, std::vector<bool>(g.size(), true))};
}

// ---------------------------------------------------------------- dispatch

PlainValues solvePlain(const GameStructure& g, const SolveParams& params) {
  switch (g.kind()) {
    case GameKind::Reachability:
      return attrStar(g);
    case GameKind::MinReachability:
      return wattrStar(g);
    case GameKind::Discounted:
      return dattrStar(g, params.lambda, params.epsilon);
    case GameKind::Energy:
      return eattrStar(g);
    case GameKind::Parity:
      return pattrStar(g);
  }
  throw ParameterError("unknown game kind");
}

std::optional<bool> playerOneWins(const PlainValues& v, std::size_t state) {
  return std::visit(
      [state](const auto& r) -> std::optional<bool> {
        using X = std::decay_t<decltype(r.values[0])>;
        const X& x = r.values.at(state);
        if constexpr (std::is_same_v<X, bool>) {
          return x;
        } else if constexpr (std::is_same_v<X, ExtNat>) {
          return !x.isInfinite();
        } else if constexpr (std::is_same_v<X, double>) {
          return std::nullopt;
        } else {
          return !x.isTop();
        }
      },
      v);
}

Strategy extractStrategy(const GameStructure& g, const PlainValues& solution, const SolveParams& params) {
  Strategy sigma;
  sigma.choice.assign(g.size(), std::nullopt);
  const EnergyDomain dom = g.kind() == GameKind::Energy ? energyDomain(g) : EnergyDomain{};
  const MeasureSpace space = g.kind() == GameKind::Parity ? measureSpace(g) : MeasureSpace{};
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (!isP1(g, s)) continue;
    const auto& out = g.outgoing(s);
    if (out.empty()) throw ValidationError("state '" + g.states()[s].id + "' has no outgoing transition");
    std::optional<std::size_t> pick;
    std::visit(
        [&](const auto& r) {
          using X = std::decay_t<decltype(r.values[0])>;
          const X& here = r.values[s];
          auto achieves = [&](const PlainTransition& t) -> bool {
            if constexpr (std::is_same_v<X, bool>) {
              if (!here || r.ranks[s] == 0) return true;
              return r.values[t.to] && r.ranks[t.to] < r.ranks[s];
            } else if constexpr (std::is_same_v<X, ExtNat>) {
              if (here.isInfinite() || r.ranks[s] == 0) return true;
              return r.values[t.to].plus(static_cast<std::uint64_t>(t.weight)) == here &&
                     r.ranks[t.to] < r.ranks[s];
            } else if constexpr (std::is_same_v<X, EnergyValue>) {
              if (here.isTop()) return true;
              return dom.minus(r.values[t.to], static_cast<std::int64_t>(t.weight)) == here;
            } else if constexpr (std::is_same_v<X, ParityMeasure>) {
              if (here.isTop()) return true;
              return space.prog(r.values[t.to], *g.states()[s].priority) == here;
            } else {
              return false;
            }
          };
          if constexpr (std::is_same_v<X, double>) {
            double best = -std::numeric_limits<double>::infinity();
            for (auto k : out) {
              const auto& t = g.transitions()[k];
              const double v = t.weight + params.lambda * r.values[t.to];
              if (v > best) {
                best = v;
                pick = t.id;
              }
            }
          } else {
            for (auto k : out) {
              if (achieves(g.transitions()[k])) {
                pick = g.transitions()[k].id;
                break;
              }
            }
          }
        },
        solution);
    if (!pick) {
      throw ConsistencyError("no transition of state '" + g.states()[s].id + "' attains its value");
    }
    sigma.choice[s] = pick;
  }
  return sigma;
}

PlainValues valueUnderStrategy(const GameStructure& g, const Strategy& sigma, const SolveParams& params) {
  std::vector<PlainTransition> kept;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (!isP1(g, s)) {
      for (auto k : g.outgoing(s)) kept.push_back(g.transitions()[k]);
      continue;
    }
    if (s >= sigma.choice.size() || !sigma.choice[s]) {
      throw ParameterError("strategy has no choice for state '" + g.states()[s].id + "'");
    }
    auto pos = g.findTransition(*sigma.choice[s]);
    if (!pos || g.transitions()[*pos].from != s) {
      throw ParameterError("strategy picks transition #" + std::to_string(*sigma.choice[s]) +
                           ", which does not leave state '" + g.states()[s].id + "' in this game");
    }
    kept.push_back(g.transitions()[*pos]);
  }
  return solvePlain(GameStructure(g.kind(), g.states(), g.initial(), std::move(kept)), params);
}

}  // namespace fgame
