#include "fgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "fgame/errors.hpp"

namespace fgame {

namespace {

constexpr std::pair<GameKind, std::string_view> kKindNames[] = {
    {GameKind::Reachability, "reachability"},
    {GameKind::MinReachability, "min-reachability"},
    {GameKind::Discounted, "discounted"},
    {GameKind::Energy, "energy"},
    {GameKind::Parity, "parity"},
};

bool isIntegral(double w) { return std::isfinite(w) && std::floor(w) == w && std::fabs(w) <= 9.0e15; }

std::string where(std::size_t t) { return "transitions[" + std::to_string(t) + "]"; }

}  // namespace

std::string_view toString(GameKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<GameKind> parseGameKind(std::string_view text) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

// -------------------------------------------------------------- FeaturedGame

FeaturedGame::FeaturedGame(GameKind kind, ProductSet products, std::vector<State> states,
                           std::size_t initial, std::vector<Transition> transitions, GameMetadata metadata)
    : kind_(kind),
      products_(std::move(products)),
      states_(std::move(states)),
      initial_(initial),
      transitions_(std::move(transitions)),
      metadata_(std::move(metadata)) {
  if (products_.size() == 0) throw ValidationError("product set must not be empty");
  if (states_.empty()) throw ValidationError("a game needs at least one state");
  std::unordered_set<std::string> ids;
  for (std::size_t s = 0; s < states_.size(); ++s) {
    const State& st = states_[s];
    if (!ids.insert(st.id).second) throw ValidationError("states[" + std::to_string(s) + "]: duplicate id '" + st.id + "'");
    if (st.owner != Player::One && st.owner != Player::Two) {
      throw ValidationError("states[" + std::to_string(s) + "]: owner must be 1 or 2");
    }
    if (kind_ == GameKind::Parity && !st.priority) {
      throw ValidationError("states[" + std::to_string(s) + "]: parity games need a priority on every state");
    }
  }
  if (initial_ >= states_.size()) throw ValidationError("initial state out of range");

  out_.assign(states_.size(), {});
  pred_.assign(states_.size(), {});
  guards_.reserve(transitions_.size());
  for (std::size_t t = 0; t < transitions_.size(); ++t) {
    const Transition& tr = transitions_[t];
    if (tr.from >= states_.size() || tr.to >= states_.size()) {
      throw ValidationError(where(t) + ": endpoint out of range");
    }
    try {
      validate(tr.guard, features());
    } catch (const ValidationError& e) {
      throw ValidationError(where(t) + ".guard: " + e.what());
    }
    const bool weighted = kind_ == GameKind::MinReachability || kind_ == GameKind::Discounted ||
                          kind_ == GameKind::Energy;
    if (weighted) {
      if (!tr.weight) throw ValidationError(where(t) + ": " + std::string(toString(kind_)) + " games need a weight");
      if (!std::isfinite(*tr.weight)) throw ValidationError(where(t) + ".weight: must be finite");
      if (kind_ != GameKind::Discounted && !isIntegral(*tr.weight)) {
        throw ValidationError(where(t) + ".weight: " + std::string(toString(kind_)) + " weights must be integers");
      }
      if (kind_ == GameKind::MinReachability && *tr.weight < 0) {
        throw ValidationError(where(t) + ".weight: min-reachability weights must be non-negative");
      }
    }
    out_[tr.from].push_back(t);
    if (std::find(pred_[tr.to].begin(), pred_[tr.to].end(), tr.from) == pred_[tr.to].end()) {
      pred_[tr.to].push_back(tr.from);
    }
    guards_.push_back(Guard::of(tr.guard, products_));
  }
}

std::optional<std::size_t> FeaturedGame::stateIndex(std::string_view id) const {
  for (std::size_t s = 0; s < states_.size(); ++s) {
    if (states_[s].id == id) return s;
  }
  return std::nullopt;
}

FeaturedGame FeaturedGame::withInitial(std::size_t initial) const {
  FeaturedGame g = *this;
  if (initial >= states_.size()) throw ParameterError("initial state out of range");
  g.initial_ = initial;
  return g;
}

FeaturedGame FeaturedGame::withTrueGuards() const {
  std::vector<Transition> ts = transitions_;
  for (auto& t : ts) t.guard = FeatureExpr::top();
  return FeaturedGame(kind_, products_, states_, initial_, std::move(ts), metadata_);
}

// ------------------------------------------------------------- GameStructure

GameStructure::GameStructure(GameKind kind, std::vector<State> states, std::size_t initial,
                             std::vector<PlainTransition> transitions)
    : kind_(kind), states_(std::move(states)), initial_(initial), transitions_(std::move(transitions)) {
  if (initial_ >= states_.size()) throw ValidationError("initial state out of range");
  out_.assign(states_.size(), {});
  for (std::size_t k = 0; k < transitions_.size(); ++k) {
    const auto& t = transitions_[k];
    if (t.from >= states_.size() || t.to >= states_.size()) {
      throw ValidationError(where(k) + ": endpoint out of range");
    }
    out_[t.from].push_back(k);
  }
}

std::optional<std::size_t> GameStructure::findTransition(std::size_t id) const {
  for (std::size_t k = 0; k < transitions_.size(); ++k) {
    if (transitions_[k].id == id) return k;
  }
  return std::nullopt;
}

GameStructure GameStructure::withInitial(std::size_t initial) const {
  return GameStructure(kind_, states_, initial, transitions_);
}

std::vector<std::size_t> GameStructure::deadEnds() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < states_.size(); ++s) {
    if (out_[s].empty()) out.push_back(s);
  }
  return out;
}

// ----------------------------------------------------------------- projection

GameStructure projectGame(const FeaturedGame& g, std::size_t productIndex) {
  if (productIndex >= g.products().size()) throw ParameterError("product index out of range");
  std::vector<PlainTransition> ts;
  for (std::size_t t = 0; t < g.transitions().size(); ++t) {
    if (!g.guard(t).holds(productIndex)) continue;
    const Transition& tr = g.transition(t);
    ts.push_back({t, tr.from, tr.to, tr.weight.value_or(0.0)});
  }
  return GameStructure(g.kind(), g.states(), g.initial(), std::move(ts));
}

GameStructure projectGame(const FeaturedGame& g, Product p) {
  auto idx = g.products().indexOf(p);
  if (!idx) throw ParameterError("product " + p.toString(g.features()) + " is not in the product set");
  return projectGame(g, *idx);
}

std::vector<BlockingWitness> validateNonBlocking(const FeaturedGame& g) {
  std::vector<BlockingWitness> out;
  for (std::size_t s = 0; s < g.states().size(); ++s) {
    ProductMask enabled(g.products().size());
    for (auto t : g.outgoing(s)) enabled |= g.guard(t).mask();
    for (std::size_t p = 0; p < g.products().size(); ++p) {
      if (!enabled.test(p)) out.push_back({s, p});
    }
  }
  return out;
}

// ----------------------------------------------------------------- strategies

Strategy projectStrategy(const FeaturedStrategy& xi, std::size_t productIndex) {
  Strategy sigma;
  sigma.choice.reserve(xi.choice.size());
  for (const auto& f : xi.choice) {
    if (f) {
      sigma.choice.emplace_back(f->lookup(productIndex));
    } else {
      sigma.choice.emplace_back(std::nullopt);
    }
  }
  return sigma;
}

Strategy projectStrategy(const FeaturedStrategy& xi, const ProductSet& px, Product p) {
  auto idx = px.indexOf(p);
  if (!idx) throw ParameterError("product " + p.toString(px.features()) + " is not in the product set");
  return projectStrategy(xi, *idx);
}

}  // namespace fgame
