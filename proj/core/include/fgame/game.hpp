#pragma once

// Featured game structures, their projections to single products, and
// memoryless strategies.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fgame/feature_function.hpp"
#include "fgame/feature_logic.hpp"

namespace fgame {

enum class GameKind : std::uint8_t { Reachability, MinReachability, Discounted, Energy, Parity };

/// Document spelling: "reachability", "min-reachability", ...
std::string_view toString(GameKind kind) noexcept;
std::optional<GameKind> parseGameKind(std::string_view text) noexcept;

enum class Player : std::uint8_t { One = 1, Two = 2 };

struct State {
  std::string id;
  Player owner = Player::One;
  bool accepting = false;
  std::optional<std::uint32_t> priority;

  friend bool operator==(const State&, const State&) = default;
};

struct Transition {
  std::size_t from = 0;
  std::size_t to = 0;
  std::optional<double> weight;
  FeatureExpr guard;
};

/// Provenance recorded by the translations.
struct GameMetadata {
  std::string source;
  std::optional<double> discount;
  std::optional<double> lambda;
  std::string formula;
  std::optional<std::size_t> unmatchedResponses;
  std::vector<std::string> warnings;

  bool empty() const noexcept {
    return source.empty() && !discount && !lambda && formula.empty() && !unmatchedResponses &&
           warnings.empty();
  }
  friend bool operator==(const GameMetadata&, const GameMetadata&) = default;
};

class FeaturedGame {
 public:
  /// Validates endpoints, guards and the kind-specific requirements.
  /// Throws ValidationError.
  FeaturedGame(GameKind kind, ProductSet products, std::vector<State> states, std::size_t initial,
               std::vector<Transition> transitions, GameMetadata metadata = {});

  GameKind kind() const noexcept { return kind_; }
  const ProductSet& products() const noexcept { return products_; }
  const FeatureSet& features() const noexcept { return products_.features(); }
  const std::vector<State>& states() const noexcept { return states_; }
  const State& state(std::size_t s) const { return states_.at(s); }
  std::size_t initial() const noexcept { return initial_; }
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }
  const Transition& transition(std::size_t t) const { return transitions_.at(t); }
  /// Outgoing transition ids of s in document order.
  const std::vector<std::size_t>& outgoing(std::size_t s) const { return out_.at(s); }
  /// Predecessor states of s (each listed once).
  const std::vector<std::size_t>& predecessors(std::size_t s) const { return pred_.at(s); }
  /// Denotation of the guard of transition t.
  const Guard& guard(std::size_t t) const { return guards_.at(t); }
  const GameMetadata& metadata() const noexcept { return metadata_; }
  std::optional<std::size_t> stateIndex(std::string_view id) const;

  /// Same structure with a different initial state.
  FeaturedGame withInitial(std::size_t initial) const;
  /// Same structure with every guard replaced by `true`.
  FeaturedGame withTrueGuards() const;

 private:
  GameKind kind_;
  ProductSet products_;
  std::vector<State> states_;
  std::size_t initial_;
  std::vector<Transition> transitions_;
  GameMetadata metadata_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> pred_;
  std::vector<Guard> guards_;
};

/// A single-product game.  Transition ids refer to the featured game the
/// structure was projected from (or are positions when built directly).
struct PlainTransition {
  std::size_t id = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0;
};

class GameStructure {
 public:
  GameStructure(GameKind kind, std::vector<State> states, std::size_t initial,
                std::vector<PlainTransition> transitions);

  GameKind kind() const noexcept { return kind_; }
  const std::vector<State>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  std::size_t initial() const noexcept { return initial_; }
  const std::vector<PlainTransition>& transitions() const noexcept { return transitions_; }
  /// Positions in transitions() of the edges leaving s, in order.
  const std::vector<std::size_t>& outgoing(std::size_t s) const { return out_.at(s); }
  /// Position of the transition with the given id, if present.
  std::optional<std::size_t> findTransition(std::size_t id) const;

  GameStructure withInitial(std::size_t initial) const;

  /// States without an outgoing transition.
  std::vector<std::size_t> deadEnds() const;

 private:
  GameKind kind_;
  std::vector<State> states_;
  std::size_t initial_;
  std::vector<PlainTransition> transitions_;
  std::vector<std::vector<std::size_t>> out_;
};

/// Keeps the transitions whose guard holds in products()[productIndex].
GameStructure projectGame(const FeaturedGame& g, std::size_t productIndex);
/// Throws ParameterError if p is not one of g's products.
GameStructure projectGame(const FeaturedGame& g, Product p);

struct BlockingWitness {
  std::size_t state;
  std::size_t product;
  friend bool operator==(const BlockingWitness&, const BlockingWitness&) = default;
};

/// Every (state, product index) without an enabled outgoing transition.
std::vector<BlockingWitness> validateNonBlocking(const FeaturedGame& g);

/// Memoryless player-1 strategy: a transition id per player-1 state.
struct Strategy {
  std::vector<std::optional<std::size_t>> choice;
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// Per player-1 state, the chosen transition id as a function of the product.
struct FeaturedStrategy {
  std::vector<std::optional<FeatureFunction<std::size_t>>> choice;
};

/// Lookup of every state's choice at products()[productIndex].
Strategy projectStrategy(const FeaturedStrategy& xi, std::size_t productIndex);
Strategy projectStrategy(const FeaturedStrategy& xi, const ProductSet& px, Product p);

}  // namespace fgame
