#pragma once

// Attractor fixed points on single-product games, strategy extraction and
// a recursive parity oracle.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "fgame/game.hpp"
#include "fgame/values.hpp"

namespace fgame {

template <class X>
struct PlainResult {
  std::vector<X> values;
  /// Round in which each state's value last changed (reachability kinds).
  std::vector<std::uint32_t> ranks;
  std::size_t iterations = 0;

  X atInitial(const GameStructure& g) const { return values.at(g.initial()); }
};

/// Throws ValidationError naming a dead-end state, if any.
void requireNonBlocking(const GameStructure& g);

PlainResult<bool> attrStar(const GameStructure& g);
PlainResult<ExtNat> wattrStar(const GameStructure& g);
/// Throws ParameterError unless 0 < lambda < 1 and epsilon > 0.
PlainResult<double> dattrStar(const GameStructure& g, double lambda, double epsilon);
PlainResult<EnergyValue> eattrStar(const GameStructure& g);
PlainResult<ParityMeasure> pattrStar(const GameStructure& g);

/// Sum over states of the largest negated outgoing weight (at least 0).
EnergyDomain energyDomain(const GameStructure& g);
MeasureSpace measureSpace(const GameStructure& g);

struct ZielonkaResult {
  /// winner[s] is true iff player 1 wins from s.
  std::vector<bool> winner;
};
ZielonkaResult zielonkaOracle(const GameStructure& g);

using PlainValues = std::variant<PlainResult<bool>, PlainResult<ExtNat>, PlainResult<double>,
                                 PlainResult<EnergyValue>, PlainResult<ParityMeasure>>;

struct SolveParams {
  double lambda = 0;
  double epsilon = 1e-9;
};

/// Runs the solver matching g.kind().
PlainValues solvePlain(const GameStructure& g, const SolveParams& params = {});

/// Per player-1 state, the first transition satisfying the local optimality
/// equation of the game kind.  Throws ConsistencyError if none does.
Strategy extractStrategy(const GameStructure& g, const PlainValues& solution, const SolveParams& params = {});

/// Solves g with player 1 confined to sigma.  Throws ParameterError if sigma
/// picks a transition that is not in g or misses a player-1 state.
PlainValues valueUnderStrategy(const GameStructure& g, const Strategy& sigma, const SolveParams& params = {});

/// Whether player 1 wins from `state`: the value itself for reachability,
/// finiteness for min-reachability, not top for energy and parity.  Empty
/// for discounted games.
std::optional<bool> playerOneWins(const PlainValues& v, std::size_t state);

}  // namespace fgame
