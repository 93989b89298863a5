#pragma once

// Reference computations used only by the tests.  Each one follows a
// different route from the library code it checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgame/feature_logic.hpp"
#include "fgame/game.hpp"

namespace fgame::testing {

std::string fixture(const std::string& name);

/// Direct recursive truth value of e under p.
bool truthValue(const FeatureExpr& e, Product p);

/// Player 1 can force a visit to an accepting state: bounded game-tree
/// search of horizon |S|.
std::vector<bool> reachOracle(const GameStructure& g);

/// Least cost player 1 can guarantee for reaching an accepting state
/// (nullopt: unreachable), by bounded game-tree search of horizon |S|.
std::vector<std::optional<std::uint64_t>> minReachOracle(const GameStructure& g);

/// Minimal initial credit (nullopt: none suffices), from the safety game on
/// (state, credit) pairs with credit capped at |S| times the largest debit.
std::vector<std::optional<std::int64_t>> energyOracle(const GameStructure& g);

/// max_s |U(s) - F(U)(s)| for the discounted one-step operator.
double discountedResidual(const GameStructure& g, const std::vector<double>& values, double lambda);

}  // namespace fgame::testing
