#pragma once

// JSON rendering of solver results and strategies.

#include <string>

#include <nlohmann/json.hpp>

#include "fgame/featured_solvers.hpp"
#include "fgame/game.hpp"

namespace fgame {

/// The "metadata" object of a game document (empty object if none).
nlohmann::json metadataToJson(const GameMetadata& md);

/// true/false, integers, "inf", "top", measure arrays, reals.
nlohmann::json valueToJson(const bool& v);
nlohmann::json valueToJson(const ExtNat& v);
nlohmann::json valueToJson(const double& v);
nlohmann::json valueToJson(const EnergyValue& v);
nlohmann::json valueToJson(const ParityMeasure& v);

/// Short display form; reals with 4 significant digits.
std::string valueToText(const bool& v);
std::string valueToText(const ExtNat& v);
std::string valueToText(const double& v);
std::string valueToText(const EnergyValue& v);
std::string valueToText(const ParityMeasure& v);

template <class X>
nlohmann::json featureFunctionToJson(const FeatureFunction<X>& f, const FeatureSet& features) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : f) {
    cells.push_back({{"guard", toString(c.guard.expr(), features)}, {"value", valueToJson(c.value)}});
  }
  return cells;
}

/// [{"state": id, "cells": [{"guard": ..., "value": ...}]}]
nlohmann::json solutionToJson(const FeaturedGame& g, const FeaturedValues& values);

/// Inverse of solutionToJson for g's kind.  Cell lists are checked to
/// partition the product set.  Throws ValidationError.
FeaturedValues solutionFromJson(const FeaturedGame& g, const nlohmann::json& solution);

/// [{"state": id, "cells": [{"guard": ..., "transition": index, "to": id}]}]
nlohmann::json strategyToJson(const FeaturedGame& g, const FeaturedStrategy& xi);

}  // namespace fgame
