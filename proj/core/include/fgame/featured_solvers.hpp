#pragma once

// Family-based attractor fixed points: every product of the product line is
// solved in one run, with values kept as canonical feature functions.

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "fgame/feature_function.hpp"
#include "fgame/game.hpp"
#include "fgame/plain_solvers.hpp"
#include "fgame/values.hpp"

namespace fgame {

template <class X>
struct FeaturedResult {
  std::vector<FeatureFunction<X>> values;
  /// Per state, the round in which the value last changed on each product
  /// (reachability kinds only).
  std::vector<FeatureFunction<std::uint32_t>> ranks;
  std::size_t iterations = 0;
};

/// Called after every round with the round number and the current solution.
template <class X>
using Observer = std::function<void(std::size_t, const std::vector<FeatureFunction<X>>&)>;

FeaturedResult<bool> fattrStar(const FeaturedGame& g, const Observer<bool>& observe = {});
FeaturedResult<ExtNat> fwattrStar(const FeaturedGame& g, const Observer<ExtNat>& observe = {});
FeaturedResult<double> fdattrStar(const FeaturedGame& g, double lambda, double epsilon,
                                  const Observer<double>& observe = {});
FeaturedResult<EnergyValue> feattrStar(const FeaturedGame& g, const Observer<EnergyValue>& observe = {});
FeaturedResult<ParityMeasure> fpattrStar(const FeaturedGame& g, const Observer<ParityMeasure>& observe = {});

/// Energy bound over all transitions of g (sound for every projection).
EnergyDomain energyDomain(const FeaturedGame& g);
MeasureSpace measureSpace(const FeaturedGame& g);

/// Cell-wise progress lift of a successor's measures through a state of the
/// given priority.
FeatureFunction<ParityMeasure> fprog(const FeatureFunction<ParityMeasure>& next, std::uint32_t priority,
                                     const MeasureSpace& space);

/// Products on which player 1 wins from `state`.
FeatureFunction<bool> parityWinners(const FeaturedResult<ParityMeasure>& r, std::size_t state);

using FeaturedValues = std::variant<FeaturedResult<bool>, FeaturedResult<ExtNat>, FeaturedResult<double>,
                                    FeaturedResult<EnergyValue>, FeaturedResult<ParityMeasure>>;

/// Runs the featured solver matching g.kind().
FeaturedValues solveFeatured(const FeaturedGame& g, const SolveParams& params = {});

/// Per player-1 state, a feature function choosing on every product the
/// first transition (in document order) that satisfies the local optimality
/// equation of the game kind.  Throws ConsistencyError if some product has
/// no such transition.
FeaturedStrategy extractFeaturedStrategy(const FeaturedGame& g, const FeaturedValues& solution,
                                         const SolveParams& params = {});

/// Value of f on every product, in product order.
template <class X>
std::vector<X> perProductReport(const FeatureFunction<X>& f) {
  std::vector<X> out;
  out.reserve(f.productCount());
  for (std::size_t p = 0; p < f.productCount(); ++p) out.push_back(f.lookup(p));
  return out;
}

/// Whether the value on a product means player 1 wins (see playerOneWins).
std::optional<bool> winsWith(const bool& v);
std::optional<bool> winsWith(const ExtNat& v);
std::optional<bool> winsWith(const double& v);
std::optional<bool> winsWith(const EnergyValue& v);
std::optional<bool> winsWith(const ParityMeasure& v);

}  // namespace fgame
