#include <gtest/gtest.h>

#include <cmath>

#include "fgame/errors.hpp"
#include "fgame/featured_solvers.hpp"
#include "fgame/game_io.hpp"
#include "oracles.hpp"
#include "random_games.hpp"

namespace fgame {
namespace {

using testing::fixture;
using testing::Rng;

std::size_t productIndex(const FeaturedGame& g, std::vector<std::string> names) {
  return *g.products().indexOf(Product::fromNames(g.features(), names));
}

template <class X>
bool closeEnough(const X& a, const X& b, double) {
  return a == b;
}
bool closeEnough(const double& a, const double& b, double tol) { return std::fabs(a - b) <= tol; }

TEST(FeaturedStrategy, RobotPicksTheExtraBranch) {
  const FeaturedGame g = loadGame(fixture("robot_energy.json"));
  const FeaturedValues v = solveFeatured(g);
  const FeaturedStrategy xi = extractFeaturedStrategy(g, v);
  ASSERT_TRUE(xi.choice[0].has_value());
  EXPECT_EQ(xi.choice[0]->lookup(productIndex(g, {"fextra", "fbrock"})), 1U);
  EXPECT_FALSE(xi.choice[2].has_value());
}

TEST(FeaturedStrategy, DistanceChallengerFollowsTheCostlierBranch) {
  const FeaturedGame g = loadGame(fixture("coffee_distance.json"));
  const SolveParams params{*g.metadata().discount, 1e-9};
  const FeaturedStrategy xi = extractFeaturedStrategy(g, solveFeatured(g, params), params);
  const auto s = *g.stateIndex("(s1,s1)");
  ASSERT_TRUE(xi.choice[s].has_value());
  auto target = [&](std::vector<std::string> names) {
    return g.state(g.transition(xi.choice[s]->lookup(productIndex(g, names))).to).id;
  };
  EXPECT_NE(target({"dollar"}).find(",ins,"), std::string::npos);
  EXPECT_NE(target({"euro", "dollar"}).find(",ins,"), std::string::npos);
  EXPECT_NE(target({"euro"}).find(",std,"), std::string::npos);
}

class ProjectedStrategies : public ::testing::TestWithParam<GameKind> {};

TEST_P(ProjectedStrategies, AreEnabledAndOptimal) {
  const GameKind kind = GetParam();
  Rng rng(400 + static_cast<std::uint64_t>(kind));
  const SolveParams params{0.8, 1e-9};
  const double tol = 4 * params.epsilon / (1 - params.lambda);
  for (int round = 0; round < 60; ++round) {
    const FeaturedGame g = testing::randomGame(rng, kind);
    const FeaturedValues v = solveFeatured(g, params);
    const FeaturedStrategy xi = extractFeaturedStrategy(g, v, params);
    for (std::size_t p = 0; p < g.products().size(); ++p) {
      const GameStructure proj = projectGame(g, p);
      const Strategy sigma = projectStrategy(xi, p);
      for (std::size_t s = 0; s < proj.size(); ++s) {
        if (proj.states()[s].owner == Player::Two) {
          EXPECT_FALSE(sigma.choice[s].has_value());
          continue;
        }
        ASSERT_TRUE(sigma.choice[s].has_value());
        EXPECT_TRUE(g.guard(*sigma.choice[s]).holds(p));
        EXPECT_EQ(g.transition(*sigma.choice[s]).from, s);
      }
      const PlainValues under = valueUnderStrategy(proj, sigma, params);
      std::visit(
          [&](const auto& fr) {
            using X = std::decay_t<decltype(fr.values[0].lookup(0))>;
            const auto& ur = std::get<PlainResult<X>>(under);
            for (std::size_t s = 0; s < proj.size(); ++s) {
              EXPECT_TRUE(closeEnough(ur.values[s], fr.values[s].lookup(p), tol))
                  << "product " << p << " state " << s;
            }
          },
          v);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllKinds, ProjectedStrategies,
                         ::testing::Values(GameKind::Reachability, GameKind::MinReachability, GameKind::Discounted,
                                           GameKind::Energy, GameKind::Parity));

TEST(FeaturedStrategy, ProjectionByProduct) {
  const FeaturedGame g = loadGame(fixture("robot_energy.json"));
  const FeaturedStrategy xi = extractFeaturedStrategy(g, solveFeatured(g));
  for (std::size_t p = 0; p < g.products().size(); ++p) {
    EXPECT_EQ(projectStrategy(xi, p), projectStrategy(xi, g.products(), g.products()[p]));
  }
}

}  // namespace
}  // namespace fgame
