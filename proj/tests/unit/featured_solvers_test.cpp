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

FeatureExpr expr(const FeaturedGame& g, const std::string& s) { return parseFeatureExpr(s, g.features()); }

TEST(Fattr, Examples) {
  const FeatureSet none;
  const FeaturedGame accepting(GameKind::Reachability, ProductSet::all(none), {{"i", Player::One, true, {}}}, 0,
                               {{0, 0, std::nullopt, FeatureExpr::top()}});
  const auto r = fattrStar(accepting);
  ASSERT_EQ(r.values[0].size(), 1U);
  EXPECT_TRUE(r.values[0].cells()[0].value);

  const FeaturedGame coffee = loadGame(fixture("coffee_reach.json"));
  const auto c = fattrStar(coffee);
  const auto& s0 = c.values[0];
  ASSERT_EQ(s0.size(), 2U);
  for (const auto& cell : s0) {
    EXPECT_TRUE(equivalent(cell.guard.expr(), cell.value ? expr(coffee, "dollar") : expr(coffee, "!dollar"),
                           coffee.products()));
  }

  std::vector<State> states = coffee.states();
  for (auto& s : states) s.accepting = false;
  const FeaturedGame never(GameKind::Reachability, coffee.products(), states, 0, coffee.transitions());
  for (const auto& f : fattrStar(never).values) {
    ASSERT_EQ(f.size(), 1U);
    EXPECT_FALSE(f.cells()[0].value);
  }
}

TEST(Fattr, RejectsBlockingGames) {
  const FeatureSet fs({"a"});
  const FeaturedGame g(GameKind::Reachability, ProductSet::all(fs), {{"x", Player::One, false, {}}}, 0,
                       {{0, 0, std::nullopt, FeatureExpr::var(0)}});
  EXPECT_THROW(fattrStar(g), ValidationError);
}

TEST(Fwattr, ShortcutExample) {
  const FeaturedGame g = loadGame(fixture("shortcut_minreach.json"));
  const auto r = fwattrStar(g);
  for (std::size_t p = 0; p < g.products().size(); ++p) {
    EXPECT_EQ(r.values[0].lookup(p), ExtNat(g.products()[p].has(*g.features().indexOf("dollar")) ? 1 : 5));
  }
  EXPECT_EQ(r.values[0].size(), 2U);
}

TEST(Fwattr, UnreachableTargetIsInfinite) {
  const FeatureSet fs({"a"});
  const FeaturedGame g(GameKind::MinReachability, ProductSet::all(fs),
                       {{"i", Player::One, false, {}}, {"f", Player::One, true, {}}}, 0,
                       {{0, 1, 1.0, FeatureExpr::var(0)}, {0, 0, 1.0, FeatureExpr::top()}, {1, 1, 0.0, {}}});
  const auto r = fwattrStar(g);
  EXPECT_EQ(r.values[0].lookup(1), ExtNat(1));
  EXPECT_TRUE(r.values[0].lookup(0).isInfinite());
}

TEST(Fdattr, DistanceFixtureValues) {
  const FeaturedGame g = loadGame(fixture("coffee_distance.json"));
  const double lambda = 0.99;
  ASSERT_TRUE(g.metadata().discount.has_value());
  EXPECT_DOUBLE_EQ(*g.metadata().discount, std::sqrt(lambda));
  const auto r = fdattrStar(g, std::sqrt(lambda), 1e-9);
  const auto& v = r.values[g.initial()];
  EXPECT_NEAR(v.lookup(productIndex(g, {"euro"})), 0.2 * lambda / (1 - lambda * lambda), 1e-6);
  EXPECT_NEAR(v.lookup(productIndex(g, {"dollar"})), 0.4 * lambda * lambda / (1 - lambda * lambda * lambda), 1e-6);
  EXPECT_NEAR(v.lookup(productIndex(g, {"euro", "dollar"})), 13.2, 0.01);
}

TEST(Feattr, RobotExample) {
  const FeaturedGame g = loadGame(fixture("robot_energy.json"));
  const auto r = feattrStar(g);
  const auto report = perProductReport(r.values[g.initial()]);
  ASSERT_EQ(report.size(), 4U);
  EXPECT_EQ(report[productIndex(g, {})], EnergyValue(0));
  EXPECT_TRUE(report[productIndex(g, {"fbrock"})].isTop());
  EXPECT_EQ(report[productIndex(g, {"fextra"})], EnergyValue(0));
  EXPECT_EQ(report[productIndex(g, {"fextra", "fbrock"})], EnergyValue(0));
  EXPECT_EQ(energyDomain(g).bound, 5);
}

TEST(Feattr, NonNegativeWeightsNeedNoCredit) {
  Rng rng(8);
  for (int round = 0; round < 30; ++round) {
    const FeaturedGame g = testing::randomGame(rng, GameKind::Energy);
    std::vector<Transition> ts = g.transitions();
    for (auto& t : ts) t.weight = std::fabs(*t.weight);
    const FeaturedGame pos(GameKind::Energy, g.products(), g.states(), 0, ts);
    for (const auto& f : feattrStar(pos).values) {
      ASSERT_EQ(f.size(), 1U);
      EXPECT_EQ(f.cells()[0].value, EnergyValue(0));
    }
  }
}

TEST(Fprog, Examples) {
  const MeasureSpace space({0, 1, 0, 1});
  const auto top = FeatureFunction<ParityMeasure>::constant(3, ParityMeasure::top());
  EXPECT_TRUE(fprog(top, 3, space).cells()[0].value.isTop());

  const auto zero = FeatureFunction<ParityMeasure>::constant(3, space.zero());
  EXPECT_EQ(fprog(zero, 0, space).cells()[0].value, space.zero());

  const FeaturedGame g = loadGame(fixture("coffee_parity.json"));
  const auto r = fpattrStar(g);
  const MeasureSpace ms = measureSpace(g);
  for (std::size_t s = 0; s < g.states().size(); ++s) {
    for (auto t : g.outgoing(s)) {
      const auto lifted = fprog(r.values[g.transition(t).to], *g.state(s).priority, ms);
      for (std::size_t p = 0; p < g.products().size(); ++p) {
        EXPECT_EQ(lifted.lookup(p), ms.prog(r.values[g.transition(t).to].lookup(p), *g.state(s).priority));
      }
    }
  }
}

TEST(Fpattr, CoffeeWinnersAreEuroProducts) {
  const FeaturedGame g = loadGame(fixture("coffee_parity.json"));
  const auto winners = parityWinners(fpattrStar(g), g.initial());
  ASSERT_EQ(winners.size(), 2U);
  for (const auto& c : winners) {
    EXPECT_TRUE(equivalent(c.guard.expr(), c.value ? expr(g, "euro") : expr(g, "!euro"), g.products()));
  }
}

TEST(Fpattr, UniformPriorities) {
  Rng rng(9);
  for (std::uint32_t prio : {0U, 1U}) {
    const FeaturedGame g = testing::randomGame(rng, GameKind::Parity);
    std::vector<State> states = g.states();
    for (auto& s : states) s.priority = prio;
    const FeaturedGame u(GameKind::Parity, g.products(), states, 0, g.transitions());
    const auto r = fpattrStar(u);
    for (std::size_t s = 0; s < states.size(); ++s) {
      const auto w = parityWinners(r, s);
      ASSERT_EQ(w.size(), 1U);
      EXPECT_EQ(w.cells()[0].value, prio == 0);
    }
  }
}

class ProjectionTheorem : public ::testing::TestWithParam<GameKind> {};

TEST_P(ProjectionTheorem, FeaturedLookupEqualsPlainSolution) {
  const GameKind kind = GetParam();
  Rng rng(100 + static_cast<std::uint64_t>(kind));
  const SolveParams params{0.9, 1e-8};
  const double tol = 2 * params.epsilon / (1 - params.lambda);
  for (int round = 0; round < 60; ++round) {
    const FeaturedGame g = testing::randomGame(rng, kind);
    const FeaturedValues fv = solveFeatured(g, params);
    for (std::size_t p = 0; p < g.products().size(); ++p) {
      const GameStructure proj = projectGame(g, p);
      const PlainValues pv = solvePlain(proj, params);
      std::visit(
          [&](const auto& fr) {
            using X = std::decay_t<decltype(fr.values[0].lookup(0))>;
            const auto& pr = std::get<PlainResult<X>>(pv);
            for (std::size_t s = 0; s < proj.size(); ++s) {
              if constexpr (std::is_same_v<X, double>) {
                EXPECT_NEAR(fr.values[s].lookup(p), pr.values[s], tol);
              } else {
                EXPECT_TRUE(fr.values[s].lookup(p) == pr.values[s]) << "product " << p << " state " << s;
              }
            }
          },
          fv);
    }
  }
}

TEST_P(ProjectionTheorem, IteratesAreCanonicalAndMonotone) {
  const GameKind kind = GetParam();
  Rng rng(200 + static_cast<std::uint64_t>(kind));
  for (int round = 0; round < 20; ++round) {
    const FeaturedGame g = testing::randomGame(rng, kind);
    auto check = [&](std::size_t, const auto& values) {
      for (const auto& f : values) {
        EXPECT_TRUE(f.isCanonical());
        EXPECT_TRUE(validatePartition([&] {
          std::vector<Guard> gs;
          for (const auto& c : f) gs.push_back(c.guard);
          return gs;
        }()));
      }
    };
    switch (kind) {
      case GameKind::Reachability: {
        std::vector<FeatureFunction<bool>> prev;
        fattrStar(g, [&](std::size_t k, const std::vector<FeatureFunction<bool>>& v) {
          check(k, v);
          for (std::size_t s = 0; s < prev.size(); ++s) {
            for (std::size_t p = 0; p < g.products().size(); ++p) EXPECT_LE(prev[s].lookup(p), v[s].lookup(p));
          }
          prev = v;
        });
        break;
      }
      case GameKind::MinReachability: {
        std::vector<FeatureFunction<ExtNat>> prev;
        fwattrStar(g, [&](std::size_t k, const std::vector<FeatureFunction<ExtNat>>& v) {
          check(k, v);
          for (std::size_t s = 0; s < prev.size(); ++s) {
            for (std::size_t p = 0; p < g.products().size(); ++p) EXPECT_GE(prev[s].lookup(p), v[s].lookup(p));
          }
          prev = v;
        });
        break;
      }
      case GameKind::Discounted:
        fdattrStar(g, 0.9, 1e-6, [&](std::size_t k, const std::vector<FeatureFunction<double>>& v) { check(k, v); });
        break;
      case GameKind::Energy: {
        std::vector<FeatureFunction<EnergyValue>> prev;
        feattrStar(g, [&](std::size_t k, const std::vector<FeatureFunction<EnergyValue>>& v) {
          check(k, v);
          for (std::size_t s = 0; s < prev.size(); ++s) {
            for (std::size_t p = 0; p < g.products().size(); ++p) EXPECT_LE(prev[s].lookup(p), v[s].lookup(p));
          }
          prev = v;
        });
        break;
      }
      case GameKind::Parity: {
        std::vector<FeatureFunction<ParityMeasure>> prev;
        fpattrStar(g, [&](std::size_t k, const std::vector<FeatureFunction<ParityMeasure>>& v) {
          check(k, v);
          for (std::size_t s = 0; s < prev.size(); ++s) {
            for (std::size_t p = 0; p < g.products().size(); ++p) EXPECT_LE(prev[s].lookup(p), v[s].lookup(p));
          }
          prev = v;
        });
        break;
      }
    }
  }
}

TEST_P(ProjectionTheorem, TrueGuardsNeverSplit) {
  const GameKind kind = GetParam();
  Rng rng(300 + static_cast<std::uint64_t>(kind));
  for (int round = 0; round < 20; ++round) {
    const FeaturedGame g = testing::randomGame(rng, kind).withTrueGuards();
    std::size_t widest = 0;
    auto observe = [&](std::size_t, const auto& values) {
      for (const auto& f : values) widest = std::max(widest, f.size());
    };
    switch (kind) {
      case GameKind::Reachability:
        fattrStar(g, observe);
        break;
      case GameKind::MinReachability:
        fwattrStar(g, observe);
        break;
      case GameKind::Discounted:
        fdattrStar(g, 0.9, 1e-6, observe);
        break;
      case GameKind::Energy:
        feattrStar(g, observe);
        break;
      case GameKind::Parity:
        fpattrStar(g, observe);
        break;
    }
    EXPECT_EQ(widest, 1U);
  }
}

INSTANTIATE_TEST_SUITE_P(AllKinds, ProjectionTheorem,
                         ::testing::Values(GameKind::Reachability, GameKind::MinReachability, GameKind::Discounted,
                                           GameKind::Energy, GameKind::Parity));

TEST(SolveFeatured, KindDispatchAndParameters) {
  const FeaturedGame g = loadGame(fixture("coffee_distance.json"));
  EXPECT_THROW(solveFeatured(g, {0.0, 1e-9}), ParameterError);
  EXPECT_THROW(fattrStar(g), ParameterError);
  EXPECT_TRUE(std::holds_alternative<FeaturedResult<double>>(solveFeatured(g, {0.5, 1e-6})));
}

}  // namespace
}  // namespace fgame
