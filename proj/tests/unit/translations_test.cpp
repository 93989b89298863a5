#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fgame/errors.hpp"
#include "fgame/featured_solvers.hpp"
#include "fgame/fts.hpp"
#include "fgame/game_io.hpp"
#include "fgame/translations.hpp"
#include "oracles.hpp"
#include "random_games.hpp"

namespace fgame {
namespace {

using testing::fixture;
using testing::Rng;

const char* const kCoffeeFormula = "nu X. mu Y. <ins>Y || <xxl>Y || <std>X";

TEST(MuParser, StructureAndPrecedence) {
  const MuFormula fix = parseMuFormula("mu X0. <a>tt && [b]ff || X0");
  ASSERT_EQ(fix.kind(), MuFormula::Kind::Mu);
  const MuFormula& f = fix.body();
  EXPECT_EQ(f.kind(), MuFormula::Kind::Or);
  EXPECT_EQ(f.lhs().kind(), MuFormula::Kind::And);
  EXPECT_EQ(f.lhs().lhs(), MuFormula::diamond("a", MuFormula::tt()));
  EXPECT_EQ(f.lhs().rhs(), MuFormula::box("b", MuFormula::ff()));
  EXPECT_EQ(f.rhs(), MuFormula::var("X0"));
}

TEST(MuParser, FixpointsExtendRight) {
  const MuFormula f = parseMuFormula(kCoffeeFormula);
  ASSERT_EQ(f.kind(), MuFormula::Kind::Nu);
  EXPECT_EQ(f.name(), "X");
  ASSERT_EQ(f.body().kind(), MuFormula::Kind::Mu);
  EXPECT_EQ(f.body().body().kind(), MuFormula::Kind::Or);
}

TEST(MuParser, PrinterRoundTrip) {
  for (const char* text : {kCoffeeFormula, "mu X. (<a>X || nu Y. <b>Y)", "(<a>tt || <b>tt) && [c]ff",
                           "nu X. [a](X && mu Y. <b>Y || tt)", "tt", "<a><b>ff"}) {
    const MuFormula f = parseMuFormula(text);
    EXPECT_EQ(parseMuFormula(toString(f)), f) << text;
  }
  EXPECT_EQ(toString(parseMuFormula(kCoffeeFormula)), kCoffeeFormula);
  EXPECT_EQ(toString(parseMuFormula("(<a>tt || <b>tt) && ff")), "(<a>tt || <b>tt) && ff");
}

TEST(MuParser, Errors) {
  EXPECT_THROW(parseMuFormula("mu X. Y"), ValidationError);
  EXPECT_THROW(parseMuFormula("<a> "), ParseError);
  EXPECT_THROW(parseMuFormula("mu tt. tt"), ParseError);
  EXPECT_THROW(parseMuFormula("tt tt"), ParseError);
  try {
    parseMuFormula("mu X. <a>Y");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 9U);
  }
}

TEST(MuParser, RebindingIsRenamedApart) {
  const MuFormula f = parseMuFormula("mu X_2. mu X. <a>X && nu X. <b>X && X_2");
  EXPECT_NE(f.body().body().rhs().name(), "X_2");
  const MuFormula g = parseMuFormula("mu X. (<a>X && nu X. <b>X)");
  const MuFormula& inner = g.body().rhs();
  ASSERT_EQ(inner.kind(), MuFormula::Kind::Nu);
  EXPECT_NE(inner.name(), "X");
  EXPECT_EQ(inner.body().body(), MuFormula::var(inner.name()));
  EXPECT_EQ(g.body().lhs().body(), MuFormula::var("X"));
}

TEST(MuFormulaOps, SubstituteAndOccursFree) {
  const MuFormula body = parseMuFormula("mu X. <a>X || <b>X");
  const MuFormula open = body.body();
  EXPECT_TRUE(occursFree(open, "X"));
  EXPECT_FALSE(occursFree(body, "X"));
  const MuFormula unfolded = substitute(open, "X", body);
  EXPECT_FALSE(occursFree(unfolded, "X"));
  EXPECT_EQ(unfolded.lhs(), MuFormula::diamond("a", body));
}

TEST(AlternationDepth, Examples) {
  EXPECT_EQ(alternationDepth(parseMuFormula("nu X. <a>X"), "X"), 1U);
  const MuFormula coffee = parseMuFormula(kCoffeeFormula);
  EXPECT_EQ(alternationDepth(coffee, "X"), 2U);
  EXPECT_EQ(alternationDepth(coffee, "Y"), 1U);
  EXPECT_EQ(alternationDepth(parseMuFormula("mu X. (<a>X || nu Y. <b>Y)"), "X"), 1U);
  EXPECT_EQ(alternationDepth(parseMuFormula("mu X. (<a>X || nu Y. <b>Y)"), "Y"), 1U);
  EXPECT_THROW(alternationDepth(coffee, "Z"), ValidationError);
}

TEST(MucalcTranslation, CoffeeGameStructure) {
  const Fts fts = loadFts(fixture("coffee_fts.json"));
  const FeaturedGame g = mucalcToParityGame(fts, parseMuFormula(kCoffeeFormula));
  EXPECT_EQ(g.kind(), GameKind::Parity);
  EXPECT_EQ(g.states().size(), 19U);
  EXPECT_EQ(g.transitions().size(), 27U);
  EXPECT_EQ(g.state(g.initial()).id, std::string("(s0, ") + kCoffeeFormula + ")");
  EXPECT_EQ(g.metadata().source, "mucalc");
  EXPECT_TRUE(validateNonBlocking(g).empty());
  EXPECT_TRUE(sameStructure(g, loadGame(fixture("coffee_parity.json"))));

  for (const auto& s : g.states()) {
    const std::string body = s.id.substr(s.id.find(", ") + 2);
    if (body.rfind("nu ", 0) == 0) {
      EXPECT_EQ(s.owner, Player::Two);
      EXPECT_EQ(*s.priority, 0U);
    } else if (body.rfind("mu ", 0) == 0) {
      EXPECT_EQ(*s.priority, 1U);
    } else if (body[0] == '<') {
      EXPECT_EQ(s.owner, Player::One);
      EXPECT_GE(*s.priority, 2U);
    }
  }
  std::set<std::string> guards;
  for (const auto& t : g.transitions()) guards.insert(toString(t.guard, g.features()));
  EXPECT_EQ(guards, (std::set<std::string>{"true", "euro", "!euro", "dollar", "!dollar"}));

  const auto winners = parityWinners(fpattrStar(g), g.initial());
  for (std::size_t p = 0; p < g.products().size(); ++p) {
    EXPECT_EQ(winners.lookup(p), g.products()[p].has(*g.features().indexOf("euro")));
  }
}

TEST(MucalcTranslation, TrivialFormulas) {
  const Fts fts = loadFts(fixture("coffee_fts.json"));
  const FeaturedGame t = mucalcToParityGame(fts, parseMuFormula("tt"));
  ASSERT_EQ(t.states().size(), 1U);
  EXPECT_EQ(*t.state(0).priority, 0U);
  const auto tw = parityWinners(fpattrStar(t), 0);
  ASSERT_EQ(tw.size(), 1U);
  EXPECT_TRUE(tw.cells()[0].value);

  const FeaturedGame f = mucalcToParityGame(fts, parseMuFormula("ff"));
  const auto fw = parityWinners(fpattrStar(f), 0);
  ASSERT_EQ(fw.size(), 1U);
  EXPECT_FALSE(fw.cells()[0].value);
}

TEST(MucalcTranslation, UnknownActionsWarn) {
  const Fts fts = loadFts(fixture("coffee_fts.json"));
  const FeaturedGame g = mucalcToParityGame(fts, parseMuFormula("<tea>tt || [tea]ff"));
  ASSERT_EQ(g.metadata().warnings.size(), 1U);
  EXPECT_NE(g.metadata().warnings[0].find("tea"), std::string::npos);
  EXPECT_TRUE(validateNonBlocking(g).empty());
  for (const auto& c : parityWinners(fpattrStar(g), g.initial())) EXPECT_TRUE(c.value);
  const FeaturedGame d = mucalcToParityGame(fts, parseMuFormula("<tea>tt"));
  for (const auto& c : parityWinners(fpattrStar(d), d.initial())) EXPECT_FALSE(c.value);
}

TEST(MucalcTranslation, SimpleModalitiesMatchDirectSemantics) {
  const Fts fts = loadFts(fixture("coffee_fts.json"));
  const std::size_t dollar = *fts.features().indexOf("dollar");
  const std::size_t euro = *fts.features().indexOf("euro");
  struct Case {
    const char* formula;
    std::function<bool(Product)> expected;
  };
  const std::vector<Case> cases = {
      {"<ins><ins>tt", [&](Product p) { return p.has(dollar); }},
      {"[ins]<std>tt", [&](Product p) { return p.has(euro); }},
      {"<ins>[ins]ff", [&](Product p) { return !p.has(dollar); }},
      {"nu X. <ins>tt && [ins]X", [](Product) { return false; }},
      {"mu X. [xxl]ff || <ins>X", [](Product) { return true; }},
  };
  for (const auto& c : cases) {
    const FeaturedGame g = mucalcToParityGame(fts, parseMuFormula(c.formula));
    EXPECT_TRUE(validateNonBlocking(g).empty()) << c.formula;
    const auto w = parityWinners(fpattrStar(g), g.initial());
    for (std::size_t p = 0; p < g.products().size(); ++p) {
      EXPECT_EQ(w.lookup(p), c.expected(g.products()[p])) << c.formula << " on #" << p;
    }
  }
}

TEST(MucalcTranslation, FixpointPrioritiesHaveTheirParity) {
  const Fts fts = loadFts(fixture("coffee_fts.json"));
  for (const char* text : {"mu X. nu Y. mu Z. <ins>X || <std>Y || <xxl>Z", "nu X. mu Y. [ins]Y && <std>X",
                           "mu X. <ins>X || nu Y. <std>Y", "nu X. [ins]X && mu Y. <xxl>Y || <std>tt"}) {
    const FeaturedGame g = mucalcToParityGame(fts, parseMuFormula(text));
    EXPECT_TRUE(validateNonBlocking(g).empty());
    for (const auto& s : g.states()) {
      const std::string body = s.id.substr(s.id.find(", ") + 2);
      if (body.rfind("mu ", 0) == 0) EXPECT_EQ(*s.priority % 2, 1U) << s.id;
      if (body.rfind("nu ", 0) == 0) EXPECT_EQ(*s.priority % 2, 0U) << s.id;
    }
  }
}

TEST(Tolerances, SplitExample) {
  const Fts f = loadFts(fixture("coffee_tolerance_fts.json"));
  EXPECT_TRUE(f.hasTolerances());
  const auto [low, high] = splitTolerances(f);
  std::vector<std::string> lows;
  std::vector<std::string> highs;
  for (std::size_t t = 0; t < f.transitions().size(); ++t) {
    if (f.transitions()[t].action == "ins") {
      EXPECT_EQ(*low.transitions()[t].weight, Rational(0));
      continue;
    }
    lows.push_back(low.transitions()[t].weight->toString());
    highs.push_back(high.transitions()[t].weight->toString());
  }
  std::sort(lows.begin(), lows.end());
  std::sort(highs.begin(), highs.end());
  EXPECT_EQ(lows, (std::vector<std::string>{"9/10", "9/5"}));
  EXPECT_EQ(highs, (std::vector<std::string>{"11/10", "11/5"}));
  EXPECT_FALSE(low.hasTolerances());
}

TEST(Tolerances, ZeroToleranceGivesIdenticalCopies) {
  const Fts f = parseFts(R"({"features": [], "products": "all", "actions": ["a"], "initial": "x",
    "states": [{"id": "x"}], "transitions": [{"from": "x", "to": "x", "action": "a",
    "weight": {"nominal": 3, "tolerance": 0}}]})");
  const auto [low, high] = splitTolerances(f);
  EXPECT_EQ(emitFts(low), emitFts(high));
  const FeaturedGame g = distanceGame(low, high, 0.5);
  const auto r = fdattrStar(g, std::sqrt(0.5), 1e-9);
  EXPECT_NEAR(r.values[g.initial()].lookup(0), 0.0, 1e-12);
}

TEST(DistanceTranslation, CoffeeGame) {
  const double lambda = 0.99;
  const auto [low, high] = splitTolerances(loadFts(fixture("coffee_tolerance_fts.json")));
  const FeaturedGame g = distanceGame(low, high, lambda);
  EXPECT_TRUE(sameStructure(g, loadGame(fixture("coffee_distance.json"))));
  EXPECT_EQ(g.kind(), GameKind::Discounted);
  EXPECT_EQ(g.metadata().source, "distance");
  EXPECT_DOUBLE_EQ(*g.metadata().discount, std::sqrt(lambda));
  EXPECT_DOUBLE_EQ(*g.metadata().lambda, lambda);
  EXPECT_EQ(g.state(g.initial()).id, "(s0,s0)");
  EXPECT_TRUE(validateNonBlocking(g).empty());

  std::set<double> responseWeights;
  for (const auto& t : g.transitions()) {
    if (g.state(t.from).owner == Player::One) {
      if (t.from != t.to) EXPECT_EQ(*t.weight, 0.0);
    } else if (t.from != t.to) {
      responseWeights.insert(*t.weight);
    }
  }
  const double r = std::sqrt(lambda);
  for (double w : responseWeights) {
    EXPECT_TRUE(std::fabs(w) < 1e-12 || std::fabs(w - 0.2 / r) < 1e-9 || std::fabs(w - 0.4 / r) < 1e-9) << w;
  }
  EXPECT_TRUE(responseWeights.count(0.0));
}

TEST(DistanceTranslation, ParametersAndCompatibility) {
  const auto [low, high] = splitTolerances(loadFts(fixture("coffee_tolerance_fts.json")));
  EXPECT_THROW(distanceGame(low, high, 1.0), ParameterError);
  EXPECT_THROW(distanceGame(low, high, 0.0), ParameterError);
  EXPECT_THROW(distanceGame(loadFts(fixture("coffee_tolerance_fts.json")), high, 0.5), ValidationError);
  EXPECT_THROW(distanceGame(loadFts(fixture("coffee_fts.json")), high, 0.5), ValidationError);
  EXPECT_THROW(directDistanceOracle(low, high, 7, 0.5, 1e-9), ParameterError);
}

TEST(DistanceOracle, Examples) {
  const auto one = [](const char* w) {
    return parseFts(std::string(R"({"features": [], "products": "all", "actions": ["a"], "initial": "x",
      "states": [{"id": "x"}], "transitions": [{"from": "x", "to": "x", "action": "a", "weight": )") +
                    w + "}]}");
  };
  EXPECT_NEAR(directDistanceOracle(one("1"), one("3"), 0, 0.5, 1e-12), 2.0 / (1 - 0.5), 1e-9);
  EXPECT_NEAR(directDistanceOracle(one("1"), one("1"), 0, 0.5, 1e-12), 0.0, 1e-12);
}

TEST(DistanceOracle, EqualsCoffeeReferenceValues) {
  const double lambda = 0.99;
  const auto [low, high] = splitTolerances(loadFts(fixture("coffee_tolerance_fts.json")));
  const auto euro = *low.products().indexOf(Product::fromNames(low.features(), std::vector<std::string>{"euro"}));
  const auto dollar = *low.products().indexOf(Product::fromNames(low.features(), std::vector<std::string>{"dollar"}));
  EXPECT_NEAR(directDistanceOracle(low, high, euro, lambda, 1e-10), 0.2 * lambda / (1 - lambda * lambda), 1e-6);
  EXPECT_NEAR(directDistanceOracle(low, high, dollar, lambda, 1e-10),
              0.4 * lambda * lambda / (1 - lambda * lambda * lambda), 1e-6);
}

TEST(DistanceTranslation, AgreesWithDirectIterationOnRandomPairs) {
  Rng rng(77);
  const double lambda = 0.81;
  const double eps = 1e-9;
  const double tol = 3 * eps / (1 - std::sqrt(lambda));
  for (int round = 0; round < 40; ++round) {
    const std::size_t features = testing::uniform(rng, 0, 2);
    const Fts f1 = testing::randomFts(rng, features, 4, 2);
    const Fts f2 = testing::randomFts(rng, features, 4, 2);
    const FeaturedGame g = distanceGame(f1, f2, lambda);
    const auto r = fdattrStar(g, std::sqrt(lambda), eps);
    const FeaturedGame back = distanceGame(f2, f1, lambda);
    const auto rb = fdattrStar(back, std::sqrt(lambda), eps);
    for (std::size_t p = 0; p < g.products().size(); ++p) {
      const double direct = directDistanceOracle(f1, f2, p, lambda, eps);
      EXPECT_NEAR(r.values[g.initial()].lookup(p), direct, tol);
      EXPECT_NEAR(rb.values[back.initial()].lookup(p), direct, 2 * tol);
      EXPECT_NEAR(directDistanceOracle(f2, f1, p, lambda, eps), direct, tol);
    }
    const FeaturedGame self = distanceGame(f1, f1, lambda);
    const auto rs = fdattrStar(self, std::sqrt(lambda), eps);
    for (std::size_t p = 0; p < g.products().size(); ++p) EXPECT_NEAR(rs.values[self.initial()].lookup(p), 0.0, tol);
  }
}

}  // namespace
}  // namespace fgame
