#include <gtest/gtest.h>

#include "fgame/errors.hpp"
#include "fgame/feature_logic.hpp"
#include "oracles.hpp"
#include "random_games.hpp"

namespace fgame {
namespace {

using testing::Rng;

const FeatureSet kCoffee({"euro", "dollar"});

ProductSet coffeeProducts() {
  return ProductSet(kCoffee, {Product(0b01), Product(0b10), Product(0b11)});
}

FeatureExpr parse(const std::string& s, const FeatureSet& fs = kCoffee) { return parseFeatureExpr(s, fs); }

TEST(FeatureLogic, EvalExamples) {
  EXPECT_TRUE(eval(parse("euro && !dollar"), Product(0b01), kCoffee));
  EXPECT_TRUE(eval(FeatureExpr::top(), Product(0), FeatureSet{}));
  const FeatureSet robot({"fextra", "fbrock"});
  EXPECT_FALSE(eval(parse("!fbrock || fextra", robot), Product(0b10), robot));
}

TEST(FeatureLogic, SatExamples) {
  const ProductSet px = coffeeProducts();
  EXPECT_TRUE(sat(parse("euro && dollar"), px));
  EXPECT_FALSE(sat(parse("euro && !euro"), px));
  EXPECT_FALSE(sat(parse("!euro && !dollar"), px));
  EXPECT_TRUE(sat(parse("!euro && !dollar"), ProductSet::all(kCoffee)));
}

TEST(FeatureLogic, EquivalentExamples) {
  const ProductSet px = coffeeProducts();
  EXPECT_TRUE(equivalent(parse("euro || !euro"), FeatureExpr::top(), px));
  EXPECT_TRUE(equivalent(parse("euro"), parse("euro && (euro || dollar)"), px));
  EXPECT_FALSE(equivalent(parse("euro"), parse("dollar"), px));
  // Relative to px: no product lacks both, so "euro" and "!dollar || euro" agree.
  EXPECT_TRUE(equivalent(parse("euro || dollar"), FeatureExpr::top(), px));
  EXPECT_FALSE(equivalent(parse("euro || dollar"), FeatureExpr::top(), ProductSet::all(kCoffee)));
}

TEST(FeatureLogic, CharFormulaExamples) {
  EXPECT_EQ(toString(charFormula(Product(0b01), kCoffee), kCoffee), "euro && !dollar");
  const FeatureSet single({"f"});
  EXPECT_EQ(toString(charFormula(Product(0), single), single), "!f");
  const FeatureSet robot({"fextra", "fbrock"});
  EXPECT_EQ(toString(charFormula(Product(0b11), robot), robot), "fextra && fbrock");
  EXPECT_EQ(toString(charFormula(Product(0), FeatureSet{}), FeatureSet{}), "true");
}

TEST(FeatureLogic, CharFormulaIdentifiesExactlyItsProduct) {
  const FeatureSet fs({"a", "b", "c"});
  const ProductSet px = ProductSet::all(fs);
  for (const auto& p : px) {
    for (const auto& q : px) EXPECT_EQ(eval(charFormula(p, fs), q, fs), p == q);
  }
}

TEST(FeatureLogic, PartitionExamples) {
  const ProductSet px = coffeeProducts();
  const std::vector<FeatureExpr> one{FeatureExpr::top()};
  EXPECT_TRUE(validatePartition(one, px));
  const std::vector<FeatureExpr> split{parse("euro"), parse("!euro")};
  EXPECT_TRUE(validatePartition(split, px));
  const std::vector<FeatureExpr> overlap{parse("euro"), parse("dollar")};
  EXPECT_FALSE(validatePartition(overlap, px));
  const std::vector<FeatureExpr> gap{parse("euro && dollar"), parse("!dollar")};
  EXPECT_FALSE(validatePartition(gap, px));
  const std::vector<FeatureExpr> emptyCell{parse("euro"), parse("!euro"), parse("!euro && !dollar")};
  EXPECT_FALSE(validatePartition(emptyCell, px));
}

TEST(FeatureLogic, ParserPrecedenceAndErrors) {
  const FeatureSet fs({"a", "b", "c"});
  EXPECT_EQ(parse("a || b && c", fs), parse("a || (b && c)", fs));
  EXPECT_EQ(parse("!a && b", fs), parse("(!a) && b", fs));
  EXPECT_THROW(parse("a &&", fs), ParseError);
  EXPECT_THROW(parse("a || zz", fs), ParseError);
  EXPECT_THROW(parse("(a", fs), ParseError);
  try {
    parse("a && ?", fs);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5U);
  }
}

TEST(FeatureLogic, ProductOrderIsLexicographicInFeatureOrder) {
  const ProductSet px = ProductSet::all(kCoffee);
  ASSERT_EQ(px.size(), 4U);
  EXPECT_EQ(px[0].toString(kCoffee), "{}");
  EXPECT_EQ(px[1].toString(kCoffee), "{dollar}");
  EXPECT_EQ(px[2].toString(kCoffee), "{euro}");
  EXPECT_EQ(px[3].toString(kCoffee), "{euro,dollar}");
  EXPECT_EQ(ProductSet::all(FeatureSet{}).size(), 1U);
}

TEST(FeatureLogic, RandomExpressionsAgreeWithTruthTables) {
  Rng rng(7);
  for (int round = 0; round < 300; ++round) {
    const std::size_t nf = testing::uniform(rng, 0, 4);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < nf; ++i) names.push_back("f" + std::to_string(i));
    const FeatureSet fs(names);
    const ProductSet px = ProductSet::all(fs);
    const FeatureExpr a = testing::randomExpr(rng, nf, 4);
    const FeatureExpr b = testing::randomExpr(rng, nf, 4);

    const ProductMask da = denotation(a, px);
    bool anyA = false;
    bool same = true;
    for (std::size_t i = 0; i < px.size(); ++i) {
      const bool ta = testing::truthValue(a, px[i]);
      const bool tb = testing::truthValue(b, px[i]);
      EXPECT_EQ(eval(a, px[i], fs), ta);
      EXPECT_EQ(da.test(i), ta);
      anyA = anyA || ta;
      same = same && ta == tb;
    }
    EXPECT_EQ(sat(a, px), anyA);
    EXPECT_EQ(equivalent(a, b, px), same);

    // The printer's output parses back to an equivalent expression.
    const FeatureExpr back = parseFeatureExpr(toString(a, fs), fs);
    EXPECT_TRUE(equivalent(a, back, px)) << toString(a, fs);
    EXPECT_EQ(toString(back, fs), toString(a, fs));
  }
}

TEST(FeatureLogic, GuardConnectivesTrackDenotations) {
  Rng rng(11);
  const FeatureSet fs({"a", "b", "c"});
  const ProductSet px = ProductSet::all(fs);
  for (int round = 0; round < 200; ++round) {
    const Guard g = Guard::of(testing::randomExpr(rng, 3, 3), px);
    const Guard h = Guard::of(testing::randomExpr(rng, 3, 3), px);
    for (const Guard& r : {g && h, g || h, !g}) {
      EXPECT_EQ(denotation(r.expr(), px), r.mask());
    }
  }
}

TEST(FeatureLogic, GuardSimplifiesWhenDenotationUnchanged) {
  const FeatureSet fs({"a", "b"});
  const ProductSet px = ProductSet::all(fs);
  const Guard a = Guard::of(parse("a", fs), px);
  const Guard top = Guard::top(px.size());
  EXPECT_EQ(toString((a && top).expr(), fs), "a");
  EXPECT_EQ(toString(((a && a) && a).expr(), fs), "a");
  EXPECT_EQ(toString((!!a).expr(), fs), "a");
}

}  // namespace
}  // namespace fgame
