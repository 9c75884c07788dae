#include "falsify/error.hpp"
#include "falsify/stl.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace falsify {
namespace {

const std::vector<std::string> kX = {"x"};
const std::vector<std::string> kXY = {"x", "y"};

FormulaPtr parse(std::string_view text, const std::vector<std::string>& vars = kX) {
  return parse_formula(text, vars).formula;
}

TEST(ParseFormula, ListingExample) {
  EXPECT_TRUE(same_structure(parse("[]p1"), always(predicate("p1"))));
}

TEST(ParseFormula, BarePredicate) {
  auto parsed = parse_formula("p1", kX);
  EXPECT_TRUE(same_structure(parsed.formula, predicate("p1")));
  EXPECT_TRUE(parsed.inline_predicates.empty());
}

TEST(ParseFormula, InlineComparisonBecomesLinearPredicate) {
  auto parsed = parse_formula("always[0, 2.5] (x <= 5.0)", kXY);
  ASSERT_EQ(parsed.inline_predicates.size(), 1u);
  const auto& p = parsed.inline_predicates.front();
  EXPECT_TRUE(same_structure(parsed.formula, always(predicate(p.name()), TimeBound{0.0, 2.5})));
  EXPECT_EQ(std::vector<double>(p.coefficients().begin(), p.coefficients().end()), (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(p.bound(), 5.0);

  auto again = parse(format_formula(*parsed.formula), kXY);
  EXPECT_TRUE(same_structure(again, parsed.formula));
}

TEST(ParseFormula, GreaterEqualIsNegatedHalfSpace) {
  auto parsed = parse_formula("y >= -1.5", kXY);
  const auto& p = parsed.inline_predicates.at(0);
  EXPECT_EQ(std::vector<double>(p.coefficients().begin(), p.coefficients().end()), (std::vector<double>{0.0, -1.0}));
  EXPECT_EQ(p.bound(), 1.5);
}

TEST(ParseFormula, InlineNamesAreFreshPerComparison) {
  auto parsed = parse_formula("x <= 1 and x >= 0", kX);
  ASSERT_EQ(parsed.inline_predicates.size(), 2u);
  EXPECT_NE(parsed.inline_predicates[0].name(), parsed.inline_predicates[1].name());
}

TEST(ParseFormula, Precedence) {
  auto a = predicate("a"), b = predicate("b"), c = predicate("c");
  EXPECT_TRUE(same_structure(parse("a and b or c"), disjunction(conjunction(a, b), c)));
  EXPECT_TRUE(same_structure(parse("a or b and c"), disjunction(a, conjunction(b, c))));
  EXPECT_TRUE(same_structure(parse("not F a"), negation(eventually(a))));
  EXPECT_TRUE(same_structure(parse("F a and b"), conjunction(eventually(a), b)));
  EXPECT_TRUE(same_structure(parse("G (a and b)"), always(conjunction(a, b))));
}

TEST(ParseFormula, ImplicationDesugarsRightAssociative) {
  auto a = predicate("a"), b = predicate("b"), c = predicate("c");
  EXPECT_TRUE(same_structure(parse("a -> b"), disjunction(negation(a), b)));
  EXPECT_TRUE(same_structure(parse("a -> b -> c"), disjunction(negation(a), disjunction(negation(b), c))));
  EXPECT_TRUE(same_structure(parse("a or b -> c"), disjunction(negation(disjunction(a, b)), c)));
}

TEST(ParseFormula, AliasesCollapse) {
  const std::vector<std::vector<std::string>> rows = {
      {"G p1", "always p1", "[] p1", "[]p1"},
      {"F p1", "eventually p1", "<> p1"},
      {"X p1", "next p1"},
      {"(p1 U p2)", "(p1 until p2)"},
      {"G[0, 1] p1", "always[0,1] p1", "[][0, 1.0] p1"},
      {"(p1 U[0, 2] p2)", "(p1 until[0.0, 2] p2)"},
      {"!p1", "not p1"},
      {"p1 and p2", "p1 /\\ p2", "p1 && p2"},
      {"p1 or p2", "p1 \\/ p2", "p1 || p2"},
  };
  for (const auto& row : rows) {
    const auto first = parse(row.front());
    for (const auto& spelling : row) {
      EXPECT_TRUE(same_structure(parse(spelling), first)) << spelling << " vs " << row.front();
    }
  }
}

TEST(ParseFormula, InfiniteUpperBound) {
  EXPECT_TRUE(same_structure(parse("F[1, inf] p"), eventually(predicate("p"), TimeBound{1.0, kInfinity})));
}

TEST(ParseFormula, AbsentBoundDiffersFromExplicitUnboundedWindow) {
  EXPECT_FALSE(same_structure(parse("F p"), parse("F[0, inf] p")));
}

TEST(ParseFormula, KeywordsAreCaseSensitive) {
  EXPECT_TRUE(same_structure(parse("g"), predicate("g")));
  EXPECT_TRUE(same_structure(parse("Always"), predicate("Always")));
}

TEST(ParseFormula, UntilRequiresParentheses) {
  EXPECT_THROW(parse("p1 U p2"), ParseError);
}

TEST(ParseFormula, SyntaxErrorReportsPositionAndExpected) {
  try {
    parse("always (p1");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 10u);
    EXPECT_NE(std::find(e.expected().begin(), e.expected().end(), "')'"), e.expected().end());
  }
  try {
    parse("p1 and");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 6u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(ParseFormula, Errors) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("   "), ParseError);
  EXPECT_THROW(parse("z <= 1"), ParseError);       // unknown variable
  EXPECT_THROW(parse("F[2, 1] p"), ParseError);    // lower > upper
  EXPECT_THROW(parse("F[-1, 1] p"), ParseError);   // negative lower
  EXPECT_THROW(parse("F[0, 1 p"), ParseError);
  EXPECT_THROW(parse("F[inf, inf] p"), ParseError);
  EXPECT_THROW(parse("p1 $ p2"), ParseError);
  EXPECT_THROW(parse("x <= abc"), ParseError);
  EXPECT_THROW(parse("p1 p2"), ParseError);
  EXPECT_THROW(parse_formula("p", std::vector<std::string>{"x", "x"}), ValidationError);
}

TEST(FormatFormula, CanonicalText) {
  EXPECT_EQ(format_formula(*predicate("p1")), "p1");
  EXPECT_EQ(format_formula(*always(predicate("p1"))), "always (p1)");
  EXPECT_EQ(format_formula(*until(predicate("p1"), predicate("p2"), TimeBound{0, 1})), "(p1 until[0.0, 1.0] p2)");
  EXPECT_EQ(format_formula(*eventually(predicate("p"), TimeBound{0.5, kInfinity})), "eventually[0.5, inf] (p)");
}

TEST(FormatReal, RoundTrips) {
  for (double v : {0.0, 1.0, 0.1, 1e-300, 123456789.125, 1e22, 2.5}) {
    EXPECT_EQ(std::stod(format_real(v)), v);
  }
  EXPECT_EQ(format_real(kInfinity), "inf");
  EXPECT_EQ(format_real(3.0), "3.0");
}

std::optional<TimeBound> arbitrary_bound(testing::Engine& g) {
  if (testing::pick(g, 4) == 0) return std::nullopt;
  std::uniform_real_distribution<double> u(0.0, 1e3);
  double lo = testing::pick(g, 5) == 0 ? 0.0 : u(g) * std::pow(10.0, static_cast<double>(testing::pick(g, 9)) - 4.0);
  double hi = testing::pick(g, 4) == 0 ? kInfinity : lo + u(g);
  return TimeBound{lo, hi};
}

TEST(FormatFormula, RoundTripProperty) {
  testing::Engine g(20240611);
  const std::vector<std::string> names = {"p1", "q", "speed_ok", "_a9", "G1", "inf", "Xx"};
  for (int i = 0; i < 1000; ++i) {
    auto f = testing::random_formula(g, 6, names, arbitrary_bound);
    const auto text = format_formula(*f);
    auto back = parse(text);
    ASSERT_TRUE(same_structure(back, f)) << text;
    EXPECT_EQ(format_formula(*back), text);
  }
}

TEST(LinearPredicate, RejectsDegenerateCoefficients) {
  EXPECT_THROW(LinearPredicate("p", {0.0, 0.0}, 1.0), ValidationError);
  EXPECT_THROW(LinearPredicate("p", {}, 1.0), ValidationError);
  EXPECT_THROW(LinearPredicate("p", {std::nan("")}, 1.0), ValidationError);
  EXPECT_DOUBLE_EQ(LinearPredicate("p", {3.0, 4.0}, 10.0).norm(), 5.0);
}

TEST(PredicateMap, RejectsDuplicatesAndDimensionMismatch) {
  PredicateMap map({"x", "y"});
  map.add(LinearPredicate("p", {1.0, 0.0}, 1.0));
  EXPECT_THROW(map.add(LinearPredicate("p", {0.0, 1.0}, 1.0)), ValidationError);
  EXPECT_THROW(map.add(LinearPredicate("q", {1.0}, 1.0)), ValidationError);
  EXPECT_THROW(PredicateMap({"x", "x"}), ValidationError);
  EXPECT_EQ(map.column("y"), 1u);
  EXPECT_FALSE(map.column("z").has_value());
}

TEST(TimeBound, Checked) {
  EXPECT_THROW(TimeBound::checked(-0.1, 1.0), ValidationError);
  EXPECT_THROW(TimeBound::checked(2.0, 1.0), ValidationError);
  EXPECT_NO_THROW(TimeBound::checked(1.0, 1.0));
}

}  // namespace
}  // namespace falsify
