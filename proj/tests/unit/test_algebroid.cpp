#include "oracles/section_oracle.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace lax;

namespace {

AlgebroidPresentation bad_jacobi() {
  return presets::lie_algebra({"BadJacobi",
                               {"e1", "e2", "e3"},
                               {{{0, 1, 0}, Rational(1)}, {{1, 2, 1}, Rational(1)}, {{2, 0, 2}, Rational(1)}}});
}

}  // namespace

TEST(BuildDifferential, AbelianIsZero) {
  EXPECT_TRUE(build_differential(presets::abelian(2)).differential.is_zero());
}

TEST(BuildDifferential, AffineLine) {
  const auto p = presets::aff1();
  const auto d = build_differential(p).differential;
  EXPECT_TRUE(d.image("e1").is_zero());
  EXPECT_EQ(d.image("e2"), -(p.dual(0) * p.dual(1)));
}

TEST(BuildDifferential, TangentLine) {
  const auto p = presets::tangent(1);
  const auto d = build_differential(p).differential;
  EXPECT_EQ(d.image("x"), p.dual(0));
  EXPECT_TRUE(d.image("X").is_zero());
  EXPECT_TRUE(d.is_weight_preserving());
}

TEST(BuildDifferential, ReportsInhomogeneousEntry) {
  auto p = presets::tangent(1);
  p.set_anchor(0, 0, p.coordinate(0));
  try {
    build_differential(p);
    FAIL() << "expected a weight error";
  } catch (const WeightError& e) {
    EXPECT_EQ(e.entry().kind, TableEntry::Kind::anchor);
    EXPECT_EQ(e.entry().i, 0U);
  }
}

TEST(Validate, StandardPresentationsPass) {
  for (const auto& p : fixtures::standard_presentations()) {
    const auto r = validate(p);
    EXPECT_TRUE(r.passed) << p.name();
    EXPECT_TRUE(r.failures.empty());
    EXPECT_TRUE(build_differential(p).differential.is_weight_preserving()) << p.name();
  }
}

TEST(Validate, NonJacobiBracketFails) {
  const auto r = validate(bad_jacobi());
  EXPECT_FALSE(r.passed);
  ASSERT_FALSE(r.failures.empty());
  for (const auto& [name, residual] : r.failures)
    EXPECT_FALSE(residual.is_zero()) << name;
}

TEST(Validate, AgreesWithSectionOracleOnRandomTables) {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> entry(-1, 1);
  int passing = 0, failing = 0;
  for (int trial = 0; trial < 150; ++trial) {
    // Rank-2 algebroid over the line: anchors are multiples of x (weight
    // 0 frame) and brackets are constants.
    AlgebroidPresentation p("R", {{"x", 1}}, {{"a", 0, OddOrigin::fiber_dual}, {"b", 0, OddOrigin::fiber_dual}});
    for (std::size_t i = 0; i < 2; ++i)
      p.set_anchor(i, 0, p.coordinate(0) * Rational(entry(rng)));
    for (std::size_t k = 0; k < 2; ++k)
      p.set_bracket(0, 1, k, p.constant(entry(rng)));
    const bool oracle = lax::oracle::structure_holds(p, p.coordinate(0) * p.coordinate(0) + p.constant(1));
    EXPECT_EQ(validate(p).passed, oracle);
    (oracle ? passing : failing)++;
  }
  for (int trial = 0; trial < 150; ++trial) {
    AlgebroidPresentation p = presets::abelian(3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k)
          p.set_bracket(i, j, k, p.constant(entry(rng)));
    const bool oracle = lax::oracle::structure_holds(p, p.constant(1));
    EXPECT_EQ(validate(p).passed, oracle);
    (oracle ? passing : failing)++;
  }
  EXPECT_GT(passing, 0);
  EXPECT_GT(failing, 0);
}

TEST(Validate, DifferentialSquaresToZeroOnBlocks) {
  for (const auto& p : fixtures::standard_presentations()) {
    const auto d = build_differential(p).differential;
    for (int degree = 0; degree + 2 <= static_cast<int>(p.rank()); ++degree)
      for (int weight = 0; weight <= 3; ++weight)
        for (const auto& m : basis_enumerate(*p.generators(), degree, weight))
          EXPECT_TRUE(d.apply(d.apply(m)).is_zero()) << p.name();
  }
}

TEST(Presentation, BracketIsAntisymmetric) {
  auto p = presets::aff1();
  EXPECT_EQ(p.bracket(1, 0, 1), p.constant(-1));
  EXPECT_THROW(p.set_bracket(0, 0, 1, p.constant(1)), Error);
}

TEST(Presets, TangentLine) {
  const auto p = presets::standard_preset(std::size_t{1});
  EXPECT_EQ(p.base_dimension(), 1U);
  EXPECT_EQ(p.rank(), 1U);
  EXPECT_EQ(p.anchor(0, 0), p.constant(1));
}

TEST(Presets, AffineLineTranscription) {
  const auto p = presets::standard_preset(presets::LieAlgebraParams{"Aff1", {"e1", "e2"}, {{{0, 1, 1}, Rational(1)}}});
  EXPECT_EQ(p.base_dimension(), 0U);
  EXPECT_EQ(p.bracket(0, 1, 1), p.constant(1));
  EXPECT_TRUE(p.bracket(0, 1, 0).is_zero());
}

TEST(Presets, HorizontalFoliation) {
  const auto p = presets::standard_preset(presets::FoliationParams{
      "F", fixtures::plane(2), {"X"}, {{Rational(1), Rational(0)}}});
  EXPECT_EQ(p.rank(), 1U);
  EXPECT_EQ(p.anchor(0, 0), p.constant(1));
  EXPECT_TRUE(p.anchor(0, 1).is_zero());
  EXPECT_TRUE(p.bracket_table().empty());
}

TEST(Presets, RejectsDependentFieldsAndBadConstants) {
  EXPECT_THROW(presets::foliation({"F", fixtures::plane(2), {"X", "Y"}, {{Rational(1), Rational(0)}, {Rational(2), Rational(0)}}}),
               Error);
  EXPECT_THROW(presets::lie_algebra({"g", {"e1", "e2"}, {{{0, 1, 0}, Rational(1)}, {{1, 0, 0}, Rational(1)}}}), Error);
  EXPECT_THROW(presets::lie_algebra({"g", {"e1", "e2"}, {{{0, 0, 1}, Rational(1)}}}), Error);
}

TEST(Presets, ActionAlgebroid) {
  // e1 acts on the line by x ∂x, e2 acts trivially.
  presets::ActionParams params;
  params.algebra = {"AffAct", {"e1", "e2"}, {{{0, 1, 1}, Rational(-1)}}};
  params.base = {{"x", 1}};
  params.field = [](const AlgebroidPresentation& p, std::size_t i, std::size_t) {
    return i == 0 ? p.coordinate(0) : p.zero();
  };
  const auto p = presets::action(params);
  EXPECT_TRUE(validate(p).passed);
}
