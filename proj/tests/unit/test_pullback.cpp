#include "support.hpp"

#include <gtest/gtest.h>

using namespace lax;

namespace {

PullbackPresentation pull(const AlgebroidPresentation& p, std::size_t k) {
  std::vector<EvenGenerator> fiber;
  for (std::size_t a = 0; a < k; ++a)
    fiber.push_back({k == 1 ? "u" : "u" + std::to_string(a + 1), 1});
  return pullback_algebroid(p, trivial_submersion(p, fiber));
}

Element gen(const AlgebroidPresentation& p, const std::string& name) {
  return Element::generator(p.generators(), name);
}

}  // namespace

TEST(PullbackAlgebroid, AffineLine) {
  const auto pp = pull(presets::aff1(), 1);
  const auto& p = pp.presentation;
  ASSERT_EQ(p.rank(), 3U);
  EXPECT_EQ(p.frame_name(0), "v_u");
  EXPECT_EQ(p.frame_name(1), "e1");
  EXPECT_EQ(p.frame_name(2), "e2");
  EXPECT_EQ(p.anchor(0, 0), p.constant(1));
  EXPECT_TRUE(p.anchor(1, 0).is_zero());
  EXPECT_EQ(p.bracket(1, 2, 2), p.constant(1));
  EXPECT_TRUE(p.bracket(0, 1, 2).is_zero());
  EXPECT_TRUE(p.bracket(0, 2, 2).is_zero());
  EXPECT_TRUE(validate(p).passed);
}

TEST(PullbackAlgebroid, TangentLineIsTangentPlane) {
  const auto pp = pull(presets::tangent(1), 1);
  const auto& p = pp.presentation;
  EXPECT_EQ(p.base_dimension(), 2U);
  EXPECT_EQ(p.anchor(0, 1), p.constant(1));  // v_u -> d/du
  EXPECT_EQ(p.anchor(1, 0), p.constant(1));  // X -> d/dx
  EXPECT_TRUE(p.anchor(0, 0).is_zero());
  EXPECT_TRUE(p.anchor(1, 1).is_zero());
  EXPECT_TRUE(p.bracket_table().empty());
  const auto r = betti(de_rham_complex(p), Window{0, 2, 0, 3});
  EXPECT_EQ(r.table, betti(de_rham_complex(presets::tangent(2)), Window{0, 2, 0, 3}).table);
}

TEST(PullbackAlgebroid, AbelianOverPoint) {
  const auto pp = pull(presets::abelian(1), 1);
  const auto& p = pp.presentation;
  EXPECT_EQ(p.rank(), 2U);
  std::size_t nonzero_columns = 0;
  for (std::size_t i = 0; i < p.rank(); ++i)
    nonzero_columns += p.anchor(i, 0).is_zero() ? 0 : 1;
  EXPECT_EQ(nonzero_columns, 1U);
}

TEST(PullbackAlgebroid, ProjectionIsMorphismOnStandardPresentations) {
  for (const auto& a : fixtures::standard_presentations())
    for (std::size_t k = 1; k <= 2; ++k) {
      const auto pp = pull(a, k);
      EXPECT_TRUE(validate(pp.presentation).passed) << a.name();
      EXPECT_EQ(pp.projection->image(pp.base.generators()->from_global(0)).size(), 1U);
    }
}

TEST(PullbackAlgebroid, NameCollisions) {
  const auto t = presets::tangent(1);
  EXPECT_THROW(pullback_algebroid(t, trivial_submersion(t, {{"x", 1}})), Error);
  EXPECT_THROW(pullback_algebroid(t, trivial_submersion(t, {{"X", 1}})), Error);
  EXPECT_THROW(pullback_algebroid(t, trivial_submersion(t, {{"u", 1}, {"u", 2}})), Error);
  EXPECT_THROW(pullback_algebroid(t, trivial_submersion(t, {})), Error);
  EXPECT_THROW(pullback_algebroid(t, SubmersionSpec{"S", {{"y", 1}}, {{"u", 1}}}), Error);
}

TEST(Ses, RankArithmetic) {
  const auto a = ses_check(pull(presets::aff1(), 1));
  EXPECT_TRUE(a.passed);
  EXPECT_EQ(a.vertical_rank, 1U);
  EXPECT_EQ(a.base_rank, 2U);
  EXPECT_EQ(a.total_rank, 3U);
  const auto t = ses_check(pull(presets::tangent(1), 2));
  EXPECT_TRUE(t.passed);
  EXPECT_EQ(t.vertical_rank + t.base_rank, 3U);
  for (const auto& p : fixtures::standard_presentations())
    EXPECT_TRUE(ses_check(pull(p, 2)).passed) << p.name();
}

TEST(Ses, ZeroedInclusionColumnFails) {
  auto pp = pull(presets::tangent(1), 2);
  pp.inclusion = SparseRationalMatrix(pp.presentation.rank(), 2);
  pp.inclusion.set(0, 0, Rational(1));
  const auto r = ses_check(pp);
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.injective);
  EXPECT_FALSE(r.ranks_add_up);
}

TEST(VerticalDeRham, Examples) {
  const auto pp = pull(presets::tangent(1), 1);
  const auto& p = pp.presentation;
  const auto dv = vertical_de_rham(pp);
  const Element u = gen(p, "u");
  EXPECT_EQ(dv.apply(multiply(u, u)), multiply(u, gen(p, "v_u")) * Rational(2));
  EXPECT_TRUE(dv.apply(multiply(gen(p, "x"), gen(p, "X"))).is_zero());
  EXPECT_TRUE(derivation_commutator(dv, dv).is_zero());
  EXPECT_TRUE(dv.is_weight_preserving());
}

TEST(VerticalDeRham, PoincareLemmaInDegreeZero) {
  for (std::size_t k = 1; k <= 2; ++k) {
    const auto pp = pull(presets::tangent(1), k);
    const FormComplex vertical(vertical_de_rham(pp), "dV");
    for (int w = 0; w <= 3; ++w) {
      // Kernel on functions: polynomials in x alone, one per weight.
      const auto kernel = kernel_basis(vertical.differential(0, w));
      ASSERT_EQ(kernel.size(), 1U) << w;
      const Element f = vertical.element(kernel[0], 0, w);
      for (const auto& [m, c] : f.terms())
        for (std::size_t a = 0; a < k; ++a)
          EXPECT_EQ(m.exponents[1 + a], 0);
    }
  }
}

TEST(Filtration, Levels) {
  const auto pp = pull(presets::abelian(2), 2);
  const auto& p = pp.presentation;
  const Element eta1 = gen(p, "v_u1"), eta2 = gen(p, "v_u2");
  const Element xi1 = gen(p, "e1"), xi2 = gen(p, "e2");
  EXPECT_EQ(filtration_level(pp, multiply(eta1, xi1)), 1);
  EXPECT_EQ(filtration_level(pp, multiply(eta1, eta2)), 0);
  EXPECT_EQ(filtration_level(pp, multiply(xi1, xi2)), 2);
  EXPECT_EQ(filtration_level(pp, p.zero()), INT_MAX);
}

TEST(Filtration, DifferentialPreservesIt) {
  std::mt19937 rng(31);
  for (const auto& a : fixtures::standard_presentations()) {
    const auto pp = pull(a, 1);
    const auto& d = build_differential(pp.presentation).differential;
    for (int trial = 0; trial < 20; ++trial) {
      const Element e = fixtures::random_element(pp.presentation.generators(), trial % 3, trial % 3, rng);
      if (e.is_zero())
        continue;
      EXPECT_GE(filtration_level(pp, d.apply(e)), filtration_level(pp, e)) << a.name();
    }
  }
}

TEST(EPage, AffineLineDeRhamWeightZero) {
  const auto pp = pull(presets::aff1(), 1);
  const std::vector<std::size_t> bottom{1, 2, 1};
  for (int p = 0; p <= 2; ++p) {
    const auto b0 = e_page(pp, ComplexKind::dr, p, 0, 0);
    const auto b1 = e_page(pp, ComplexKind::dr, p, 1, 0);
    // Weight 0 with u of weight 1: only u-free monomials, so E₀ = C^p(A) ⊕ 0.
    EXPECT_EQ(b0.e0_dimension, bottom[p]);
    EXPECT_EQ(b1.e0_dimension, 0U);
    EXPECT_EQ(b0.e1_dimension, bottom[p]);
    EXPECT_EQ(b1.e1_dimension, 0U);
  }
  const auto b = e_page(pp, ComplexKind::dr, 1, 1, 1);
  EXPECT_EQ(b.e0_dimension, 2U);  // η ξ̄¹, η ξ̄²
  EXPECT_EQ(b.e1_dimension, 0U);
}

TEST(EPage, TangentLinePoincare) {
  const auto pp = pull(presets::tangent(1), 1);
  const auto b = e_page(pp, ComplexKind::dr, 0, 1, 1);
  EXPECT_EQ(b.e0_dimension, 1U);  // η
  EXPECT_EQ(b.e1_dimension, 0U);
  EXPECT_EQ(e_page(pp, ComplexKind::dr, 0, 2, 3).e0_dimension, 0U);
  EXPECT_EQ(e_page(pp, ComplexKind::def, 0, 2, 3).e0_dimension, 0U);
  EXPECT_THROW(e_page(pp, ComplexKind::dr, -1, 0, 0), Error);
  EXPECT_THROW(e_page(pp, ComplexKind::def, -2, 0, 0), Error);
  EXPECT_THROW(e_page(pp, ComplexKind::dr, 0, -1, 0), Error);
}

TEST(EPage, D0IsVerticalDifferentialAndE1Collapses) {
  for (const auto& a : {presets::aff1(), presets::tangent(1)})
    for (auto kind : {ComplexKind::dr, ComplexKind::def})
      for (int w = 0; w <= 2; ++w) {
        const auto r = e1_check(pull(a, 1), kind, w, 2);
        EXPECT_TRUE(r.vertical_rows_vanish) << a.name() << " " << kind_name(kind) << " w=" << w;
        EXPECT_TRUE(r.base_row_identified) << a.name() << " " << kind_name(kind) << " w=" << w;
        EXPECT_TRUE(r.d1_matches) << a.name() << " " << kind_name(kind) << " w=" << w;
      }
}

TEST(FnDecompose, DeRhamDifferential) {
  const FormAlgebra fa({{"x", 1}}, {{"u", 1}});
  const auto dec = fn_decompose(fa, fa.d());
  EXPECT_EQ(dec.j.form_degree, 1);
  EXPECT_EQ(dec.j.components[0], Element::generator(fa.generators(), "dx"));
  EXPECT_EQ(dec.j.components[1], Element::generator(fa.generators(), "du"));
  EXPECT_TRUE(dec.k.is_zero());
}

TEST(FnDecompose, ContractionAndLieDerivative) {
  const FormAlgebra fa({{"x", 1}}, {{"u", 1}});
  const Element u = Element::generator(fa.generators(), "u");
  FormValuedVectorField x{0, {fa.zero(), multiply(u, u)}};  // u² ∂/∂u
  const auto ix = contraction(fa, x);
  const auto dec_i = fn_decompose(fa, ix);
  EXPECT_TRUE(dec_i.j.is_zero());
  EXPECT_EQ(dec_i.k.components, x.components);
  const auto lx = lie_derivative(fa, x);
  const auto dec_l = fn_decompose(fa, lx);
  EXPECT_EQ(dec_l.j.components, x.components);
  EXPECT_TRUE(dec_l.k.is_zero());
}

TEST(FnDecompose, RejectsNonDerivation) {
  const FormAlgebra fa({}, {{"u", 1}});
  // f ↦ f·f is not a derivation.
  EXPECT_THROW(fn_decompose(fa, [](const Element& f) { return multiply(f, f) - multiply(f, f) + f; }, 0), Error);
  const auto d = fa.d();
  EXPECT_NO_THROW(fn_decompose(fa, [&](const Element& f) { return d.apply(f); }, 1));
}

TEST(FnDecompose, DecompositionIsInjectiveOnBlocks) {
  const FormAlgebra fa({{"x", 1}}, {{"u", 1}});
  const auto all = ImageComplex(fa.generators(), fa.generators(), all_generators(*fa.generators()),
                                [](const ImageComplex::Images& i, int) { return i; }, "all");
  for (int deg = 0; deg <= 2; ++deg)
    for (int w = -1; w <= 2; ++w) {
      std::vector<RationalVector> columns;
      const std::size_t n = all.dimension(deg, w);
      for (std::size_t j = 0; j < n; ++j) {
        const auto v = derivation_from_images(fa.generators(), all.unit_images(j, deg, w), deg);
        const auto dec = fn_decompose(fa, v);
        ImageComplex::Images packed(fa.generators()->size(), fa.zero());
        for (std::size_t c = 0; c < fa.size(); ++c) {
          packed[c] = dec.j.components[c];
          packed[fa.size() + c] = dec.k.components[c];
        }
        columns.push_back(all.coordinates(packed, deg, w));
      }
      EXPECT_EQ(rank(from_columns(n, columns)), n);
    }
}

TEST(Homotopy, CartanExamples) {
  const FormAlgebra fa({{"x", 1}}, {{"u", 1}});
  const Element u = Element::generator(fa.generators(), "u");
  const Element x = Element::generator(fa.generators(), "x");
  FormValuedVectorField field{0, {fa.zero(), multiply(x, u)}};
  // V = L_X: h(V) = i_X.
  EXPECT_EQ(homotopy_h(fa, lie_derivative(fa, field), true), contraction(fa, field));
  EXPECT_TRUE(homotopy_law(fa, lie_derivative(fa, field)));
  // V = i_X has degree −1, so h(V) = 0 and the law reads i_X = h(L_X).
  EXPECT_TRUE(homotopy_law(fa, contraction(fa, field)));
  // Horizontal fields are rejected under the vertical check.
  FormValuedVectorField horizontal{0, {u, fa.zero()}};
  EXPECT_THROW(homotopy_h(fa, lie_derivative(fa, horizontal), true), Error);
  EXPECT_NO_THROW(homotopy_h(fa, lie_derivative(fa, horizontal), false));
  EXPECT_TRUE(homotopy_law(fa, lie_derivative(fa, horizontal), false));
}

TEST(Homotopy, LawOnRandomVerticalDerivations) {
  std::mt19937 rng(37);
  const FormAlgebra fa({{"x", 1}}, {{"u", 1}});
  const auto v = vertical_derivations(fa);
  for (int deg = -1; deg <= 2; ++deg)
    for (int w = -1; w <= 2; ++w) {
      const std::size_t n = v.dimension(deg, w);
      if (n == 0)
        continue;
      RationalVector coef(n);
      for (auto& c : coef)
        c = Rational(static_cast<long>(rng() % 7) - 3);
      const auto d = derivation_from_images(fa.generators(), v.images(coef, deg, w), deg);
      EXPECT_TRUE(homotopy_law(fa, d)) << deg << " " << w;
    }
}

TEST(KernelComplex, Acyclic) {
  const auto aff = pull(presets::aff1(), 1);
  const auto r = kernel_acyclicity_check(aff, 0, 0);
  EXPECT_TRUE(r.passed());
  const auto tr = pull(presets::tangent(1), 1);
  const auto kernel = kernel_complex(tr);
  for (int deg = -1; deg <= 2; ++deg)
    for (int w = 0; w <= 2; ++w) {
      const auto rep = kernel_acyclicity_check(tr, kernel, deg, w);
      EXPECT_EQ(rep.betti, 0U);
      EXPECT_TRUE(rep.homotopy_law) << deg << " " << w;
      EXPECT_TRUE(rep.tensor_agrees) << deg << " " << w;
    }
  // Block with nothing in it.
  const auto empty = kernel_acyclicity_check(tr, kernel, -1, -5);
  EXPECT_EQ(empty.dimension, 0U);
  EXPECT_TRUE(empty.passed());
}

TEST(TensorModel, GradedDimensionsAndMultiplication) {
  for (const auto& a : {presets::aff1(), presets::tangent(1), presets::abelian(2)})
    for (auto kind : {ComplexKind::dr, ComplexKind::def})
      for (int deg = kind == ComplexKind::dr ? 0 : -1; deg <= 2; ++deg)
        for (int w = 0; w <= 2; ++w) {
          const auto r = tensor_model_check(pull(a, 1), kind, deg, w);
          EXPECT_EQ(r.dimension, r.model_dimension) << a.name() << " " << kind_name(kind) << " " << deg << " " << w;
          EXPECT_TRUE(r.multiplication_bijective) << a.name() << " " << deg << " " << w;
          EXPECT_TRUE(r.dg_compatible) << a.name() << " " << deg << " " << w;
        }
}
