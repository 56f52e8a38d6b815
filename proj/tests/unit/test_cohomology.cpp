#include "oracles/ce_oracle.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace lax;

namespace {

lax::oracle::Constants sl2_constants() {
  return {{{0, 1, 1}, 2}, {{0, 2, 2}, -2}, {{1, 2, 0}, 1}};
}

SparseRationalMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937& rng, int sparsity) {
  std::uniform_int_distribution<int> entry(-4, 4), keep(0, sparsity);
  SparseRationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (keep(rng) == 0)
        m.set(i, j, Rational(entry(rng), 1 + std::abs(entry(rng))));
  return m;
}

std::vector<std::vector<mpq_class>> to_dense_mpq(const SparseRationalMatrix& m) {
  std::vector<std::vector<mpq_class>> out(m.rows(), std::vector<mpq_class>(m.cols(), 0));
  for (const auto& [k, x] : m.entries())
    out[k.first][k.second] = mpq_class(x.numerator(), x.denominator());
  return out;
}

}  // namespace

TEST(Linalg, BareissRankMatchesDenseOracle) {
  std::mt19937 rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + trial % 9, cols = 1 + (trial / 9) % 9;
    const SparseRationalMatrix m = random_matrix(rows, cols, rng, trial % 4);
    EXPECT_EQ(rank(m), lax::oracle::dense_rank(to_dense_mpq(m)));
  }
  // Rank-deficient products.
  for (int trial = 0; trial < 50; ++trial) {
    const SparseRationalMatrix a = random_matrix(7, 3, rng, 1), b = random_matrix(3, 6, rng, 1);
    EXPECT_EQ(rank(a * b), lax::oracle::dense_rank(to_dense_mpq(a * b)));
    EXPECT_LE(rank(a * b), 3U);
  }
}

TEST(Linalg, KernelAndSolve) {
  std::mt19937 rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const SparseRationalMatrix m = random_matrix(4, 6, rng, 2);
    const auto kernel = kernel_basis(m);
    EXPECT_EQ(kernel.size() + rank(m), m.cols());
    for (const auto& v : kernel)
      for (const auto& x : m.apply(v))
        EXPECT_TRUE(x.is_zero());
    RationalVector v(6);
    for (auto& x : v)
      x = Rational(static_cast<long>(rng() % 7) - 3);
    const auto b = m.apply(v);
    const auto solved = solve(m, b);
    ASSERT_TRUE(solved);
    EXPECT_EQ(m.apply(*solved), b);
  }
  SparseRationalMatrix m(2, 1);
  m.set(0, 0, Rational(1));
  EXPECT_FALSE(solve(m, {Rational(0), Rational(1)}));
}

TEST(BlockMatrix, HandExamples) {
  const auto aff = de_rham_complex(presets::aff1());
  const auto m = block_matrix(aff, 1, 0);
  EXPECT_EQ(m.rows(), 1U);
  EXPECT_EQ(m.cols(), 2U);
  EXPECT_TRUE(m.get(0, 0).is_zero());
  EXPECT_EQ(m.get(0, 1), Rational(-1));
  EXPECT_EQ(rank(m), 1U);
  EXPECT_TRUE(block_matrix(de_rham_complex(presets::abelian(2)), 1, 0).is_zero());
  const auto t = block_matrix(build_differential(presets::tangent(1)).differential, 0, 1);
  EXPECT_EQ(t.rows(), 1U);
  EXPECT_EQ(t.get(0, 0), Rational(1));
}

TEST(Betti, AffineLineDeRham) {
  const auto r = betti(de_rham_complex(presets::aff1()), Window{0, 2, 0, 0});
  EXPECT_EQ(r.row(0), (std::vector<std::size_t>{1, 1, 0}));
}

TEST(Betti, AbelianPlaneDeformation) {
  const auto r = betti(deformation_complex(presets::abelian(2)), Window{-1, 2, 0, 0});
  EXPECT_EQ(r.row(0), (std::vector<std::size_t>{2, 4, 2, 0}));
}

TEST(Betti, Sl2DeformationMatchesChevalleyEilenbergOracle) {
  const lax::oracle::LieAlgebraCE ce(3, sl2_constants());
  const auto complex = deformation_complex(presets::sl2());
  const auto r = betti(complex, Window{-1, 2, 0, 0});
  for (int k = -1; k <= 2; ++k) {
    EXPECT_EQ(complex.dimension(k, 0), ce.cochain_dimension(k + 1));
    EXPECT_EQ(r.betti(k, 0), ce.betti(k + 1)) << k;
    EXPECT_EQ(r.betti(k, 0), 0U);
  }
}

TEST(Betti, MatchesChevalleyEilenbergOracleOnOtherAlgebras) {
  const std::vector<std::pair<AlgebroidPresentation, lax::oracle::Constants>> cases = {
      {presets::aff1(), {{{0, 1, 1}, 1}}},
      {presets::heisenberg(), {{{0, 1, 2}, 1}}},
      {presets::abelian(3), {}},
  };
  for (const auto& [p, constants] : cases) {
    const lax::oracle::LieAlgebraCE ce(static_cast<int>(p.rank()), constants);
    const auto r = betti(deformation_complex(p), Window{-1, static_cast<int>(p.rank()) - 1, 0, 0});
    for (int k = -1; k < static_cast<int>(p.rank()); ++k)
      EXPECT_EQ(r.betti(k, 0), ce.betti(k + 1)) << p.name() << " degree " << k;
  }
}

TEST(Betti, RankNullityOnStandardComplexes) {
  for (const auto& p : fixtures::standard_presentations()) {
    const auto dr = de_rham_complex(p);
    const auto def = deformation_complex(p);
    for (int w = 0; w <= 2; ++w) {
      for (int d = 0; d <= static_cast<int>(p.rank()); ++d)
        EXPECT_LE(rank(dr.differential(d, w)) + rank(dr.differential(d - 1, w)), dr.dimension(d, w));
      for (int d = -1; d <= 2; ++d) {
        EXPECT_LE(rank(def.differential(d, w)) + rank(def.differential(d - 1, w)), def.dimension(d, w));
        EXPECT_TRUE((def.differential(d, w) * def.differential(d - 1, w)).is_zero()) << p.name();
      }
    }
  }
}

TEST(Betti, InvariantUnderReversedGeneratorOrder) {
  const auto forward = presets::aff1();
  const auto reversed = presets::lie_algebra({"Aff1r", {"e2", "e1"}, {{{0, 1, 0}, Rational(-1)}}});
  const Window w{-1, 2, 0, 1};
  EXPECT_EQ(betti(deformation_complex(forward), w).table, betti(deformation_complex(reversed), w).table);
  const Window wd{0, 2, 0, 1};
  EXPECT_EQ(betti(de_rham_complex(forward), wd).table, betti(de_rham_complex(reversed), wd).table);

  AlgebroidPresentation tr2r("T2r", {{"x2", 1}, {"x1", 1}}, {{"X2", 1, OddOrigin::fiber_dual}, {"X1", 1, OddOrigin::fiber_dual}});
  tr2r.set_anchor(0, 0, tr2r.constant(1));
  tr2r.set_anchor(1, 1, tr2r.constant(1));
  const Window wt{-1, 2, -1, 2};
  EXPECT_EQ(betti(deformation_complex(presets::tangent(2)), wt).table, betti(deformation_complex(tr2r), wt).table);
}

TEST(Betti, ParallelEvaluationIsDeterministic) {
  const auto complex = deformation_complex(presets::tangent(2));
  const Window w{-1, 2, -1, 2};
  const auto serial = betti(complex, w);
  const auto parallel = betti(deformation_complex(presets::tangent(2)), w, 4);
  EXPECT_EQ(serial.table, parallel.table);
}

TEST(Betti, TangentPlaneDeRhamIsPoincare) {
  const auto r = betti(de_rham_complex(presets::tangent(2)), Window{0, 2, 0, 3});
  for (int w = 0; w <= 3; ++w)
    for (int d = 0; d <= 2; ++d)
      EXPECT_EQ(r.betti(d, w), (d == 0 && w == 0) ? 1U : 0U);
}

TEST(InducedMap, IdentityIsIso) {
  const auto p = presets::aff1();
  const auto dr = de_rham_complex(p);
  const auto id = form_map("id", dr, dr, [](const Element& e) { return e; });
  const auto report = induced_map(dr, dr, id, Window{0, 2, 0, 0});
  EXPECT_TRUE(report.all_iso());
  for (const auto& e : report.entries)
    for (std::size_t i = 0; i < e.source_betti; ++i)
      EXPECT_EQ(e.matrix.get(i, i), Rational(1));
}

TEST(InducedMap, ZeroMapIsNotIso) {
  const auto dr = de_rham_complex(presets::aff1());
  const auto zero = form_map("zero", dr, dr, [&](const Element&) { return Element(dr.generators()); });
  const auto e = induced_map(dr, dr, zero, 0, 0);
  EXPECT_EQ(e.source_betti, 1U);
  EXPECT_FALSE(e.iso);
  EXPECT_FALSE(e.injective);
}

TEST(InducedMap, RejectsNonChainMap) {
  const auto dr = de_rham_complex(presets::aff1());
  // Identity in degree 2 only: dξ² = −ξ¹ξ² is not killed.
  const auto bad = LinearBlockMap("bad", [&](int d, int w) {
    SparseRationalMatrix m(dr.dimension(d, w), dr.dimension(d, w));
    if (d == 2 && w == 0)
      m.set(0, 0, Rational(1));
    return m;
  });
  EXPECT_THROW(induced_map(dr, dr, bad, 2, 0), Error);
  EXPECT_FALSE(chain_map_law(dr, dr, bad, 1, 0));
  EXPECT_TRUE(chain_map_law(dr, dr, bad, 2, 0));
}
