#pragma once

#include "lax/morita.hpp"

#include <string>
#include <vector>

namespace lax {

/// Constant-coefficient foliation on affine space.
using FoliationSpec = presets::FoliationParams;

inline AlgebroidPresentation foliation_algebroid(const FoliationSpec& f) { return presets::foliation(f); }

/// Ω(F, TM/TF) in the frame of complementary coordinate fields ∂̄_b. Block
/// (p, w) is spanned by (b, m) with m a leafwise p-form of weight w + w(x_b),
/// so f ∂̄_b has weight w(f) − w(x_b). Constant fields make the Bott connection
/// trivial in this frame and the differential is d_F ⊗ id.
class BottComplex {
public:
  explicit BottComplex(const FoliationSpec& f)
      : leafwise_(foliation_algebroid(f)), forms_(de_rham_complex(leafwise_)), id_("Bott(" + f.name + ")") {
    const std::size_t n = f.ambient.size();
    std::vector<RationalVector> columns;
    for (const auto& field : f.fields)
      columns.push_back(RationalVector(field.begin(), field.end()));
    std::size_t current = rank(from_columns(n, columns));
    for (std::size_t b = 0; b < n; ++b) {
      RationalVector e(n);
      e[b] = Rational(1);
      columns.push_back(e);
      const std::size_t next = rank(from_columns(n, columns));
      if (next > current) {
        normal_.push_back(b);
        current = next;
      } else {
        columns.pop_back();
      }
    }
  }

  [[nodiscard]] const std::string& id() const { return id_; }
  [[nodiscard]] const AlgebroidPresentation& leafwise() const { return leafwise_; }
  /// Ambient coordinate indices whose fields span the normal frame.
  [[nodiscard]] const std::vector<std::size_t>& normal_frame() const { return normal_; }

  [[nodiscard]] std::vector<std::pair<std::size_t, Monomial>> basis(int p, int w) const {
    std::vector<std::pair<std::size_t, Monomial>> out;
    for (std::size_t i = 0; i < normal_.size(); ++i)
      for (const auto& m : forms_.basis(p, w + leafwise_.base_weight(normal_[i])))
        out.emplace_back(i, m);
    return out;
  }
  [[nodiscard]] std::size_t dimension(int p, int w) const {
    std::size_t n = 0;
    for (auto b : normal_)
      n += forms_.dimension(p, w + leafwise_.base_weight(b));
    return n;
  }

  /// Block-diagonal: one copy of d_F per normal direction.
  [[nodiscard]] SparseRationalMatrix differential(int p, int w) const {
    SparseRationalMatrix m(dimension(p + 1, w), dimension(p, w));
    std::size_t row = 0, col = 0;
    for (auto b : normal_) {
      const int shifted = w + leafwise_.base_weight(b);
      const SparseRationalMatrix& block = forms_.differential(p, shifted);
      for (const auto& [k, x] : block.entries())
        m.set(row + k.first, col + k.second, x);
      row += forms_.dimension(p + 1, shifted);
      col += forms_.dimension(p, shifted);
    }
    return m;
  }

  /// d(f θ ⊗ ∂̄_b) = d_F(f θ) ⊗ ∂̄_b.
  [[nodiscard]] std::vector<Element> apply(const std::vector<Element>& normal_components) const {
    std::vector<Element> out;
    for (const auto& c : normal_components)
      out.push_back(forms_.d().apply(c));
    return out;
  }

private:
  AlgebroidPresentation leafwise_;
  FormComplex forms_;
  std::string id_;
  std::vector<std::size_t> normal_;
};

inline BottComplex bott_complex(const FoliationSpec& f) { return BottComplex(f); }

struct BottComparison {
  Window window;
  CohomologyReport bott;
  CohomologyReport deformation;
  std::vector<std::pair<int, int>> mismatches;  ///< blocks where the tables differ
  [[nodiscard]] bool equal() const { return mismatches.empty(); }
};

/// Betti tables of Ω(F, TM/TF) and C_def(TF) on degrees ≥ 0 of the window.
inline BottComparison def_vs_bott(const FoliationSpec& f, Window window, unsigned threads = 1) {
  window.degree_lo = std::max(window.degree_lo, 0);
  BottComparison rep;
  rep.window = window;
  rep.bott = betti(bott_complex(f), window, threads);
  rep.deformation = betti(deformation_complex(foliation_algebroid(f)), window, threads);
  for (const auto& [d, w] : window.blocks())
    if (rep.bott.betti(d, w) != rep.deformation.betti(d, w))
      rep.mismatches.emplace_back(d, w);
  return rep;
}

struct FlagReport {
  bool vertical_contained = false;
  FoliationSpec quotient;        ///< F on M
  FoliationSpec canonical;       ///< H in the frame (verticals, lifts of F)
  bool tables_isomorphic = false;
  MoritaReport morita;
  bool passed = false;
};

namespace detail {

/// Same coordinates, frame names and weights, anchors and brackets; the
/// recorded origin of each odd generator is ignored.
inline bool same_tables(const AlgebroidPresentation& a, const AlgebroidPresentation& b) {
  const GeneratorSet& ga = *a.generators();
  const GeneratorSet& gb = *b.generators();
  if (ga.evens() != gb.evens() || ga.odd_count() != gb.odd_count())
    return false;
  for (std::size_t i = 0; i < ga.odd_count(); ++i)
    if (ga.odds()[i].name != gb.odds()[i].name || ga.odds()[i].weight != gb.odds()[i].weight)
      return false;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    for (std::size_t x = 0; x < a.base_dimension(); ++x)
      if (transfer(a.anchor(i, x), b.generators()) != b.anchor(i, x))
        return false;
    for (std::size_t j = i + 1; j < a.rank(); ++j)
      for (std::size_t k = 0; k < a.rank(); ++k)
        if (transfer(a.bracket(i, j, k), b.generators()) != b.bracket(i, j, k))
          return false;
  }
  return true;
}

}  // namespace detail

/// Flag V ⊂ H on P = M × R^k with V the fibers of the projection. Checks
/// that H is the pull-back of its quotient F = H/V on M as a presentation,
/// then runs the deformation Morita check for F along the projection.
inline FlagReport flag_check(const SubmersionSpec& v, const std::vector<std::string>& h_names,
                             const std::vector<std::vector<Rational>>& h_fields, int max_degree, int weight_lo,
                             int weight_hi, unsigned threads = 1) {
  FlagReport rep;
  const std::size_t n = v.base.size(), k = v.fiber.size(), dim = n + k;
  if (h_names.size() != h_fields.size())
    throw Error("flag_check: field names and fields differ in count");
  std::vector<RationalVector> h_columns;
  for (const auto& f : h_fields) {
    if (f.size() != dim)
      throw Error("flag_check: spanning field has the wrong number of components");
    h_columns.push_back(RationalVector(f.begin(), f.end()));
  }
  const std::size_t h_rank = rank(from_columns(dim, h_columns));
  std::vector<RationalVector> with_vertical = h_columns;
  for (std::size_t a = 0; a < k; ++a) {
    RationalVector e(dim);
    e[n + a] = Rational(1);
    with_vertical.push_back(e);
  }
  rep.vertical_contained = rank(from_columns(dim, with_vertical)) == h_rank;
  if (!rep.vertical_contained)
    throw Error("flag_check: the vertical foliation is not contained in H");

  // F: an independent subset of the projections of H to M.
  std::vector<EvenGenerator> p_coords = v.base;
  p_coords.insert(p_coords.end(), v.fiber.begin(), v.fiber.end());
  rep.quotient = FoliationSpec{"F", v.base, {}, {}};
  std::vector<RationalVector> chosen;
  for (std::size_t i = 0; i < h_fields.size(); ++i) {
    RationalVector projected(h_fields[i].begin(), h_fields[i].begin() + static_cast<std::ptrdiff_t>(n));
    chosen.push_back(projected);
    if (rank(from_columns(n, chosen)) < chosen.size()) {
      chosen.pop_back();
      continue;
    }
    rep.quotient.field_names.push_back(h_names[i]);
    rep.quotient.fields.emplace_back(projected.begin(), projected.end());
  }

  rep.canonical = FoliationSpec{"H", p_coords, {}, {}};
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<Rational> e(dim, Rational(0));
    e[n + a] = Rational(1);
    rep.canonical.field_names.push_back(vertical_section_name(v.fiber[a].name));
    rep.canonical.fields.push_back(e);
  }
  for (std::size_t i = 0; i < rep.quotient.fields.size(); ++i) {
    std::vector<Rational> lifted = rep.quotient.fields[i];
    lifted.resize(dim, Rational(0));
    rep.canonical.field_names.push_back(rep.quotient.field_names[i]);
    rep.canonical.fields.push_back(lifted);
  }
  std::vector<RationalVector> canonical_columns;
  for (const auto& f : rep.canonical.fields)
    canonical_columns.push_back(RationalVector(f.begin(), f.end()));
  std::vector<RationalVector> both = canonical_columns;
  both.insert(both.end(), h_columns.begin(), h_columns.end());
  const bool same_span = rank(from_columns(dim, both)) == h_rank && canonical_columns.size() == h_rank;

  const AlgebroidPresentation f_alg = foliation_algebroid(rep.quotient);
  const PullbackPresentation pp = pullback_algebroid(f_alg, v);
  rep.tables_isomorphic = same_span && detail::same_tables(foliation_algebroid(rep.canonical), pp.presentation);
  rep.morita = morita_check(pp, ComplexKind::def, max_degree, weight_lo, weight_hi, threads);
  rep.passed = rep.tables_isomorphic && rep.morita.passed;
  return rep;
}

}  // namespace lax
