#pragma once

#include "lax/cohomology.hpp"

#include <bit>
#include <climits>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lax {

/// Trivial coordinate submersion M × R^k → M.
struct SubmersionSpec {
  std::string name;
  std::vector<EvenGenerator> base;
  std::vector<EvenGenerator> fiber;
};

inline SubmersionSpec trivial_submersion(const AlgebroidPresentation& p, std::vector<EvenGenerator> fiber,
                                         std::string name = "S") {
  return {std::move(name), p.generators()->evens(), std::move(fiber)};
}

/// Frame section spanning the vertical direction of fiber coordinate `u`.
inline std::string vertical_section_name(const std::string& u) { return "v_" + u; }

struct PullbackPresentation {
  AlgebroidPresentation presentation;  ///< π!A over P: base x..., u...; frame v_u..., ē...
  AlgebroidPresentation base;          ///< A
  SubmersionSpec submersion;
  MorphismPtr projection;              ///< Π: π!A → A
  std::vector<std::size_t> vertical;   ///< frame indices of the v_u
  SparseRationalMatrix inclusion;      ///< VP → π!A in frame coordinates, (k + r) × k

  [[nodiscard]] std::size_t fiber_count() const { return submersion.fiber.size(); }
  [[nodiscard]] std::size_t base_count() const { return base.base_dimension(); }
  /// Odd bits of the η (duals of the v_u).
  [[nodiscard]] std::uint64_t vertical_mask() const { return (std::uint64_t{1} << fiber_count()) - 1; }
  /// Odd bits of the lifted duals ξ̄.
  [[nodiscard]] std::uint64_t lifted_mask() const {
    const std::size_t n = presentation.rank();
    const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    return all & ~vertical_mask();
  }
  [[nodiscard]] int vertical_count(const Monomial& m) const { return std::popcount(m.odd & vertical_mask()); }
  [[nodiscard]] int lifted_count(const Monomial& m) const { return std::popcount(m.odd & lifted_mask()); }
};

/// π!A for the trivial submersion: v_u anchored to ∂/∂u, ē_i anchored to the
/// lift of ρ(e_i), mixed brackets zero and structure functions pulled back.
inline PullbackPresentation pullback_algebroid(const AlgebroidPresentation& pres, const SubmersionSpec& sub) {
  if (sub.fiber.empty())
    throw Error("submersion '" + sub.name + "' has no fiber coordinates");
  if (sub.base != pres.generators()->evens())
    throw Error("submersion '" + sub.name + "' is not over the base of '" + pres.name() + "'");
  std::set<std::string> taken;
  for (const auto& g : pres.generators()->evens())
    taken.insert(g.name);
  for (const auto& g : pres.generators()->odds())
    taken.insert(g.name);
  for (const auto& u : sub.fiber)
    if (!taken.insert(u.name).second)
      throw Error("fiber coordinate '" + u.name + "' collides with an existing name");
  for (const auto& u : sub.fiber)
    if (!taken.insert(vertical_section_name(u.name)).second)
      throw Error("vertical section '" + vertical_section_name(u.name) + "' collides with an existing name");

  const std::size_t n = pres.base_dimension(), k = sub.fiber.size(), r = pres.rank();
  std::vector<EvenGenerator> base = pres.generators()->evens();
  base.insert(base.end(), sub.fiber.begin(), sub.fiber.end());
  std::vector<OddGenerator> frame;
  for (const auto& u : sub.fiber)
    frame.push_back({vertical_section_name(u.name), u.weight, OddOrigin::vertical_form});
  for (const auto& e : pres.generators()->odds())
    frame.push_back(e);

  PullbackPresentation out;
  out.base = pres;
  out.submersion = sub;
  out.presentation = AlgebroidPresentation(pres.name() + "_" + sub.name, base, frame);
  AlgebroidPresentation& p = out.presentation;
  const GeneratorSetPtr& gens = p.generators();
  for (std::size_t a = 0; a < k; ++a) {
    p.set_anchor(a, n + a, p.constant(1));
    out.vertical.push_back(a);
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t b = 0; b < n; ++b)
      p.set_anchor(k + i, b, transfer(pres.anchor(i, b), gens));
  for (const auto& [ij, row] : pres.bracket_table())
    for (std::size_t m = 0; m < r; ++m)
      if (!row[m].is_zero())
        p.set_bracket(k + ij.first, k + ij.second, k + m, transfer(row[m], gens));

  std::map<std::string, Element> images;
  for (const auto& g : pres.generators()->evens())
    images.emplace(g.name, Element::generator(gens, g.name));
  for (const auto& g : pres.generators()->odds())
    images.emplace(g.name, Element::generator(gens, g.name));
  out.projection = std::make_shared<const AlgebroidMorphism>(p, pres, images);

  out.inclusion = SparseRationalMatrix(k + r, k);
  for (std::size_t a = 0; a < k; ++a)
    out.inclusion.set(a, a, Rational(1));

  const ValidationReport v = validate(p);
  if (!v.passed)
    throw Error("pull-back of '" + pres.name() + "' fails validation on " + v.failures.front().first);
  return out;
}

struct SesReport {
  std::size_t vertical_rank = 0;
  std::size_t base_rank = 0;
  std::size_t total_rank = 0;
  bool projection_linear = true;
  bool injective = false;
  bool surjective = false;
  bool composition_zero = false;
  bool ranks_add_up = false;
  bool anchors_vertical = false;
  bool passed = false;
};

/// 0 → VP → π!A → A → 0 as exact matrix statements in the frame.
inline SesReport ses_check(const PullbackPresentation& pp) {
  SesReport rep;
  const AlgebroidPresentation& p = pp.presentation;
  const std::size_t k = pp.fiber_count(), r = pp.base.rank(), total = p.rank();
  SparseRationalMatrix proj(r, total);
  for (std::size_t i = 0; i < r; ++i) {
    const Element& img = pp.projection->image(GeneratorRef{true, i});
    for (const auto& [m, c] : img.terms()) {
      bool constant = std::popcount(m.odd) == 1;
      for (int e : m.exponents)
        constant = constant && e == 0;
      if (!constant) {
        rep.projection_linear = false;
        continue;
      }
      proj.set(i, static_cast<std::size_t>(std::countr_zero(m.odd)), c);
    }
  }
  rep.vertical_rank = rank(pp.inclusion);
  rep.base_rank = rank(proj);
  rep.total_rank = total;
  rep.injective = pp.inclusion.cols() == k && rep.vertical_rank == k;
  rep.surjective = rep.base_rank == r;
  rep.composition_zero = (proj * pp.inclusion).is_zero();
  rep.ranks_add_up = rep.vertical_rank + rep.base_rank == total;
  rep.anchors_vertical = true;
  const std::size_t n = pp.base_count();
  for (std::size_t a = 0; a < pp.inclusion.cols(); ++a)
    for (std::size_t b = 0; b < p.base_dimension(); ++b) {
      Element v = p.zero();
      for (std::size_t j = 0; j < total; ++j)
        v += p.anchor(j, b) * pp.inclusion.get(j, a);
      if (v != p.constant(b == n + a ? 1 : 0))
        rep.anchors_vertical = false;
    }
  rep.passed = rep.projection_linear && rep.injective && rep.surjective && rep.composition_zero && rep.ranks_add_up &&
               rep.anchors_vertical;
  return rep;
}

/// d^V on C(π!A): u ↦ η, everything else ↦ 0.
inline GradedDerivation vertical_de_rham(const PullbackPresentation& pp) {
  const GeneratorSetPtr& gens = pp.presentation.generators();
  GradedDerivation dv(gens, 1);
  for (std::size_t a = 0; a < pp.fiber_count(); ++a)
    dv.set_image(GeneratorRef{false, pp.base_count() + a}, Element::generator(gens, GeneratorRef{true, a}));
  return dv;
}

/// Least number of ξ̄ factors over the monomials of `a`; INT_MAX for zero.
inline int filtration_level(const PullbackPresentation& pp, const Element& a) {
  int level = INT_MAX;
  for (const auto& [m, c] : a.terms())
    level = std::min(level, pp.lifted_count(m));
  return level;
}

enum class ComplexKind { dr, def };

inline const char* kind_name(ComplexKind k) { return k == ComplexKind::dr ? "dr" : "def"; }

struct SpectralBlock {
  ComplexKind kind = ComplexKind::dr;
  int p = 0;
  int q = 0;
  int weight = 0;
  std::size_t e0_dimension = 0;
  SparseRationalMatrix d0_matrix;  ///< (p, q) → (p, q + 1)
  std::size_t e1_dimension = 0;
};

namespace detail {

using SpectralEntry = std::pair<std::size_t, Monomial>;

/// Basis of E₀^{p,q} in block weight w. For dr the first entry is unused; for
/// def it is the generator of C(A) a relative cochain is evaluated on.
inline std::vector<SpectralEntry> spectral_basis(const PullbackPresentation& pp, ComplexKind kind, int p, int q,
                                                 int w) {
  std::vector<SpectralEntry> out;
  if (q < 0)
    return out;
  const GeneratorSet& g = *pp.presentation.generators();
  if (kind == ComplexKind::dr) {
    for (const auto& m : basis_enumerate(g, p + q, w))
      if (pp.lifted_count(m) == p && pp.vertical_count(m) == q)
        out.emplace_back(0, m);
    return out;
  }
  const GeneratorSet& a = *pp.base.generators();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const GeneratorRef ref = a.from_global(i);
    const int deg = GeneratorSet::degree(ref);
    for (const auto& m : basis_enumerate(g, deg + p + q, a.weight(ref) + w))
      if (pp.lifted_count(m) - deg == p && pp.vertical_count(m) == q)
        out.emplace_back(i, m);
  }
  return out;
}

inline std::size_t image_slots(const PullbackPresentation& pp, ComplexKind kind) {
  return kind == ComplexKind::dr ? 1 : pp.base.generators()->size();
}

/// Full differential on a single basis entry, as image vectors.
inline ImageComplex::Images full_differential(const PullbackPresentation& pp, ComplexKind kind,
                                              const SpectralEntry& e, int total_degree) {
  const GeneratorSetPtr& gens = pp.presentation.generators();
  if (kind == ComplexKind::dr)
    return {build_differential(pp.presentation).differential.apply(e.second)};
  ImageComplex::Images images(image_slots(pp, kind), Element(gens));
  images[e.first] = Element::monomial(gens, e.second);
  return relative_delta(relative_from_images(pp.projection, images, total_degree)).images();
}

/// Coordinates in `basis`; terms of strictly higher filtration are dropped,
/// anything else is an error.
inline RationalVector project_onto(const PullbackPresentation& pp, ComplexKind kind,
                                   const std::vector<SpectralEntry>& basis, const ImageComplex::Images& images,
                                   int p) {
  const auto less = [](const SpectralEntry& a, const SpectralEntry& b) {
    return a.first != b.first ? a.first < b.first : MonomialLess{}(a.second, b.second);
  };
  std::map<SpectralEntry, std::size_t, decltype(less)> index(less);
  for (std::size_t i = 0; i < basis.size(); ++i)
    index.emplace(basis[i], i);
  RationalVector v(basis.size());
  const GeneratorSet& a = *pp.base.generators();
  for (std::size_t g = 0; g < images.size(); ++g)
    for (const auto& [m, c] : images[g].terms()) {
      auto it = index.find({g, m});
      if (it != index.end()) {
        v[it->second] = c;
        continue;
      }
      const int shift = kind == ComplexKind::dr ? 0 : GeneratorSet::degree(a.from_global(g));
      if (pp.lifted_count(m) - shift <= p)
        throw Error("differential does not preserve the filtration");
    }
  return v;
}

}  // namespace detail

/// E₀^{p,q} with d₀ and E₁^{p,q}. Throws if d₀ differs from d^V ⊗ id.
inline SpectralBlock e_page(const PullbackPresentation& pp, ComplexKind kind, int p, int q, int weight) {
  if (q < 0 || p < (kind == ComplexKind::dr ? 0 : -1))
    throw Error("spectral indices out of range: (" + std::to_string(p) + ", " + std::to_string(q) + ")");
  const GeneratorSetPtr& gens = pp.presentation.generators();
  const GradedDerivation dv = vertical_de_rham(pp);
  auto d0 = [&](int qq) {
    const auto source = detail::spectral_basis(pp, kind, p, qq, weight);
    const auto target = detail::spectral_basis(pp, kind, p, qq + 1, weight);
    SparseRationalMatrix m(target.size(), source.size()), vertical(target.size(), source.size());
    for (std::size_t j = 0; j < source.size(); ++j) {
      const RationalVector col =
          detail::project_onto(pp, kind, target, detail::full_differential(pp, kind, source[j], p + qq), p);
      ImageComplex::Images v(detail::image_slots(pp, kind), Element(gens));
      v[source[j].first] = dv.apply(source[j].second);
      const RationalVector vcol = detail::project_onto(pp, kind, target, v, INT_MAX);
      for (std::size_t i = 0; i < target.size(); ++i) {
        if (!col[i].is_zero())
          m.set(i, j, col[i]);
        if (!vcol[i].is_zero())
          vertical.set(i, j, vcol[i]);
      }
    }
    if (!(m == vertical))
      throw Error("d0 differs from the vertical differential at (" + std::to_string(p) + ", " + std::to_string(qq) +
                  ")");
    return m;
  };
  SpectralBlock b;
  b.kind = kind;
  b.p = p;
  b.q = q;
  b.weight = weight;
  b.d0_matrix = d0(q);
  b.e0_dimension = b.d0_matrix.cols();
  const std::size_t incoming = q == 0 ? 0 : rank(d0(q - 1));
  b.e1_dimension = b.e0_dimension - rank(b.d0_matrix) - incoming;
  return b;
}

struct E1Report {
  ComplexKind kind = ComplexKind::dr;
  int weight = 0;
  std::vector<SpectralBlock> blocks;
  bool vertical_rows_vanish = true;  ///< E₁^{p,q} = 0 for 0 < q ≤ max_q
  bool base_row_identified = true;   ///< E₁^{p,0} = Π*C^p(A)
  bool d1_matches = true;            ///< d₁ = d_A (dr) or δ (def)
  [[nodiscard]] bool passed() const { return vertical_rows_vanish && base_row_identified && d1_matches; }
};

/// The E₁ statement: vanishing off the bottom row for 0 < q ≤ max_q, and
/// (E₁^{•,0}, d₁) = (C(A), d_A) (dr) or (C_def(A), δ) (def) as matrices.
inline E1Report e1_check(const PullbackPresentation& pp, ComplexKind kind, int weight, int max_q) {
  E1Report rep;
  rep.kind = kind;
  rep.weight = weight;
  const int p_lo = kind == ComplexKind::dr ? 0 : -1;
  const int p_hi = static_cast<int>(pp.base.rank());
  const AlgebroidMorphism& pi = *pp.projection;

  // Π* (dr) or Π⋆ (def) applied to the canonical basis of block (p, weight).
  const FormComplex forms = de_rham_complex(pp.base);
  const ImageComplex defs = deformation_complex(pp.base);
  auto lifted_basis = [&](int p) {
    std::vector<ImageComplex::Images> out;
    if (kind == ComplexKind::dr) {
      for (const auto& m : forms.basis(p, weight))
        out.push_back({pi.pullback(Element::monomial(pp.base.generators(), m))});
    } else {
      for (std::size_t j = 0; j < defs.dimension(p, weight); ++j) {
        const auto images = defs.unit_images(j, p, weight);
        ImageComplex::Images lifted;
        for (const auto& e : images)
          lifted.push_back(pi.pullback(e));
        out.push_back(lifted);
      }
    }
    return out;
  };

  for (int p = p_lo; p <= p_hi; ++p) {
    for (int q = 0; q <= max_q; ++q) {
      rep.blocks.push_back(e_page(pp, kind, p, q, weight));
      if (q > 0 && rep.blocks.back().e1_dimension != 0)
        rep.vertical_rows_vanish = false;
    }
    const SpectralBlock& bottom = rep.blocks[rep.blocks.size() - static_cast<std::size_t>(max_q) - 1];
    const auto row = detail::spectral_basis(pp, kind, p, 0, weight);
    const auto lifted = lifted_basis(p);
    if (bottom.e1_dimension != lifted.size()) {
      rep.base_row_identified = false;
      continue;
    }
    SparseRationalMatrix embed(row.size(), lifted.size());
    for (std::size_t j = 0; j < lifted.size(); ++j) {
      const RationalVector col = detail::project_onto(pp, kind, row, lifted[j], INT_MAX);
      for (std::size_t i = 0; i < col.size(); ++i)
        if (!col[i].is_zero())
          embed.set(i, j, col[i]);
    }
    if (rank(embed) != lifted.size() || !(bottom.d0_matrix * embed).is_zero()) {
      rep.base_row_identified = false;
      continue;
    }
    // d₁ on the identified bottom row, solved back in the lifted basis of p + 1.
    const auto next_row = detail::spectral_basis(pp, kind, p + 1, 0, weight);
    const auto next_lifted = lifted_basis(p + 1);
    SparseRationalMatrix next_embed(next_row.size(), next_lifted.size());
    for (std::size_t j = 0; j < next_lifted.size(); ++j) {
      const RationalVector col = detail::project_onto(pp, kind, next_row, next_lifted[j], INT_MAX);
      for (std::size_t i = 0; i < col.size(); ++i)
        if (!col[i].is_zero())
          next_embed.set(i, j, col[i]);
    }
    SparseRationalMatrix d1(next_lifted.size(), lifted.size());
    for (std::size_t j = 0; j < lifted.size(); ++j) {
      ImageComplex::Images full;
      if (kind == ComplexKind::dr)
        full = {build_differential(pp.presentation).differential.apply(lifted[j][0])};
      else
        full = relative_delta(relative_from_images(pp.projection, lifted[j], p)).images();
      const RationalVector col = detail::project_onto(pp, kind, next_row, full, p);
      const auto x = solve(next_embed, col);
      if (!x) {
        rep.d1_matches = false;
        break;
      }
      for (std::size_t i = 0; i < x->size(); ++i)
        if (!(*x)[i].is_zero())
          d1.set(i, j, (*x)[i]);
    }
    const SparseRationalMatrix& expected =
        kind == ComplexKind::dr ? forms.differential(p, weight) : defs.differential(p, weight);
    if (!(d1 == expected))
      rep.d1_matches = false;
  }
  return rep;
}

/// Ω(P) for P with coordinates y (base first, then fiber): one odd "dy" per
/// coordinate, d: y ↦ dy.
class FormAlgebra {
public:
  FormAlgebra(std::vector<EvenGenerator> base, std::vector<EvenGenerator> fiber)
      : base_count_(base.size()), fiber_count_(fiber.size()) {
    std::vector<EvenGenerator> coords = std::move(base);
    coords.insert(coords.end(), fiber.begin(), fiber.end());
    std::vector<OddGenerator> odds;
    for (std::size_t j = 0; j < coords.size(); ++j)
      odds.push_back({"d" + coords[j].name, coords[j].weight,
                      j < base_count_ ? OddOrigin::fiber_dual : OddOrigin::vertical_form});
    gens_ = make_generators(std::move(coords), std::move(odds));
    d_ = GradedDerivation(gens_, 1);
    for (std::size_t j = 0; j < size(); ++j)
      d_.set_image(coordinate_ref(j), Element::generator(gens_, differential_ref(j)));
  }

  [[nodiscard]] const GeneratorSetPtr& generators() const { return gens_; }
  [[nodiscard]] const GradedDerivation& d() const { return d_; }
  [[nodiscard]] std::size_t size() const { return base_count_ + fiber_count_; }
  [[nodiscard]] std::size_t base_count() const { return base_count_; }
  [[nodiscard]] bool is_vertical(std::size_t j) const { return j >= base_count_; }
  [[nodiscard]] static GeneratorRef coordinate_ref(std::size_t j) { return GeneratorRef{false, j}; }
  [[nodiscard]] static GeneratorRef differential_ref(std::size_t j) { return GeneratorRef{true, j}; }
  [[nodiscard]] Element zero() const { return Element(gens_); }

  /// Global generator indices of the fiber coordinates and their differentials.
  [[nodiscard]] std::vector<std::size_t> vertical_generators() const {
    std::vector<std::size_t> out;
    for (std::size_t j = base_count_; j < size(); ++j)
      out.push_back(j);
    for (std::size_t j = base_count_; j < size(); ++j)
      out.push_back(size() + j);
    return out;
  }

private:
  std::size_t base_count_;
  std::size_t fiber_count_;
  GeneratorSetPtr gens_;
  GradedDerivation d_;
};

/// Vector-valued form: components[j] is the coefficient of ∂/∂y_j.
struct FormValuedVectorField {
  int form_degree = 0;
  std::vector<Element> components;

  [[nodiscard]] bool is_vertical(const FormAlgebra& fa) const {
    for (std::size_t j = 0; j < fa.base_count(); ++j)
      if (!components[j].is_zero())
        return false;
    return true;
  }
  [[nodiscard]] bool is_zero() const {
    for (const auto& c : components)
      if (!c.is_zero())
        return false;
    return true;
  }
  friend bool operator==(const FormValuedVectorField&, const FormValuedVectorField&) = default;
};

/// i_J: dy_j ↦ J^j, y ↦ 0; degree form_degree − 1, so J needs form degree ≥ 0.
inline GradedDerivation contraction(const FormAlgebra& fa, const FormValuedVectorField& j) {
  if (j.form_degree < 0)
    throw Error("contraction needs a form degree >= 0");
  GradedDerivation out(fa.generators(), j.form_degree - 1);
  for (std::size_t c = 0; c < fa.size(); ++c)
    if (!j.components[c].is_zero())
      out.set_image(FormAlgebra::differential_ref(c), j.components[c]);
  return out;
}

/// L_J = [i_J, d]; zero for form degree −1.
inline GradedDerivation lie_derivative(const FormAlgebra& fa, const FormValuedVectorField& j) {
  if (j.form_degree < 0)
    return GradedDerivation(fa.generators(), j.form_degree);
  return derivation_commutator(contraction(fa, j), fa.d());
}

struct FnDecomposition {
  FormValuedVectorField j;  ///< form degree |V|
  FormValuedVectorField k;  ///< form degree |V| + 1
};

/// V = L_J + i_K with J = V on coordinates and K = (V − L_J) on their
/// differentials. Throws if the reconstruction is not exact.
inline FnDecomposition fn_decompose(const FormAlgebra& fa, const GradedDerivation& v) {
  if (!same_generators(v.generators(), fa.generators()))
    throw Error("fn_decompose: derivation is not on this form algebra");
  FnDecomposition out;
  out.j.form_degree = v.degree();
  out.k.form_degree = v.degree() + 1;
  for (std::size_t c = 0; c < fa.size(); ++c)
    out.j.components.push_back(v.image(FormAlgebra::coordinate_ref(c)));
  GradedDerivation rest = v;
  rest -= lie_derivative(fa, out.j);
  for (std::size_t c = 0; c < fa.size(); ++c)
    out.k.components.push_back(rest.image(FormAlgebra::differential_ref(c)));
  GradedDerivation rebuilt = lie_derivative(fa, out.j);
  rebuilt += contraction(fa, out.k);
  if (!(rebuilt == v))
    throw Error("fn_decompose: reconstruction differs from the input");
  return out;
}

/// Same, for a linear operator given pointwise. Throws "not a derivation"
/// when the Leibniz rule fails on a product of two generators.
inline FnDecomposition fn_decompose(const FormAlgebra& fa, const std::function<Element(const Element&)>& op,
                                    int degree) {
  const GeneratorSetPtr& gens = fa.generators();
  GradedDerivation v(gens, degree);
  for (std::size_t i = 0; i < gens->size(); ++i) {
    const GeneratorRef g = gens->from_global(i);
    v.set_image(g, op(Element::generator(gens, g)));
  }
  if (!op(Element::constant(gens, Rational(1))).is_zero())
    throw Error("not a derivation: nonzero on constants");
  for (std::size_t i = 0; i < gens->size(); ++i)
    for (std::size_t j = i; j < gens->size(); ++j) {
      const Element a = Element::generator(gens, gens->from_global(i));
      const Element b = Element::generator(gens, gens->from_global(j));
      const Element ab = multiply(a, b);
      Element expected = multiply(op(a), b);
      Element second = multiply(a, op(b));
      if ((degree * GeneratorSet::degree(gens->from_global(i))) % 2 != 0)
        second *= Rational(-1);
      expected += second;
      if (op(ab) != expected || v.apply(ab) != op(ab))
        throw Error("not a derivation: Leibniz residual on " + ab.str() + " is " + (op(ab) - expected).str());
    }
  return fn_decompose(fa, v);
}

/// h(V) = (−1)^{|V|} i_J. With `vertical_check`, J and K must vanish on the
/// base coordinates. h vanishes on degree −1 (it would have degree −2), so
/// such V are rejected here; homotopy_law treats them.
inline GradedDerivation homotopy_h(const FormAlgebra& fa, const GradedDerivation& v, bool vertical_check) {
  const FnDecomposition dec = fn_decompose(fa, v);
  if (vertical_check && (!dec.j.is_vertical(fa) || !dec.k.is_vertical(fa)))
    throw Error("homotopy_h: derivation is not vertical");
  if (v.degree() < 0)
    throw Error("homotopy_h: h of a degree -1 derivation is zero of degree -2");
  GradedDerivation h = contraction(fa, dec.j);
  if (v.degree() % 2 != 0)
    h *= Rational(-1);
  return h;
}

/// V = [d, h(V)] + h([d, V]), exactly.
inline bool homotopy_law(const FormAlgebra& fa, const GradedDerivation& v, bool vertical_check = true) {
  const GradedDerivation dv = derivation_commutator(fa.d(), v);
  GradedDerivation rhs = homotopy_h(fa, dv, vertical_check);
  if (v.degree() >= 0)
    rhs += derivation_commutator(fa.d(), homotopy_h(fa, v, vertical_check));
  return rhs == v;
}

/// Vertical derivations of Ω(P) with δ = [d, −].
inline ImageComplex vertical_derivations(const FormAlgebra& fa, std::string id = "V") {
  const GeneratorSetPtr gens = fa.generators();
  const GradedDerivation d = fa.d();
  return ImageComplex(
      gens, gens, fa.vertical_generators(),
      [gens, d](const ImageComplex::Images& images, int degree) {
        return derivation_commutator(d, derivation_from_images(gens, images, degree)).images();
      },
      std::move(id));
}

/// K = ker Π★: derivations of C(π!A) vanishing on x and ξ̄.
inline ImageComplex kernel_complex(const PullbackPresentation& pp) {
  const GeneratorSetPtr gens = pp.presentation.generators();
  std::vector<std::size_t> allowed;
  for (std::size_t a = 0; a < pp.fiber_count(); ++a)
    allowed.push_back(pp.base_count() + a);
  for (std::size_t a = 0; a < pp.fiber_count(); ++a)
    allowed.push_back(gens->even_count() + a);
  const GradedDerivation d = build_differential(pp.presentation).differential;
  return ImageComplex(
      gens, gens, std::move(allowed),
      [gens, d](const ImageComplex::Images& images, int degree) {
        return derivation_commutator(d, derivation_from_images(gens, images, degree)).images();
      },
      "K(" + pp.presentation.name() + ")");
}

/// Contracting homotopy of K in closed form: η_a ↦ (−1)^{|X|} X(u_a).
inline ImageComplex::Images kernel_homotopy(const PullbackPresentation& pp, const ImageComplex::Images& x,
                                            int degree) {
  const GeneratorSet& g = *pp.presentation.generators();
  ImageComplex::Images out(x.size(), pp.presentation.zero());
  for (std::size_t a = 0; a < pp.fiber_count(); ++a) {
    Element v = x[pp.base_count() + a];
    if (degree % 2 != 0)
      v *= Rational(-1);
    out[g.even_count() + a] = v;
  }
  return out;
}

/// The fiber form algebra Ω(R^k) and its embedding u ↦ u, du ↦ η.
inline FormAlgebra fiber_forms(const PullbackPresentation& pp) { return FormAlgebra({}, pp.submersion.fiber); }

inline Element embed_fiber_form(const PullbackPresentation& pp, const Element& alpha) {
  const GeneratorSetPtr& gens = pp.presentation.generators();
  Element out(gens);
  for (const auto& [m, c] : alpha.terms()) {
    Monomial t = gens->unit();
    for (std::size_t a = 0; a < pp.fiber_count(); ++a)
      t.exponents[pp.base_count() + a] = m.exponents[a];
    t.odd = m.odd;  // η occupy the lowest odd slots in the same order
    out.add_term(t, c);
  }
  return out;
}

/// Same homotopy through K ≅ C(A) ⊗ V: split X = Σ ω ⊗ V_ω and apply
/// ω ⊗ V ↦ (−1)^{|ω|} ω ⊗ h_V(V).
inline ImageComplex::Images kernel_homotopy_tensor(const PullbackPresentation& pp, const ImageComplex::Images& x,
                                                   int degree) {
  const GeneratorSetPtr& gens = pp.presentation.generators();
  const FormAlgebra fa = fiber_forms(pp);
  const GeneratorSetPtr& fg = fa.generators();
  const std::size_t k = pp.fiber_count(), n = pp.base_count();
  struct Split {
    std::vector<Element> on_coordinates, on_differentials;
  };
  std::map<Monomial, Split, MonomialLess> parts;
  auto split = [&](const Element& e, std::size_t a, bool differential) {
    for (const auto& [m, c] : e.terms()) {
      Monomial omega = gens->unit(), alpha = fg->unit();
      for (std::size_t b = 0; b < n; ++b)
        omega.exponents[b] = m.exponents[b];
      omega.odd = m.odd & pp.lifted_mask();
      for (std::size_t b = 0; b < k; ++b)
        alpha.exponents[b] = m.exponents[n + b];
      alpha.odd = m.odd & pp.vertical_mask();
      Rational coef = c;
      if ((pp.vertical_count(m) * pp.lifted_count(m)) % 2 != 0)
        coef = -coef;
      auto [it, inserted] = parts.try_emplace(omega);
      if (inserted) {
        it->second.on_coordinates.assign(k, fa.zero());
        it->second.on_differentials.assign(k, fa.zero());
      }
      (differential ? it->second.on_differentials : it->second.on_coordinates)[a].add_term(alpha, coef);
    }
  };
  for (std::size_t a = 0; a < k; ++a) {
    split(x[n + a], a, false);
    split(x[gens->even_count() + a], a, true);
  }
  ImageComplex::Images out(x.size(), pp.presentation.zero());
  for (const auto& [omega, s] : parts) {
    const int omega_degree = omega.degree();
    if (degree - omega_degree < 0)
      continue;  // V_ω has degree −1 and h_V(V_ω) = 0
    GradedDerivation v(fg, degree - omega_degree);
    for (std::size_t a = 0; a < k; ++a) {
      if (!s.on_coordinates[a].is_zero())
        v.set_image(FormAlgebra::coordinate_ref(a), s.on_coordinates[a]);
      if (!s.on_differentials[a].is_zero())
        v.set_image(FormAlgebra::differential_ref(a), s.on_differentials[a]);
    }
    const GradedDerivation hv = homotopy_h(fa, v, true);
    const Element w = Element::monomial(gens, omega, Rational(omega_degree % 2 == 0 ? 1 : -1));
    for (std::size_t a = 0; a < k; ++a) {
      const Element& img = hv.image(FormAlgebra::differential_ref(a));
      if (!img.is_zero())
        out[gens->even_count() + a] += multiply(w, embed_fiber_form(pp, img));
    }
  }
  return out;
}

struct KernelReport {
  int degree = 0;
  int weight = 0;
  std::size_t dimension = 0;
  std::size_t betti = 0;
  bool homotopy_law = true;    ///< X = δhX + hδX on every basis vector
  bool tensor_agrees = true;   ///< closed form equals the tensor-split homotopy
  [[nodiscard]] bool passed() const { return betti == 0 && homotopy_law && tensor_agrees; }
};

inline KernelReport kernel_acyclicity_check(const PullbackPresentation& pp, const ImageComplex& kernel, int degree,
                                            int weight) {
  KernelReport rep;
  rep.degree = degree;
  rep.weight = weight;
  rep.dimension = kernel.dimension(degree, weight);
  rep.betti = block_betti(kernel, degree, weight);
  for (std::size_t j = 0; j < rep.dimension; ++j) {
    const auto x = kernel.unit_images(j, degree, weight);
    const auto hx = kernel_homotopy(pp, x, degree);
    if (hx != kernel_homotopy_tensor(pp, x, degree))
      rep.tensor_agrees = false;
    auto lhs = degree - 1 >= -1 ? kernel.apply_delta(hx, degree - 1) : hx;
    const auto h_dx = kernel_homotopy(pp, kernel.apply_delta(x, degree), degree + 1);
    for (std::size_t i = 0; i < lhs.size(); ++i)
      lhs[i] += h_dx[i];
    if (lhs != x)
      rep.homotopy_law = false;
  }
  return rep;
}

inline KernelReport kernel_acyclicity_check(const PullbackPresentation& pp, int degree, int weight) {
  return kernel_acyclicity_check(pp, kernel_complex(pp), degree, weight);
}

struct TensorModelReport {
  ComplexKind kind = ComplexKind::dr;
  int degree = 0;
  int weight = 0;
  std::size_t dimension = 0;        ///< of C(π!A) or C(Π)
  std::size_t model_dimension = 0;  ///< of Ω(R^k) ⊗ C(A) or Ω(R^k) ⊗ C_def(A)
  bool multiplication_bijective = false;
  bool dg_compatible = true;
  [[nodiscard]] bool passed() const {
    return dimension == model_dimension && multiplication_bijective && dg_compatible;
  }
};

/// C(π!A) = Ω(P) ⊗_{Ω(M)} C(A) and C(Π) = Ω(P) ⊗_{Ω(M)} C_def(A) on one
/// block: graded dimensions, bijectivity of α ⊗ ω ↦ α·Π*ω, and the Leibniz
/// rule d(α·ω) = dα·ω + (−1)^{|α|} α·dω.
inline TensorModelReport tensor_model_check(const PullbackPresentation& pp, ComplexKind kind, int degree,
                                            int weight) {
  TensorModelReport rep;
  rep.kind = kind;
  rep.degree = degree;
  rep.weight = weight;
  const FormAlgebra fa = fiber_forms(pp);
  const AlgebroidMorphism& pi = *pp.projection;
  const GradedDerivation d = build_differential(pp.presentation).differential;
  int max_generator_weight = 0;
  for (std::size_t i = 0; i < pp.base.generators()->size(); ++i)
    max_generator_weight = std::max(max_generator_weight, pp.base.generators()->weight(pp.base.generators()->from_global(i)));

  const FormComplex forms = de_rham_complex(pp.base);
  const ImageComplex defs = deformation_complex(pp.base);
  const ImageComplex rel = relative_complex(pp.projection, "C(Pi)");
  const FormComplex total(d, "dR(" + pp.presentation.name() + ")");

  std::vector<ImageComplex::Images> products;  // images of α ⊗ ω
  const int lowest = kind == ComplexKind::dr ? 0 : -1;
  const int weight_reach = kind == ComplexKind::dr ? weight : weight + max_generator_weight;
  for (int fd = 0; fd <= degree - lowest; ++fd)
    for (int fw = 0; fw <= weight_reach; ++fw) {
      const auto alphas = basis_enumerate(*fa.generators(), fd, fw);
      if (alphas.empty())
        continue;
      const int ad = degree - fd, aw = weight - fw;
      for (const auto& alpha_m : alphas) {
        const Element alpha = embed_fiber_form(pp, Element::monomial(fa.generators(), alpha_m));
        const Element d_alpha = embed_fiber_form(pp, fa.d().apply(alpha_m));
        const Rational sign(fd % 2 == 0 ? 1 : -1);
        if (kind == ComplexKind::dr) {
          for (const auto& om : forms.basis(ad, aw)) {
            const Element omega = pi.pullback(Element::monomial(pp.base.generators(), om));
            const Element prod = multiply(alpha, omega);
            products.push_back({prod});
            const Element rhs =
                multiply(d_alpha, omega) + multiply(alpha, pi.pullback(forms.d().apply(om))) * sign;
            if (d.apply(prod) != rhs)
              rep.dg_compatible = false;
          }
        } else {
          for (std::size_t j = 0; j < defs.dimension(ad, aw); ++j) {
            const auto y = derivation_from_images(pp.base.generators(), defs.unit_images(j, ad, aw), ad);
            RelativeCochain z = upper_star(pp.projection, y);
            RelativeCochain az(pp.projection, degree), daz(pp.projection, degree + 1);
            const RelativeCochain dz = relative_delta(z);
            const GeneratorSet& ag = *pp.base.generators();
            for (std::size_t g = 0; g < ag.size(); ++g) {
              const GeneratorRef ref = ag.from_global(g);
              az.set_image(ref, multiply(alpha, z.images()[g]));
              daz.set_image(ref, multiply(d_alpha, z.images()[g]) + multiply(alpha, dz.images()[g]) * sign);
            }
            products.push_back(az.images());
            if (relative_delta(az) != daz)
              rep.dg_compatible = false;
          }
        }
      }
    }
  rep.model_dimension = products.size();
  rep.dimension = kind == ComplexKind::dr ? total.dimension(degree, weight) : rel.dimension(degree, weight);
  SparseRationalMatrix m(rep.dimension, products.size());
  for (std::size_t j = 0; j < products.size(); ++j) {
    const RationalVector col = kind == ComplexKind::dr ? total.coordinates(products[j][0], degree, weight)
                                                       : rel.coordinates(products[j], degree, weight);
    for (std::size_t i = 0; i < col.size(); ++i)
      if (!col[i].is_zero())
        m.set(i, j, col[i]);
  }
  rep.multiplication_bijective = rep.dimension == products.size() && rank(m) == products.size();
  return rep;
}

}  // namespace lax
