#pragma once

#include "lax/derivation.hpp"
#include "lax/linalg.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace lax {

/// Identifies one entry of a presentation table: the anchor component
/// ρ^a_i (kind anchor, frame i, coordinate a) or the structure function
/// c^k_ij (kind bracket, i < j, output k).
struct TableEntry {
  enum class Kind { anchor, bracket } kind = Kind::anchor;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

/// Raised when a table entry is not weight-homogeneous of the expected weight.
class WeightError : public Error {
public:
  WeightError(const std::string& what, TableEntry entry) : Error(what), entry_(entry) {}
  [[nodiscard]] const TableEntry& entry() const { return entry_; }

private:
  TableEntry entry_;
};

/// A Lie algebroid on a trivial bundle over weighted affine space, given by a
/// frame e_1..e_r, the anchor matrix ρ^a_i and structure functions c^k_ij.
/// Frame section names double as the names of their odd duals ξ^i in C(A).
class AlgebroidPresentation {
public:
  AlgebroidPresentation() = default;
  AlgebroidPresentation(std::string name, std::vector<EvenGenerator> base, std::vector<OddGenerator> frame)
      : name_(std::move(name)), base_count_(base.size()), rank_(frame.size()) {
    gens_ = make_generators(std::move(base), std::move(frame));
    anchor_.assign(rank_, std::vector<Element>(base_count_, Element(gens_)));
  }

  [[nodiscard]] const std::string& name() const { return name_; }
  void rename(std::string n) { name_ = std::move(n); }
  [[nodiscard]] const GeneratorSetPtr& generators() const { return gens_; }
  [[nodiscard]] std::size_t base_dimension() const { return base_count_; }
  [[nodiscard]] std::size_t rank() const { return rank_; }
  [[nodiscard]] const std::string& base_name(std::size_t a) const { return gens_->evens()[a].name; }
  [[nodiscard]] const std::string& frame_name(std::size_t i) const { return gens_->odds()[i].name; }
  [[nodiscard]] int base_weight(std::size_t a) const { return gens_->evens()[a].weight; }
  [[nodiscard]] int frame_weight(std::size_t i) const { return gens_->odds()[i].weight; }

  [[nodiscard]] std::size_t frame_index(const std::string& n) const {
    auto r = gens_->find(n);
    if (!r || !r->odd)
      throw Error("unknown frame section '" + n + "' in " + name_);
    return r->index;
  }
  [[nodiscard]] std::size_t base_index(const std::string& n) const {
    auto r = gens_->find(n);
    if (!r || r->odd)
      throw Error("unknown base coordinate '" + n + "' in " + name_);
    return r->index;
  }

  [[nodiscard]] Element zero() const { return Element(gens_); }
  [[nodiscard]] Element constant(const Rational& c) const { return Element::constant(gens_, c); }
  [[nodiscard]] Element coordinate(std::size_t a) const { return Element::generator(gens_, GeneratorRef{false, a}); }
  [[nodiscard]] Element dual(std::size_t i) const { return Element::generator(gens_, GeneratorRef{true, i}); }

  /// ρ^a_i: the ∂/∂x^a component of ρ(e_i).
  [[nodiscard]] const Element& anchor(std::size_t i, std::size_t a) const { return anchor_.at(i).at(a); }
  void set_anchor(std::size_t i, std::size_t a, Element value) {
    require_function(value, "anchor entry");
    anchor_.at(i).at(a) = std::move(value);
  }

  /// c^k_ij, antisymmetric in (i, j).
  [[nodiscard]] Element bracket(std::size_t i, std::size_t j, std::size_t k) const {
    if (i == j)
      return zero();
    auto it = bracket_.find({std::min(i, j), std::max(i, j)});
    if (it == bracket_.end())
      return zero();
    return i < j ? it->second[k] : -it->second[k];
  }
  void set_bracket(std::size_t i, std::size_t j, std::size_t k, Element value) {
    require_function(value, "structure function");
    if (i >= rank_ || j >= rank_ || k >= rank_)
      throw Error("bracket index out of range");
    if (i == j) {
      if (!value.is_zero())
        throw Error("bracket of '" + frame_name(i) + "' with itself must be zero");
      return;
    }
    auto& row = bracket_.try_emplace({std::min(i, j), std::max(i, j)}, rank_, zero()).first->second;
    row[k] = i < j ? std::move(value) : -std::move(value);
  }

  /// Structure functions as stored: (i < j) -> c^•_ij.
  [[nodiscard]] const std::map<std::pair<std::size_t, std::size_t>, std::vector<Element>>& bracket_table() const {
    return bracket_;
  }

  /// Table-level equality: same coordinates, frame, anchor and brackets.
  friend bool operator==(const AlgebroidPresentation& a, const AlgebroidPresentation& b) {
    if (!same_generators(a.gens_, b.gens_))
      return false;
    for (std::size_t i = 0; i < a.rank_; ++i)
      for (std::size_t x = 0; x < a.base_count_; ++x)
        if (a.anchor(i, x) != b.anchor(i, x))
          return false;
    for (std::size_t i = 0; i < a.rank_; ++i)
      for (std::size_t j = i + 1; j < a.rank_; ++j)
        for (std::size_t k = 0; k < a.rank_; ++k)
          if (a.bracket(i, j, k) != b.bracket(i, j, k))
            return false;
    return true;
  }

private:
  void require_function(const Element& v, const char* what) const {
    v.check_compatible(zero());
    if (!v.is_homogeneous_degree(0))
      throw Error(std::string(what) + " must be a polynomial in the base coordinates");
  }

  std::string name_;
  std::size_t base_count_ = 0;
  std::size_t rank_ = 0;
  GeneratorSetPtr gens_;
  std::vector<std::vector<Element>> anchor_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Element>> bracket_;
};

/// (C(A), d_A).
struct DeRhamComplex {
  GeneratorSetPtr generators;
  GradedDerivation differential;
};

struct ValidationReport {
  bool passed = true;
  /// Generator name and the nonzero residual [d_A, d_A](g).
  std::vector<std::pair<std::string, Element>> failures;
};

/// Throws WeightError on the first entry whose weight is off.
inline void check_weights(const AlgebroidPresentation& p) {
  for (std::size_t i = 0; i < p.rank(); ++i)
    for (std::size_t a = 0; a < p.base_dimension(); ++a) {
      const int want = p.base_weight(a) - p.frame_weight(i);
      if (!p.anchor(i, a).is_homogeneous_weight(want))
        throw WeightError("anchor entry " + p.frame_name(i) + " -> d/d" + p.base_name(a) + " = " +
                              p.anchor(i, a).str() + " is not of weight " + std::to_string(want),
                          TableEntry{TableEntry::Kind::anchor, i, 0, a});
    }
  for (const auto& [ij, row] : p.bracket_table())
    for (std::size_t k = 0; k < p.rank(); ++k) {
      const int want = p.frame_weight(k) - p.frame_weight(ij.first) - p.frame_weight(ij.second);
      if (!row[k].is_homogeneous_weight(want))
        throw WeightError("structure function [" + p.frame_name(ij.first) + "," + p.frame_name(ij.second) +
                              "] component " + p.frame_name(k) + " = " + row[k].str() +
                              " is not of weight " + std::to_string(want),
                          TableEntry{TableEntry::Kind::bracket, ij.first, ij.second, k});
    }
}

/// d_A x^a = Σ_i ρ^a_i ξ^i and d_A ξ^k = −½ Σ_{i,j} c^k_ij ξ^i ξ^j.
inline DeRhamComplex build_differential(const AlgebroidPresentation& p) {
  check_weights(p);
  const GeneratorSetPtr& gens = p.generators();
  GradedDerivation d(gens, 1);
  for (std::size_t a = 0; a < p.base_dimension(); ++a) {
    Element img(gens);
    for (std::size_t i = 0; i < p.rank(); ++i)
      img += multiply(p.anchor(i, a), p.dual(i));
    d.set_image(GeneratorRef{false, a}, std::move(img));
  }
  for (std::size_t k = 0; k < p.rank(); ++k) {
    Element img(gens);
    for (const auto& [ij, row] : p.bracket_table())
      img -= multiply(row[k], multiply(p.dual(ij.first), p.dual(ij.second)));
    d.set_image(GeneratorRef{true, k}, std::move(img));
  }
  return DeRhamComplex{gens, std::move(d)};
}

/// Checks [d_A, d_A] = 0 on every generator; the Leibniz rule extends it.
inline ValidationReport validate(const AlgebroidPresentation& p) {
  const DeRhamComplex c = build_differential(p);
  const GradedDerivation square = derivation_commutator(c.differential, c.differential);
  ValidationReport report;
  for (std::size_t i = 0; i < p.generators()->size(); ++i) {
    const GeneratorRef g = p.generators()->from_global(i);
    if (!square.image(g).is_zero())
      report.failures.emplace_back(p.generators()->name(g), square.image(g));
  }
  report.passed = report.failures.empty();
  return report;
}

namespace presets {

/// T R^n with coordinates x1..xn (just "x" for n = 1) of weight 1 and frame
/// X1..Xn, anchor the identity.
inline AlgebroidPresentation tangent(std::size_t n, const std::string& name = "") {
  std::vector<EvenGenerator> base;
  std::vector<OddGenerator> frame;
  for (std::size_t a = 0; a < n; ++a) {
    const std::string suffix = n == 1 ? "" : std::to_string(a + 1);
    base.push_back({"x" + suffix, 1});
    frame.push_back({"X" + suffix, 1, OddOrigin::fiber_dual});
  }
  AlgebroidPresentation p(name.empty() ? "T" + std::to_string(n) : name, base, frame);
  for (std::size_t a = 0; a < n; ++a)
    p.set_anchor(a, a, p.constant(1));
  return p;
}

/// A Lie algebra over a point; constants[{i, j, k}] = c^k_ij for i < j.
struct LieAlgebraParams {
  std::string name;
  std::vector<std::string> basis;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational> constants;
};

inline AlgebroidPresentation lie_algebra(const LieAlgebraParams& params) {
  std::vector<OddGenerator> frame;
  for (const auto& b : params.basis)
    frame.push_back({b, 0, OddOrigin::fiber_dual});
  AlgebroidPresentation p(params.name, {}, frame);
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational> seen;
  for (const auto& [ijk, c] : params.constants) {
    auto [i, j, k] = ijk;
    if (i == j) {
      if (!c.is_zero())
        throw Error("structure constants are not antisymmetric: c(" + params.basis.at(i) + "," +
                    params.basis.at(i) + ") != 0");
      continue;
    }
    const Rational oriented = i < j ? c : -c;
    auto [it, inserted] = seen.try_emplace({std::min(i, j), std::max(i, j), k}, oriented);
    if (!inserted && it->second != oriented)
      throw Error("structure constants are not antisymmetric in (" + params.basis.at(i) + ", " +
                  params.basis.at(j) + ")");
  }
  for (const auto& [ijk, c] : seen) {
    auto [i, j, k] = ijk;
    p.set_bracket(i, j, k, p.constant(c));
  }
  return p;
}

inline AlgebroidPresentation abelian(std::size_t n, const std::string& name = "") {
  LieAlgebraParams params{name.empty() ? "Ab" + std::to_string(n) : name, {}, {}};
  for (std::size_t i = 0; i < n; ++i)
    params.basis.push_back("e" + std::to_string(i + 1));
  return lie_algebra(params);
}

/// aff(1): [e1, e2] = e2.
inline AlgebroidPresentation aff1() {
  return lie_algebra({"Aff1", {"e1", "e2"}, {{{0, 1, 1}, Rational(1)}}});
}

/// sl(2, R) in the basis h = e1, e = e2, f = e3:
/// [e1,e2] = 2 e2, [e1,e3] = -2 e3, [e2,e3] = e1.
inline AlgebroidPresentation sl2() {
  return lie_algebra({"SL2",
                      {"e1", "e2", "e3"},
                      {{{0, 1, 1}, Rational(2)}, {{0, 2, 2}, Rational(-2)}, {{1, 2, 0}, Rational(1)}}});
}

/// Heisenberg algebra: [e1, e2] = e3.
inline AlgebroidPresentation heisenberg() {
  return lie_algebra({"Heis", {"e1", "e2", "e3"}, {{{0, 1, 2}, Rational(1)}}});
}

/// Action algebroid g ⋉ M: anchor ρ(e_i) = Σ_a fields[i][a] ∂/∂x^a. The
/// fields are polynomials over the presentation's generators, supplied by a
/// callback once the generator set exists.
struct ActionParams {
  LieAlgebraParams algebra;
  std::vector<EvenGenerator> base;
  std::function<Element(const AlgebroidPresentation&, std::size_t frame, std::size_t coord)> field;
};

inline AlgebroidPresentation action(const ActionParams& params) {
  AlgebroidPresentation g = lie_algebra(params.algebra);
  std::vector<OddGenerator> frame = g.generators()->odds();
  AlgebroidPresentation p(params.algebra.name, params.base, frame);
  for (std::size_t i = 0; i < p.rank(); ++i)
    for (std::size_t a = 0; a < p.base_dimension(); ++a)
      p.set_anchor(i, a, params.field(p, i, a));
  for (const auto& [ij, row] : g.bracket_table())
    for (std::size_t k = 0; k < p.rank(); ++k)
      if (!row[k].is_zero())
        p.set_bracket(ij.first, ij.second, k, p.constant(row[k].coefficient(g.generators()->unit())));
  return p;
}

/// Constant-coefficient foliation: the frame is the list of spanning fields,
/// anchor the inclusion, all brackets zero.
struct FoliationParams {
  std::string name;
  std::vector<EvenGenerator> ambient;
  std::vector<std::string> field_names;
  std::vector<std::vector<Rational>> fields;  // fields[i][a] = component along ∂/∂x^a
};

inline AlgebroidPresentation foliation(const FoliationParams& params) {
  const std::size_t n = params.ambient.size();
  if (params.fields.size() != params.field_names.size())
    throw Error("foliation field names and fields differ in count");
  SparseRationalMatrix m(n, params.fields.size());
  std::vector<OddGenerator> frame;
  for (std::size_t i = 0; i < params.fields.size(); ++i) {
    if (params.fields[i].size() != n)
      throw Error("spanning field '" + params.field_names[i] + "' has the wrong number of components");
    std::optional<int> weight;
    for (std::size_t a = 0; a < n; ++a) {
      m.set(a, i, params.fields[i][a]);
      if (params.fields[i][a].is_zero())
        continue;
      if (weight && *weight != params.ambient[a].weight)
        throw Error("spanning field '" + params.field_names[i] +
                    "' mixes coordinates of different weights");
      weight = params.ambient[a].weight;
    }
    if (!weight)
      throw Error("spanning field '" + params.field_names[i] + "' is zero");
    frame.push_back({params.field_names[i], *weight, OddOrigin::leafwise_form});
  }
  if (rank(m) != params.fields.size())
    throw Error("spanning fields of foliation '" + params.name + "' are linearly dependent");
  AlgebroidPresentation p(params.name, params.ambient, frame);
  for (std::size_t i = 0; i < params.fields.size(); ++i)
    for (std::size_t a = 0; a < n; ++a)
      p.set_anchor(i, a, p.constant(params.fields[i][a]));
  return p;
}

using PresetParams = std::variant<std::size_t /* tangent(n) */, LieAlgebraParams, ActionParams, FoliationParams>;

/// Builds and validates one of the standard presentations.
inline AlgebroidPresentation standard_preset(const PresetParams& params) {
  AlgebroidPresentation p = std::visit(
      [](const auto& v) -> AlgebroidPresentation {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::size_t>)
          return tangent(v);
        else if constexpr (std::is_same_v<T, LieAlgebraParams>)
          return lie_algebra(v);
        else if constexpr (std::is_same_v<T, ActionParams>)
          return action(v);
        else
          return foliation(v);
      },
      params);
  const ValidationReport r = validate(p);
  if (!r.passed)
    throw Error("preset '" + p.name() + "' fails validation on generator " + r.failures.front().first);
  return p;
}

}  // namespace presets
}  // namespace lax
