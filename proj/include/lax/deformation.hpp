#pragma once

#include "lax/algebroid.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lax {

/// A cochain of C_def(A) in the vector-field picture: a graded derivation of
/// C(A) of degree k >= -1.
using DefCochain = GradedDerivation;

/// Weight shift shared by all nonzero generator images, if any.
inline std::optional<int> derivation_weight(const GradedDerivation& d) {
  std::optional<int> shift;
  const GeneratorSet& g = *d.generators();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const GeneratorRef ref = g.from_global(i);
    for (int w : d.image(ref).weights()) {
      const int s = w - g.weight(ref);
      if (shift && *shift != s)
        return std::nullopt;
      shift = s;
    }
  }
  return shift;
}

/// ∂/∂x^a as a degree-0 derivation.
inline GradedDerivation coordinate_derivative(const GeneratorSetPtr& gens, std::size_t a) {
  GradedDerivation d(gens, 0);
  d.set_image(GeneratorRef{false, a}, Element::constant(gens, 1));
  return d;
}

namespace detail {

/// Sorts `slots` in place and returns the sign of the sorting permutation, or
/// 0 when an index repeats.
inline int sort_with_sign(std::vector<std::size_t>& slots) {
  int sign = 1;
  for (std::size_t i = 1; i < slots.size(); ++i)
    for (std::size_t j = i; j > 0 && slots[j - 1] >= slots[j]; --j) {
      if (slots[j - 1] == slots[j])
        return 0;
      std::swap(slots[j - 1], slots[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < slots.size(); ++i)
    if (slots[i - 1] == slots[i])
      return 0;
  return sign;
}

inline void increasing_tuples(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                              std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    increasing_tuples(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<std::size_t>> increasing_tuples(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  if (k <= n)
    increasing_tuples(n, k, 0, cur, out);
  return out;
}

/// ξ^{i1}···ξ^{ik} for an increasing tuple.
inline Element odd_product(const GeneratorSetPtr& gens, const std::vector<std::size_t>& tuple) {
  Monomial m = gens->unit();
  for (auto i : tuple)
    m.odd |= std::uint64_t{1} << i;
  return Element::monomial(gens, m);
}

}  // namespace detail

/// (k+1)-multiderivation c of a presentation together with its symbol s_c,
/// both stored as totally antisymmetric tables over the frame:
///   c(e_{i1},…,e_{i(k+1)}) = Σ_j value(i, j) e_j
///   s_c(e_{i1},…,e_{ik})   = Σ_a symbol(i, a) ∂/∂x^a
class Multiderivation {
public:
  using Key = std::pair<std::vector<std::size_t>, std::size_t>;

  Multiderivation() = default;
  Multiderivation(const AlgebroidPresentation& pres, std::size_t arity)
      : gens_(pres.generators()), rank_(pres.rank()), base_(pres.base_dimension()), arity_(arity) {
    if (arity_ == 0)
      throw Error("multiderivations have arity >= 1");
  }

  [[nodiscard]] std::size_t arity() const { return arity_; }
  [[nodiscard]] int degree() const { return static_cast<int>(arity_) - 1; }
  [[nodiscard]] const GeneratorSetPtr& generators() const { return gens_; }
  [[nodiscard]] std::size_t rank() const { return rank_; }
  [[nodiscard]] std::size_t base_dimension() const { return base_; }
  [[nodiscard]] const std::map<Key, Element>& values() const { return values_; }
  [[nodiscard]] const std::map<Key, Element>& symbol() const { return symbol_; }

  [[nodiscard]] Element value(std::vector<std::size_t> slots, std::size_t j) const {
    return lookup(values_, std::move(slots), j, arity_);
  }
  [[nodiscard]] Element symbol(std::vector<std::size_t> slots, std::size_t a) const {
    return lookup(symbol_, std::move(slots), a, arity_ - 1);
  }

  /// Overwrites the entry for the (reordered) slots.
  void set_value(std::vector<std::size_t> slots, std::size_t j, const Element& v) {
    store(values_, std::move(slots), j, v, arity_, rank_, false);
  }
  void set_symbol(std::vector<std::size_t> slots, std::size_t a, const Element& v) {
    store(symbol_, std::move(slots), a, v, arity_ - 1, base_, false);
  }
  /// Like set_*, but rejects entries that contradict an earlier one under
  /// antisymmetry (or a nonzero value on repeated slots).
  void add_value_entry(std::vector<std::size_t> slots, std::size_t j, const Element& v) {
    store(values_, std::move(slots), j, v, arity_, rank_, true);
  }
  void add_symbol_entry(std::vector<std::size_t> slots, std::size_t a, const Element& v) {
    store(symbol_, std::move(slots), a, v, arity_ - 1, base_, true);
  }

  [[nodiscard]] bool is_zero() const { return values_.empty() && symbol_.empty(); }

  friend bool operator==(const Multiderivation& a, const Multiderivation& b) {
    return a.arity_ == b.arity_ && a.rank_ == b.rank_ && a.base_ == b.base_ && a.values_ == b.values_ &&
           a.symbol_ == b.symbol_;
  }

private:
  [[nodiscard]] Element lookup(const std::map<Key, Element>& table, std::vector<std::size_t> slots,
                               std::size_t out, std::size_t expected) const {
    if (slots.size() != expected)
      throw Error("multiderivation table accessed with " + std::to_string(slots.size()) + " slots, expected " +
                  std::to_string(expected));
    const int sign = detail::sort_with_sign(slots);
    if (sign == 0)
      return Element(gens_);
    auto it = table.find({slots, out});
    if (it == table.end())
      return Element(gens_);
    return sign > 0 ? it->second : -it->second;
  }

  void store(std::map<Key, Element>& table, std::vector<std::size_t> slots, std::size_t out, const Element& v,
             std::size_t expected, std::size_t out_range, bool strict) {
    if (slots.size() != expected)
      throw Error("multiderivation entry has " + std::to_string(slots.size()) + " slots, expected " +
                  std::to_string(expected));
    for (auto s : slots)
      if (s >= rank_)
        throw Error("multiderivation slot index out of range");
    if (out >= out_range)
      throw Error("multiderivation output index out of range");
    v.check_compatible(Element(gens_));
    if (!v.is_homogeneous_degree(0))
      throw Error("multiderivation entries must be polynomials in the base coordinates");
    const int sign = detail::sort_with_sign(slots);
    if (sign == 0) {
      if (!v.is_zero())
        throw Error("non-antisymmetric table: nonzero entry on repeated arguments");
      return;
    }
    Element oriented = sign > 0 ? v : -v;
    Key key{std::move(slots), out};
    auto it = table.find(key);
    if (strict && it != table.end() && it->second != oriented)
      throw Error("non-antisymmetric table: conflicting entries for the same arguments");
    if (oriented.is_zero()) {
      if (it != table.end())
        table.erase(it);
      return;
    }
    table[std::move(key)] = std::move(oriented);
  }

  GeneratorSetPtr gens_;
  std::size_t rank_ = 0;
  std::size_t base_ = 0;
  std::size_t arity_ = 1;
  std::map<Key, Element> values_;
  std::map<Key, Element> symbol_;
};

/// δX = [d_A, X].
inline DefCochain def_delta(const DefCochain& x, const DeRhamComplex& complex) {
  if (!same_generators(x.generators(), complex.generators))
    throw Error("cochain and complex use different generator sets");
  return derivation_commutator(complex.differential, x);
}

/// Graded commutator of deformation cochains.
inline DefCochain def_bracket(const DefCochain& x, const DefCochain& y) {
  if (!same_generators(x.generators(), y.generators()))
    throw Error("cochains use different generator sets");
  return derivation_commutator(x, y);
}

/// D_c: x^a ↦ Σ_I s^a_I ξ^I and ξ^m ↦ −Σ_J c^m_J ξ^J over increasing tuples
/// I (length k) and J (length k+1).
inline DefCochain from_multiderivation(const Multiderivation& c, const AlgebroidPresentation& pres) {
  if (!same_generators(c.generators(), pres.generators()))
    throw Error("multiderivation belongs to a different presentation");
  const GeneratorSetPtr& gens = pres.generators();
  DefCochain d(gens, c.degree());
  std::vector<Element> images(gens->size(), Element(gens));
  for (const auto& [key, poly] : c.symbol())
    images[key.second] += multiply(poly, detail::odd_product(gens, key.first));
  for (const auto& [key, poly] : c.values())
    images[gens->even_count() + key.second] -= multiply(poly, detail::odd_product(gens, key.first));
  for (std::size_t i = 0; i < images.size(); ++i)
    d.set_image(gens->from_global(i), std::move(images[i]));
  if (!derivation_weight(d) && !d.is_zero())
    throw Error("multiderivation tables are not weight-homogeneous");
  return d;
}

/// Inverse of from_multiderivation by coefficient extraction.
inline Multiderivation to_multiderivation(const DefCochain& x, const AlgebroidPresentation& pres) {
  if (x.degree() < 0)
    throw Error("degree -1 cochains have no multiderivation picture");
  if (!same_generators(x.generators(), pres.generators()))
    throw Error("cochain belongs to a different presentation");
  const GeneratorSetPtr& gens = pres.generators();
  Multiderivation c(pres, static_cast<std::size_t>(x.degree()) + 1);
  auto split = [&](const Element& image, auto&& sink) {
    std::map<std::vector<std::size_t>, Element> by_tuple;
    for (const auto& [m, coef] : image.terms()) {
      std::vector<std::size_t> tuple;
      for (std::size_t i = 0; i < gens->odd_count(); ++i)
        if (m.has_odd(i))
          tuple.push_back(i);
      Monomial poly = m;
      poly.odd = 0;
      by_tuple.try_emplace(tuple, gens).first->second.add_term(poly, coef);
    }
    for (auto& [tuple, poly] : by_tuple)
      sink(tuple, poly);
  };
  for (std::size_t a = 0; a < pres.base_dimension(); ++a)
    split(x.image(GeneratorRef{false, a}),
          [&](const std::vector<std::size_t>& t, const Element& p) { c.set_symbol(t, a, p); });
  for (std::size_t m = 0; m < pres.rank(); ++m)
    split(x.image(GeneratorRef{true, m}),
          [&](const std::vector<std::size_t>& t, const Element& p) { c.set_value(t, m, -p); });
  return c;
}

/// Calculus of sections Σ f_i e_i with polynomial coefficients, following the
/// bracket and anchor of a presentation and the Leibniz rules of a
/// multiderivation. Used to evaluate cochain formulas on frame arguments.
class SectionCalculus {
public:
  using Section = std::vector<Element>;
  using VectorField = std::vector<Element>;

  explicit SectionCalculus(const AlgebroidPresentation& pres) : pres_(pres) {
    for (std::size_t a = 0; a < pres.base_dimension(); ++a)
      partials_.push_back(coordinate_derivative(pres.generators(), a));
  }

  [[nodiscard]] Section frame(std::size_t i) const {
    Section s = zero();
    s[i] = pres_.constant(1);
    return s;
  }
  [[nodiscard]] Section zero() const { return Section(pres_.rank(), pres_.zero()); }

  [[nodiscard]] Element apply_field(const VectorField& v, const Element& f) const {
    Element out = pres_.zero();
    for (std::size_t a = 0; a < v.size(); ++a)
      if (!v[a].is_zero())
        out += multiply(v[a], partials_[a].apply(f));
    return out;
  }

  [[nodiscard]] VectorField anchor(const Section& s) const {
    VectorField v(pres_.base_dimension(), pres_.zero());
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!s[i].is_zero())
        for (std::size_t a = 0; a < v.size(); ++a)
          v[a] += multiply(s[i], pres_.anchor(i, a));
    return v;
  }

  /// [α, β] = Σ α_i β_j c^k_ij e_k + Σ_j ρ(α)(β_j) e_j − Σ_i ρ(β)(α_i) e_i.
  [[nodiscard]] Section bracket(const Section& alpha, const Section& beta) const {
    Section out = zero();
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i].is_zero())
        continue;
      for (std::size_t j = 0; j < beta.size(); ++j) {
        if (beta[j].is_zero() || i == j)
          continue;
        const Element ab = multiply(alpha[i], beta[j]);
        for (std::size_t k = 0; k < out.size(); ++k) {
          const Element c = pres_.bracket(i, j, k);
          if (!c.is_zero())
            out[k] += multiply(ab, c);
        }
      }
    }
    const VectorField ra = anchor(alpha), rb = anchor(beta);
    for (std::size_t j = 0; j < beta.size(); ++j)
      out[j] += apply_field(ra, beta[j]);
    for (std::size_t i = 0; i < alpha.size(); ++i)
      out[i] -= apply_field(rb, alpha[i]);
    return out;
  }

  /// s_c on arbitrary sections (tensorial).
  [[nodiscard]] VectorField symbol(const Multiderivation& c, const std::vector<Section>& args) const {
    VectorField v(pres_.base_dimension(), pres_.zero());
    if (v.empty())
      return v;
    std::vector<std::size_t> idx;
    expand_tensorial(args, 0, pres_.constant(1), idx, [&](const std::vector<std::size_t>& t, const Element& coef) {
      for (std::size_t a = 0; a < v.size(); ++a) {
        const Element s = c.symbol(t, a);
        if (!s.is_zero())
          v[a] += multiply(coef, s);
      }
    });
    return v;
  }

  /// c on arbitrary sections, pulling coefficients out slot by slot with
  /// c(…, f β_s, …) = f c(…, β_s, …) + (−1)^{n−1−s} s_c(…β̂_s…)(f) β_s.
  [[nodiscard]] Section evaluate(const Multiderivation& c, std::vector<Section> args) const {
    if (args.size() != c.arity())
      throw Error("multiderivation evaluated on the wrong number of arguments");
    return evaluate_from(c, args, 0);
  }

  /// The two-sum coboundary of a multiderivation evaluated on arbitrary sections.
  [[nodiscard]] Section delta(const Multiderivation& c, const std::vector<Section>& args) const {
    const std::size_t n = args.size();
    Section out = zero();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Section> rest;
      for (std::size_t t = 0; t < n; ++t)
        if (t != i)
          rest.push_back(args[t]);
      Section term = bracket(args[i], evaluate(c, rest));
      add_scaled(out, term, i % 2 == 0 ? 1 : -1);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        std::vector<Section> rest{bracket(args[i], args[j])};
        for (std::size_t t = 0; t < n; ++t)
          if (t != i && t != j)
            rest.push_back(args[t]);
        Section term = evaluate(c, rest);
        add_scaled(out, term, (i + j) % 2 == 0 ? 1 : -1);
      }
    return out;
  }

  [[nodiscard]] const AlgebroidPresentation& presentation() const { return pres_; }

private:
  static void add_scaled(Section& out, const Section& s, int sign) {
    for (std::size_t k = 0; k < out.size(); ++k)
      if (sign > 0)
        out[k] += s[k];
      else
        out[k] -= s[k];
  }

  template <class Sink>
  void expand_tensorial(const std::vector<Section>& args, std::size_t pos, const Element& coef,
                        std::vector<std::size_t>& idx, Sink&& sink) const {
    if (pos == args.size()) {
      sink(idx, coef);
      return;
    }
    for (std::size_t i = 0; i < args[pos].size(); ++i) {
      if (args[pos][i].is_zero())
        continue;
      idx.push_back(i);
      expand_tensorial(args, pos + 1, multiply(coef, args[pos][i]), idx, sink);
      idx.pop_back();
    }
  }

  [[nodiscard]] Section evaluate_from(const Multiderivation& c, std::vector<Section>& args, std::size_t slot) const {
    const std::size_t n = args.size();
    if (slot == n) {
      Section out = zero();
      std::vector<std::size_t> idx;
      for (const auto& a : args) {
        std::size_t found = a.size();
        for (std::size_t i = 0; i < a.size(); ++i)
          if (!a[i].is_zero())
            found = i;
        if (found == a.size())
          return out;
        idx.push_back(found);
      }
      for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = c.value(idx, k);
      return out;
    }
    Section out = zero();
    const Section original = args[slot];
    for (std::size_t i = 0; i < original.size(); ++i) {
      const Element& f = original[i];
      if (f.is_zero())
        continue;
      args[slot] = frame(i);
      Section inner = evaluate_from(c, args, slot + 1);
      for (std::size_t k = 0; k < out.size(); ++k)
        if (!inner[k].is_zero())
          out[k] += multiply(f, inner[k]);
      // Slots before `slot` already hold frame sections; later ones are untouched.
      std::vector<Section> others;
      for (std::size_t t = 0; t < n; ++t)
        if (t != slot)
          others.push_back(args[t]);
      const Element derivative = apply_field(symbol(c, others), f);
      if (!derivative.is_zero()) {
        const bool negative = (n - 1 - slot) % 2 != 0;
        out[i] += negative ? -derivative : derivative;
      }
    }
    args[slot] = original;
    return out;
  }

  const AlgebroidPresentation& pres_;
  std::vector<GradedDerivation> partials_;
};

/// (D_c ω)(e_J) via the shuffle formula of the derivation picture, for every
/// increasing J, reassembled as an element of C(A). Independent of the
/// generator-image route of from_multiderivation.
inline Element shuffle_evaluate(const Multiderivation& c, const AlgebroidPresentation& pres, const Element& omega) {
  const GeneratorSetPtr& gens = pres.generators();
  const SectionCalculus calc(pres);
  const std::size_t k = c.arity() - 1;
  Element out(gens);
  for (int l = 0; l <= static_cast<int>(gens->odd_count()); ++l) {
    const Element part = omega.degree_component(l);
    if (part.is_zero())
      continue;
    const std::size_t ul = static_cast<std::size_t>(l);
    // ω(e_{j1},…,e_{jl}) as a polynomial.
    auto evaluate_form = [&](std::vector<std::size_t> slots) {
      Element v(gens);
      const int sign = detail::sort_with_sign(slots);
      if (sign == 0)
        return v;
      Monomial mask = gens->unit();
      for (auto s : slots)
        mask.odd |= std::uint64_t{1} << s;
      for (const auto& [m, coef] : part.terms())
        if (m.odd == mask.odd) {
          Monomial poly = m;
          poly.odd = 0;
          v.add_term(poly, sign > 0 ? coef : -coef);
        }
      return v;
    };
    for (const auto& tuple : detail::increasing_tuples(pres.rank(), k + ul)) {
      Element value(gens);
      // Σ_{σ ∈ S_{k,l}} (−)^σ s_c(e_σ(1..k))(ω(e_σ(k+1..k+l)))
      for (const auto& front : detail::increasing_tuples(k + ul, k)) {
        std::vector<std::size_t> first, second;
        std::vector<bool> taken(k + ul, false);
        std::size_t position_sum = 0;
        for (auto p : front) {
          taken[p] = true;
          first.push_back(tuple[p]);
          position_sum += p;
        }
        for (std::size_t p = 0; p < k + ul; ++p)
          if (!taken[p])
            second.push_back(tuple[p]);
        const bool odd_shuffle = (position_sum - k * (k - 1) / 2) % 2 != 0;
        std::vector<SectionCalculus::Section> args;
        for (auto i : first)
          args.push_back(calc.frame(i));
        const Element term = calc.apply_field(calc.symbol(c, args), evaluate_form(second));
        value += odd_shuffle ? -term : term;
      }
      // −Σ_{σ ∈ S_{k+1,l−1}} (−)^σ ω(c(e_σ(1..k+1)), e_σ(k+2..k+l))
      if (ul >= 1) {
        for (const auto& front : detail::increasing_tuples(k + ul, k + 1)) {
          std::vector<std::size_t> first, second;
          std::vector<bool> taken(k + ul, false);
          std::size_t position_sum = 0;
          for (auto p : front) {
            taken[p] = true;
            first.push_back(tuple[p]);
            position_sum += p;
          }
          for (std::size_t p = 0; p < k + ul; ++p)
            if (!taken[p])
              second.push_back(tuple[p]);
          const bool odd_shuffle = (position_sum - (k + 1) * k / 2) % 2 != 0;
          Element term(gens);
          for (std::size_t m = 0; m < pres.rank(); ++m) {
            const Element cm = c.value(first, m);
            if (cm.is_zero())
              continue;
            std::vector<std::size_t> slots{m};
            slots.insert(slots.end(), second.begin(), second.end());
            term += multiply(cm, evaluate_form(slots));
          }
          value -= odd_shuffle ? -term : term;
        }
      }
      out += multiply(value, detail::odd_product(gens, tuple));
    }
  }
  return out;
}

/// δc computed from the two-sum coboundary on frame sections. The symbol of
/// δc is read off from the Leibniz defect δc(e_I, x^a e_m) − x^a δc(e_I, e_m).
inline Multiderivation delta_multiderivation(const Multiderivation& c, const AlgebroidPresentation& pres) {
  if (!same_generators(c.generators(), pres.generators()))
    throw Error("multiderivation belongs to a different presentation");
  const SectionCalculus calc(pres);
  const std::size_t n = c.arity() + 1;
  Multiderivation out(pres, n);
  for (const auto& tuple : detail::increasing_tuples(pres.rank(), n)) {
    std::vector<SectionCalculus::Section> args;
    for (auto i : tuple)
      args.push_back(calc.frame(i));
    const auto value = calc.delta(c, args);
    for (std::size_t k = 0; k < pres.rank(); ++k)
      if (!value[k].is_zero())
        out.set_value(tuple, k, value[k]);
  }
  if (pres.rank() == 0 || pres.base_dimension() == 0)
    return out;
  for (const auto& tuple : detail::increasing_tuples(pres.rank(), n - 1)) {
    std::vector<SectionCalculus::Section> args;
    for (auto i : tuple)
      args.push_back(calc.frame(i));
    args.push_back(calc.frame(0));
    const auto plain = calc.delta(c, args);
    for (std::size_t a = 0; a < pres.base_dimension(); ++a) {
      auto scaled_args = args;
      scaled_args.back()[0] = pres.coordinate(a);
      const auto scaled = calc.delta(c, scaled_args);
      const Element defect = scaled[0] - multiply(pres.coordinate(a), plain[0]);
      if (!defect.is_zero())
        out.set_symbol(tuple, a, defect);
    }
  }
  return out;
}

struct McDefectReport {
  DefCochain defect;
  bool is_mc = true;
};

/// δc + ½[c, c] in the vector-field picture, relative to the presentation's
/// own structure.
inline McDefectReport mc_defect(const Multiderivation& c, const AlgebroidPresentation& pres) {
  if (c.arity() != 2)
    throw Error("Maurer-Cartan defect needs an arity-2 multiderivation");
  const DeRhamComplex complex = build_differential(pres);
  const DefCochain dc = from_multiderivation(c, pres);
  DefCochain defect = def_delta(dc, complex);
  defect += Rational(1, 2) * def_bracket(dc, dc);
  McDefectReport r{std::move(defect), true};
  r.is_mc = r.defect.is_zero();
  return r;
}

/// Presentation with bracket c_old + values(c) and anchor ρ + symbol(c).
inline AlgebroidPresentation deform(const AlgebroidPresentation& pres, const Multiderivation& c) {
  if (c.arity() != 2)
    throw Error("deformations are given by arity-2 multiderivations");
  if (!same_generators(c.generators(), pres.generators()))
    throw Error("multiderivation belongs to a different presentation");
  AlgebroidPresentation out = pres;
  for (const auto& [key, poly] : c.values())
    out.set_bracket(key.first[0], key.first[1], key.second,
                    pres.bracket(key.first[0], key.first[1], key.second) + poly);
  for (const auto& [key, poly] : c.symbol())
    out.set_anchor(key.first[0], key.second, pres.anchor(key.first[0], key.second) + poly);
  check_weights(out);
  return out;
}

}  // namespace lax
