#pragma once

#include "lax/generators.hpp"
#include "lax/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>

namespace lax {

/// Product of two monomials in a graded-commutative algebra. Returns nullopt
/// when an odd generator repeats; otherwise the product monomial and the
/// Koszul sign (+1/-1) of reordering the odd factors.
inline std::optional<std::pair<Monomial, int>> multiply_monomials(const Monomial& a,
                                                                  const Monomial& b) {
  if ((a.odd & b.odd) != 0)
    return std::nullopt;
  Monomial m = a;
  for (std::size_t i = 0; i < m.exponents.size(); ++i)
    m.exponents[i] += b.exponents[i];
  m.odd = a.odd | b.odd;
  int inversions = 0;
  for (std::uint64_t rest = b.odd; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    if (j < 63)
      inversions += std::popcount(a.odd >> (j + 1));
  }
  return std::make_pair(std::move(m), (inversions % 2 == 0) ? 1 : -1);
}

/// Renders a monomial as "x^2*y*e1*e2" (odd generators by name); the unit
/// monomial renders as the empty string.
inline std::string format_monomial(const GeneratorSet& gens, const Monomial& m) {
  std::string out;
  auto append = [&](const std::string& s) {
    if (!out.empty())
      out += '*';
    out += s;
  };
  for (std::size_t i = 0; i < gens.even_count(); ++i) {
    if (m.exponents[i] == 0)
      continue;
    append(gens.evens()[i].name + (m.exponents[i] > 1 ? "^" + std::to_string(m.exponents[i]) : ""));
  }
  for (std::size_t i = 0; i < gens.odd_count(); ++i)
    if (m.has_odd(i))
      append(gens.odds()[i].name);
  return out;
}

/// Appends "coef*body" to a sum being built in `out`, choosing " + " / " - "
/// separators and dropping unit coefficients.
inline void append_signed_term(std::string& out, const Rational& coef, const std::string& body) {
  Rational magnitude = coef.sign() < 0 ? -coef : coef;
  if (out.empty())
    out += coef.sign() < 0 ? "-" : "";
  else
    out += coef.sign() < 0 ? " - " : " + ";
  if (body.empty())
    out += magnitude.str();
  else if (magnitude.is_one())
    out += body;
  else
    out += magnitude.str() + "*" + body;
}

/// Element of a weighted graded-commutative polynomial algebra: a finite sum
/// of monomials with nonzero rational coefficients.
class Element {
public:
  using Terms = std::map<Monomial, Rational, MonomialLess>;

  Element() = default;
  explicit Element(GeneratorSetPtr gens) : gens_(std::move(gens)) {}

  static Element constant(GeneratorSetPtr gens, const Rational& c) {
    Element e(gens);
    e.add_term(e.gens_->unit(), c);
    return e;
  }
  static Element monomial(GeneratorSetPtr gens, Monomial m, const Rational& c = Rational(1)) {
    Element e(std::move(gens));
    e.add_term(std::move(m), c);
    return e;
  }
  static Element generator(GeneratorSetPtr gens, GeneratorRef g) {
    Monomial m = gens->monomial_of(g);
    return monomial(std::move(gens), std::move(m));
  }
  static Element generator(const GeneratorSetPtr& gens, const std::string& name) {
    return generator(gens, gens->at(name));
  }

  [[nodiscard]] const GeneratorSetPtr& generators() const { return gens_; }
  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }

  [[nodiscard]] Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(Monomial m, const Rational& c) {
    if (c.is_zero())
      return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero())
        terms_.erase(it);
    }
  }

  /// Cochain degree shared by all terms; nullopt for zero or mixed degrees.
  [[nodiscard]] std::optional<int> degree() const {
    std::optional<int> d;
    for (const auto& [m, c] : terms_) {
      if (d && *d != m.degree())
        return std::nullopt;
      d = m.degree();
    }
    return d;
  }
  [[nodiscard]] bool is_homogeneous_degree(int d) const {
    for (const auto& [m, c] : terms_)
      if (m.degree() != d)
        return false;
    return true;
  }
  [[nodiscard]] bool is_homogeneous_weight(int w) const {
    for (const auto& [m, c] : terms_)
      if (gens_->weight(m) != w)
        return false;
    return true;
  }
  [[nodiscard]] std::set<int> weights() const {
    std::set<int> out;
    for (const auto& [m, c] : terms_)
      out.insert(gens_->weight(m));
    return out;
  }
  [[nodiscard]] Element weight_component(int w) const {
    Element e(gens_);
    for (const auto& [m, c] : terms_)
      if (gens_->weight(m) == w)
        e.terms_.emplace(m, c);
    return e;
  }
  [[nodiscard]] Element degree_component(int d) const {
    Element e(gens_);
    for (const auto& [m, c] : terms_)
      if (m.degree() == d)
        e.terms_.emplace(m, c);
    return e;
  }

  Element& operator+=(const Element& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_)
      add_term(m, c);
    return *this;
  }
  Element& operator-=(const Element& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_)
      add_term(m, -c);
    return *this;
  }
  Element& operator*=(const Rational& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_)
      c *= s;
    return *this;
  }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator-(Element a) { return a *= Rational(-1); }
  friend Element operator*(Element a, const Rational& s) { return a *= s; }
  friend Element operator*(const Rational& s, Element a) { return a *= s; }
  friend Element operator*(const Element& a, const Element& b) { return multiply(a, b); }

  /// Graded-commutative product with Koszul signs.
  friend Element multiply(const Element& a, const Element& b) {
    a.check_compatible(b);
    Element out(a.gens_ ? a.gens_ : b.gens_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        auto prod = multiply_monomials(ma, mb);
        if (!prod)
          continue;
        out.add_term(std::move(prod->first), prod->second > 0 ? ca * cb : -(ca * cb));
      }
    return out;
  }

  friend bool operator==(const Element& a, const Element& b) {
    if (a.terms_ != b.terms_)
      return false;
    return a.terms_.empty() || same_generators(a.gens_, b.gens_);
  }

  /// Leading terms first ("x^2 + 2*x*e1 - 1/2").
  [[nodiscard]] std::string str() const {
    if (terms_.empty())
      return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
      append_signed_term(out, it->second, format_monomial(*gens_, it->first));
    return out;
  }
  friend std::ostream& operator<<(std::ostream& os, const Element& e) { return os << e.str(); }

  void check_compatible(const Element& o) const {
    if (!gens_ || !o.gens_)
      return;
    if (!same_generators(gens_, o.gens_))
      throw Error("operands live over different generator sets");
  }

private:
  GeneratorSetPtr gens_;
  Terms terms_;
};

/// Re-expresses `e` over `target`, mapping generators by name. Throws when a
/// generator used by `e` has no counterpart or changes parity.
inline Element transfer(const Element& e, const GeneratorSetPtr& target) {
  const GeneratorSet& src = *e.generators();
  Element out(target);
  for (const auto& [m, c] : e.terms()) {
    Monomial t = target->unit();
    for (std::size_t i = 0; i < src.even_count(); ++i) {
      if (m.exponents[i] == 0)
        continue;
      auto ref = target->find(src.evens()[i].name);
      if (!ref || ref->odd)
        throw Error("cannot transfer even generator '" + src.evens()[i].name + "'");
      t.exponents[ref->index] += m.exponents[i];
    }
    Element term = Element::monomial(target, t, c);
    for (std::size_t i = 0; i < src.odd_count(); ++i) {
      if (!m.has_odd(i))
        continue;
      auto ref = target->find(src.odds()[i].name);
      if (!ref || !ref->odd)
        throw Error("cannot transfer odd generator '" + src.odds()[i].name + "'");
      term = term * Element::generator(target, *ref);
    }
    out += term;
  }
  return out;
}

}  // namespace lax
