#pragma once

#include "lax/element.hpp"

#include <string>
#include <vector>

namespace lax {

/// Graded derivation of a weighted graded-commutative algebra, stored by the
/// images of the generators. The image of a generator g is homogeneous of
/// cochain degree deg(g) + degree(). Extension to products follows
///   D(uv) = D(u) v + (-1)^{|D||u|} u D(v).
class GradedDerivation {
public:
  GradedDerivation() = default;
  GradedDerivation(GeneratorSetPtr gens, int degree) : gens_(std::move(gens)), degree_(degree) {
    if (degree_ < -1)
      throw Error("derivation degree must be >= -1");
    images_.assign(gens_->size(), Element(gens_));
  }

  [[nodiscard]] const GeneratorSetPtr& generators() const { return gens_; }
  [[nodiscard]] int degree() const { return degree_; }

  [[nodiscard]] const Element& image(GeneratorRef g) const { return images_[gens_->global_index(g)]; }
  [[nodiscard]] const Element& image(const std::string& name) const { return image(gens_->at(name)); }
  [[nodiscard]] const std::vector<Element>& images() const { return images_; }

  void set_image(GeneratorRef g, Element value) {
    value.check_compatible(Element(gens_));
    const int want = GeneratorSet::degree(g) + degree_;
    if (!value.is_homogeneous_degree(want))
      throw Error("image of '" + gens_->name(g) + "' must have cochain degree " +
                  std::to_string(want));
    images_[gens_->global_index(g)] = std::move(value);
  }
  void set_image(const std::string& name, Element value) { set_image(gens_->at(name), std::move(value)); }

  [[nodiscard]] bool is_zero() const {
    for (const auto& e : images_)
      if (!e.is_zero())
        return false;
    return true;
  }

  /// True when D raises weight by exactly `shift` on every generator.
  [[nodiscard]] bool has_weight(int shift) const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (!images_[i].is_homogeneous_weight(gens_->weight(gens_->from_global(i)) + shift))
        return false;
    return true;
  }
  [[nodiscard]] bool is_weight_preserving() const { return has_weight(0); }

  /// D applied to a single monomial.
  [[nodiscard]] Element apply(const Monomial& m) const {
    Element out(gens_);
    const GeneratorSet& g = *gens_;
    Monomial odd_only = g.unit();
    odd_only.odd = m.odd;
    const Element odd_part = Element::monomial(gens_, odd_only);
    for (std::size_t a = 0; a < g.even_count(); ++a) {
      if (m.exponents[a] == 0 || images_[a].is_zero())
        continue;
      Monomial rest = g.unit();
      rest.exponents = m.exponents;
      rest.exponents[a] -= 1;
      out += multiply(Element::monomial(gens_, rest, Rational(m.exponents[a])) * images_[a], odd_part);
    }
    if (m.odd != 0) {
      Monomial even_only = m;
      even_only.odd = 0;
      const Element even_part = Element::monomial(gens_, even_only);
      std::uint64_t prefix = 0;
      int position = 0;
      for (std::uint64_t rest = m.odd; rest != 0; rest &= rest - 1, ++position) {
        const int j = std::countr_zero(rest);
        const std::uint64_t bit = std::uint64_t{1} << j;
        const Element& img = images_[g.even_count() + static_cast<std::size_t>(j)];
        if (!img.is_zero()) {
          Monomial pre = g.unit();
          pre.odd = prefix;
          Monomial post = g.unit();
          post.odd = m.odd & ~(prefix | bit);
          Element term = multiply(multiply(Element::monomial(gens_, pre), img),
                                  Element::monomial(gens_, post));
          if ((degree_ * position) % 2 != 0)
            term *= Rational(-1);
          out += multiply(even_part, term);
        }
        prefix |= bit;
      }
    }
    return out;
  }

  [[nodiscard]] Element apply(const Element& a) const {
    a.check_compatible(Element(gens_));
    Element out(gens_);
    for (const auto& [m, c] : a.terms())
      out += apply(m) * c;
    return out;
  }

  GradedDerivation& operator+=(const GradedDerivation& o) {
    check_same(o);
    for (std::size_t i = 0; i < images_.size(); ++i)
      images_[i] += o.images_[i];
    return *this;
  }
  GradedDerivation& operator-=(const GradedDerivation& o) {
    check_same(o);
    for (std::size_t i = 0; i < images_.size(); ++i)
      images_[i] -= o.images_[i];
    return *this;
  }
  GradedDerivation& operator*=(const Rational& s) {
    for (auto& e : images_)
      e *= s;
    return *this;
  }
  friend GradedDerivation operator+(GradedDerivation a, const GradedDerivation& b) { return a += b; }
  friend GradedDerivation operator-(GradedDerivation a, const GradedDerivation& b) { return a -= b; }
  friend GradedDerivation operator*(const Rational& s, GradedDerivation a) { return a *= s; }

  /// Left multiplication by an element: (ωD)(g) = ω·D(g).
  [[nodiscard]] GradedDerivation left_multiply(const Element& omega) const {
    auto d = omega.degree();
    if (!d && !omega.is_zero())
      throw Error("left multiplication needs a degree-homogeneous element");
    GradedDerivation out(gens_, degree_ + d.value_or(0));
    for (std::size_t i = 0; i < images_.size(); ++i)
      out.images_[i] = multiply(omega, images_[i]);
    return out;
  }

  friend bool operator==(const GradedDerivation& a, const GradedDerivation& b) {
    if (a.is_zero() && b.is_zero())
      return same_generators(a.gens_, b.gens_);
    return a.degree_ == b.degree_ && same_generators(a.gens_, b.gens_) && a.images_ == b.images_;
  }

  [[nodiscard]] std::string str() const {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i].is_zero())
        continue;
      out += first ? " " : ", ";
      first = false;
      out += gens_->name(gens_->from_global(i)) + " -> " + images_[i].str();
    }
    return out + (first ? "}" : " }");
  }

  void check_same(const GradedDerivation& o) const {
    if (!same_generators(gens_, o.gens_))
      throw Error("derivations live over different generator sets");
    if (degree_ != o.degree_ && !o.is_zero() && !is_zero())
      throw Error("cannot add derivations of different degrees");
  }

private:
  GeneratorSetPtr gens_;
  int degree_ = 0;
  std::vector<Element> images_;
};

inline Element apply_derivation(const GradedDerivation& d, const Element& a) { return d.apply(a); }

/// [D1, D2] = D1∘D2 − (−1)^{|D1||D2|} D2∘D1, recorded on generators.
inline GradedDerivation derivation_commutator(const GradedDerivation& d1, const GradedDerivation& d2) {
  if (!same_generators(d1.generators(), d2.generators()))
    throw Error("commutator of derivations over different generator sets");
  const int deg = d1.degree() + d2.degree();
  const bool sign_flip = (d1.degree() * d2.degree()) % 2 != 0;
  GradedDerivation out(d1.generators(), std::max(deg, -1));
  if (deg < -1)
    return out;
  const GeneratorSet& gens = *d1.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const GeneratorRef g = gens.from_global(i);
    Element value = d1.apply(d2.image(g));
    Element other = d2.apply(d1.image(g));
    if (sign_flip)
      value += other;
    else
      value -= other;
    out.set_image(g, std::move(value));
  }
  return out;
}

}  // namespace lax
