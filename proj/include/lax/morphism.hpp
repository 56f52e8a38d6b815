#pragma once

#include "lax/deformation.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace lax {

/// Lie algebroid morphism F: A → B stored contravariantly by the algebra map
/// F*: C(B) → C(A) on generators.
class AlgebroidMorphism {
public:
  AlgebroidMorphism() = default;

  /// `images` maps each generator name of C(B) to an element of C(A) of the
  /// same degree and weight; missing generators map to zero. Throws unless F*
  /// commutes with the differentials on every generator.
  AlgebroidMorphism(AlgebroidPresentation source, AlgebroidPresentation target,
                    const std::map<std::string, Element>& images)
      : source_(std::move(source)), target_(std::move(target)) {
    const GeneratorSet& tg = *target_.generators();
    images_.assign(tg.size(), source_.zero());
    for (const auto& [name, value] : images) {
      const auto ref = tg.find(name);
      if (!ref)
        throw Error("morphism assigns unknown target generator '" + name + "'");
      value.check_compatible(source_.zero());
      if (!value.is_homogeneous_degree(GeneratorSet::degree(*ref)))
        throw Error("image of '" + name + "' has the wrong cochain degree");
      if (!value.is_homogeneous_weight(tg.weight(*ref)))
        throw Error("image of '" + name + "' has the wrong weight");
      images_[tg.global_index(*ref)] = value;
    }
    const GradedDerivation& da = build_differential(source_).differential;
    const GradedDerivation& db = build_differential(target_).differential;
    source_d_ = da;
    target_d_ = db;
    for (std::size_t i = 0; i < tg.size(); ++i) {
      const GeneratorRef g = tg.from_global(i);
      if (pullback(db.image(g)) != da.apply(images_[i]))
        throw Error("F* does not commute with the differentials on generator '" + tg.name(g) + "'");
    }
  }

  [[nodiscard]] const AlgebroidPresentation& source() const { return source_; }
  [[nodiscard]] const AlgebroidPresentation& target() const { return target_; }
  [[nodiscard]] const std::vector<Element>& images() const { return images_; }
  [[nodiscard]] const Element& image(GeneratorRef g) const {
    return images_[target_.generators()->global_index(g)];
  }
  [[nodiscard]] const GradedDerivation& source_differential() const { return source_d_; }
  [[nodiscard]] const GradedDerivation& target_differential() const { return target_d_; }

  /// F* on a monomial of C(B): even factors first, odd factors in increasing
  /// order, matching the monomial's own normal form.
  [[nodiscard]] Element pullback(const Monomial& m) const {
    const GeneratorSet& tg = *target_.generators();
    Element out = source_.constant(1);
    for (std::size_t a = 0; a < tg.even_count(); ++a)
      for (int e = 0; e < m.exponents[a]; ++e)
        out = multiply(out, images_[a]);
    for (std::size_t i = 0; i < tg.odd_count(); ++i)
      if (m.has_odd(i))
        out = multiply(out, images_[tg.even_count() + i]);
    return out;
  }
  [[nodiscard]] Element pullback(const Element& w) const {
    w.check_compatible(target_.zero());
    Element out = source_.zero();
    for (const auto& [m, c] : w.terms())
      out += pullback(m) * c;
    return out;
  }

private:
  AlgebroidPresentation source_;
  AlgebroidPresentation target_;
  std::vector<Element> images_;
  GradedDerivation source_d_;
  GradedDerivation target_d_;
};

/// The identity morphism of a presentation.
inline AlgebroidMorphism identity_morphism(const AlgebroidPresentation& p) {
  std::map<std::string, Element> images;
  const GeneratorSet& g = *p.generators();
  for (std::size_t i = 0; i < g.size(); ++i)
    images.emplace(g.name(g.from_global(i)), Element::generator(p.generators(), g.from_global(i)));
  return AlgebroidMorphism(p, p, images);
}

using MorphismPtr = std::shared_ptr<const AlgebroidMorphism>;

inline Element pullback_forms(const AlgebroidMorphism& f, const Element& w) { return f.pullback(w); }

/// F-relative vector field Z: C(B) → C(A) of degree k, stored on the
/// generators of C(B) and extended by
///   Z(ω₁ω₂) = Z(ω₁) F*(ω₂) + (−1)^{k|ω₁|} F*(ω₁) Z(ω₂).
class RelativeCochain {
public:
  RelativeCochain() = default;
  RelativeCochain(MorphismPtr f, int degree) : f_(std::move(f)), degree_(degree) {
    if (degree < -1)
      throw Error("relative cochain degree must be >= -1");
    images_.assign(f_->target().generators()->size(), f_->source().zero());
  }

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] const AlgebroidMorphism& morphism() const { return *f_; }
  [[nodiscard]] const MorphismPtr& morphism_ptr() const { return f_; }
  [[nodiscard]] bool over(const AlgebroidMorphism& f) const {
    return same_generators(f.source().generators(), f_->source().generators()) &&
           same_generators(f.target().generators(), f_->target().generators());
  }
  [[nodiscard]] const std::vector<Element>& images() const { return images_; }
  [[nodiscard]] const Element& image(GeneratorRef g) const {
    return images_[f_->target().generators()->global_index(g)];
  }
  [[nodiscard]] const Element& image(const std::string& name) const {
    return image(f_->target().generators()->at(name));
  }

  void set_image(GeneratorRef g, Element value) {
    value.check_compatible(f_->source().zero());
    const int want = GeneratorSet::degree(g) + degree_;
    if (!value.is_homogeneous_degree(want))
      throw Error("relative cochain image of '" + f_->target().generators()->name(g) +
                  "' must have cochain degree " + std::to_string(want));
    images_[f_->target().generators()->global_index(g)] = std::move(value);
  }
  void set_image(const std::string& name, Element value) {
    set_image(f_->target().generators()->at(name), std::move(value));
  }

  [[nodiscard]] bool is_zero() const {
    for (const auto& e : images_)
      if (!e.is_zero())
        return false;
    return true;
  }

  [[nodiscard]] Element apply(const Monomial& m) const {
    const AlgebroidMorphism& f = *f_;
    const GeneratorSet& tg = *f.target().generators();
    Element out = f.source().zero();
    Monomial odd_part = tg.unit();
    odd_part.odd = m.odd;
    Monomial even_part = m;
    even_part.odd = 0;
    const Element odd_pulled = f.pullback(odd_part);
    for (std::size_t a = 0; a < tg.even_count(); ++a) {
      if (m.exponents[a] == 0 || images_[a].is_zero())
        continue;
      Monomial rest = even_part;
      rest.exponents[a] -= 1;
      out += multiply(multiply(f.pullback(rest), images_[a]), odd_pulled) * Rational(m.exponents[a]);
    }
    if (m.odd != 0) {
      const Element even_pulled = f.pullback(even_part);
      std::uint64_t prefix = 0;
      int position = 0;
      for (std::uint64_t rest = m.odd; rest != 0; rest &= rest - 1, ++position) {
        const int j = std::countr_zero(rest);
        const std::uint64_t bit = std::uint64_t{1} << j;
        const Element& img = images_[tg.even_count() + static_cast<std::size_t>(j)];
        if (!img.is_zero()) {
          Monomial pre = tg.unit(), post = tg.unit();
          pre.odd = prefix;
          post.odd = m.odd & ~(prefix | bit);
          Element term = multiply(multiply(f.pullback(pre), img), f.pullback(post));
          if ((degree_ * position) % 2 != 0)
            term *= Rational(-1);
          out += multiply(even_pulled, term);
        }
        prefix |= bit;
      }
    }
    return out;
  }
  [[nodiscard]] Element apply(const Element& w) const {
    w.check_compatible(f_->target().zero());
    Element out = f_->source().zero();
    for (const auto& [m, c] : w.terms())
      out += apply(m) * c;
    return out;
  }

  RelativeCochain& operator+=(const RelativeCochain& o) {
    check_same(o);
    for (std::size_t i = 0; i < images_.size(); ++i)
      images_[i] += o.images_[i];
    return *this;
  }
  RelativeCochain& operator-=(const RelativeCochain& o) {
    check_same(o);
    for (std::size_t i = 0; i < images_.size(); ++i)
      images_[i] -= o.images_[i];
    return *this;
  }
  RelativeCochain& operator*=(const Rational& s) {
    for (auto& e : images_)
      e *= s;
    return *this;
  }
  friend RelativeCochain operator+(RelativeCochain a, const RelativeCochain& b) { return a += b; }
  friend RelativeCochain operator-(RelativeCochain a, const RelativeCochain& b) { return a -= b; }

  friend bool operator==(const RelativeCochain& a, const RelativeCochain& b) {
    if (!a.over(*b.f_))
      return false;
    if (a.is_zero() && b.is_zero())
      return true;
    return a.degree_ == b.degree_ && a.images_ == b.images_;
  }

  [[nodiscard]] std::string str() const {
    std::string out = "{";
    bool first = true;
    const GeneratorSet& tg = *f_->target().generators();
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i].is_zero())
        continue;
      out += first ? " " : ", ";
      first = false;
      out += tg.name(tg.from_global(i)) + " -> " + images_[i].str();
    }
    return out + (first ? "}" : " }");
  }

private:
  void check_same(const RelativeCochain& o) const {
    if (!over(*o.f_))
      throw Error("relative cochains over different morphisms");
    if (degree_ != o.degree_ && !is_zero() && !o.is_zero())
      throw Error("cannot add relative cochains of different degrees");
  }

  MorphismPtr f_;
  int degree_ = 0;
  std::vector<Element> images_;
};

/// δZ = d_A∘Z − (−1)^{|Z|} Z∘d_B.
inline RelativeCochain relative_delta(const RelativeCochain& z) {
  const AlgebroidMorphism& f = z.morphism();
  RelativeCochain out(z.morphism_ptr(), z.degree() + 1);
  const GeneratorSet& tg = *f.target().generators();
  for (std::size_t i = 0; i < tg.size(); ++i) {
    const GeneratorRef g = tg.from_global(i);
    Element value = f.source_differential().apply(z.images()[i]);
    const Element back = z.apply(f.target_differential().image(g));
    if (z.degree() % 2 != 0)
      value += back;
    else
      value -= back;
    out.set_image(g, std::move(value));
  }
  return out;
}

/// F★X = X∘F*.
inline RelativeCochain lower_star(const MorphismPtr& fp, const DefCochain& x) {
  const AlgebroidMorphism& f = *fp;
  if (!same_generators(x.generators(), f.source().generators()))
    throw Error("lower_star needs a cochain over the source");
  RelativeCochain out(fp, x.degree());
  const GeneratorSet& tg = *f.target().generators();
  for (std::size_t i = 0; i < tg.size(); ++i)
    out.set_image(tg.from_global(i), x.apply(f.images()[i]));
  return out;
}

/// F⋆Y = F*∘Y.
inline RelativeCochain upper_star(const MorphismPtr& fp, const DefCochain& y) {
  const AlgebroidMorphism& f = *fp;
  if (!same_generators(y.generators(), f.target().generators()))
    throw Error("upper_star needs a cochain over the target");
  RelativeCochain out(fp, y.degree());
  const GeneratorSet& tg = *f.target().generators();
  for (std::size_t i = 0; i < tg.size(); ++i)
    out.set_image(tg.from_global(i), f.pullback(y.images()[i]));
  return out;
}

}  // namespace lax
