#pragma once

#include "lax/lax.hpp"

#include <random>
#include <vector>

namespace lax::fixtures {

/// Random element with small integer coefficients in the given block.
inline Element random_element(const GeneratorSetPtr& gens, int degree, int weight, std::mt19937& rng,
                              int density = 3) {
  Element e(gens);
  const auto basis = basis_enumerate(*gens, degree, weight);
  if (basis.empty())
    return e;
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int i = 0; i < density; ++i)
    e.add_term(basis[pick(rng)], Rational(coef(rng)));
  return e;
}

/// Random derivation of the given degree that shifts weight by `shift`.
inline GradedDerivation random_derivation(const GeneratorSetPtr& gens, int degree, int shift, std::mt19937& rng) {
  GradedDerivation d(gens, degree);
  for (std::size_t i = 0; i < gens->size(); ++i) {
    const GeneratorRef g = gens->from_global(i);
    const int target = GeneratorSet::degree(g) + degree;
    if (target < 0)
      continue;
    d.set_image(g, random_element(gens, target, gens->weight(g) + shift, rng, 2));
  }
  return d;
}

}  // namespace lax::fixtures

namespace lax::fixtures {

/// R^n with coordinates x, y, z (n ≤ 3) of weight 1.
inline std::vector<EvenGenerator> plane(std::size_t n) {
  const char* names[] = {"x", "y", "z"};
  std::vector<EvenGenerator> out;
  for (std::size_t a = 0; a < n; ++a)
    out.push_back({names[a], 1});
  return out;
}

/// span(∂x) on R^n.
inline AlgebroidPresentation horizontal_foliation(std::size_t n, const std::string& name) {
  std::vector<Rational> field(n, Rational(0));
  field[0] = Rational(1);
  return presets::foliation({name, plane(n), {"X"}, {field}});
}

/// The standard presentations the structural checks run over.
inline std::vector<AlgebroidPresentation> standard_presentations() {
  return {presets::abelian(2), presets::aff1(), presets::sl2(), presets::heisenberg(),
          presets::tangent(1, "TR1"), presets::tangent(2, "TR2"), horizontal_foliation(2, "FolR2")};
}

}  // namespace lax::fixtures

namespace lax::fixtures {

/// Random multiderivation whose D_c raises weight by `shift`.
inline Multiderivation random_multiderivation(const AlgebroidPresentation& p, std::size_t arity, int shift,
                                              std::mt19937& rng) {
  Multiderivation c(p, arity);
  const GeneratorSetPtr& g = p.generators();
  auto tuple_weight = [&](const std::vector<std::size_t>& t) {
    int w = 0;
    for (auto i : t)
      w += p.frame_weight(i);
    return w;
  };
  for (const auto& t : lax::detail::increasing_tuples(p.rank(), arity))
    for (std::size_t m = 0; m < p.rank(); ++m)
      c.set_value(t, m, random_element(g, 0, p.frame_weight(m) + shift - tuple_weight(t), rng, 1));
  for (const auto& t : lax::detail::increasing_tuples(p.rank(), arity - 1))
    for (std::size_t a = 0; a < p.base_dimension(); ++a)
      c.set_symbol(t, a, random_element(g, 0, p.base_weight(a) + shift - tuple_weight(t), rng, 1));
  return c;
}

}  // namespace lax::fixtures
