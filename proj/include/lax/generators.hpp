#pragma once

#include "lax/rational.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace lax {

/// Where an odd (degree 1) generator comes from. Only used for bookkeeping and
/// printing; the algebra treats all odd generators alike.
enum class OddOrigin { fiber_dual, vertical_form, leafwise_form };

struct EvenGenerator {
  std::string name;
  int weight = 1;
  friend bool operator==(const EvenGenerator&, const EvenGenerator&) = default;
};

struct OddGenerator {
  std::string name;
  int weight = 0;
  OddOrigin origin = OddOrigin::fiber_dual;
  friend bool operator==(const OddGenerator&, const OddGenerator&) = default;
};

inline constexpr std::size_t kMaxOddGenerators = 64;

/// Monomial x^e ξ_S of a weighted graded-commutative algebra. The odd part is
/// a bitmask over odd generator indices; its cochain degree is the popcount.
struct Monomial {
  std::vector<int> exponents;
  std::uint64_t odd = 0;

  [[nodiscard]] int degree() const { return std::popcount(odd); }
  [[nodiscard]] int polynomial_degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0);
  }
  [[nodiscard]] bool has_odd(std::size_t i) const { return (odd >> i) & 1U; }

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded lexicographic order: cochain degree, then polynomial degree, then
/// larger exponents of earlier even generators first, then odd subsets
/// compared as increasing index lists.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int da = a.degree(), db = b.degree();
    if (da != db)
      return da < db;
    const int pa = a.polynomial_degree(), pb = b.polynomial_degree();
    if (pa != pb)
      return pa < pb;
    const std::size_t n = std::min(a.exponents.size(), b.exponents.size());
    for (std::size_t i = 0; i < n; ++i)
      if (a.exponents[i] != b.exponents[i])
        return a.exponents[i] > b.exponents[i];
    if (a.exponents.size() != b.exponents.size())
      return a.exponents.size() < b.exponents.size();
    if (a.odd == b.odd)
      return false;
    const std::uint64_t diff = a.odd ^ b.odd;
    const std::uint64_t low = diff & (~diff + 1);
    return (a.odd & low) != 0;
  }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const {
    std::size_t h = std::hash<std::uint64_t>{}(m.odd);
    for (int e : m.exponents)
      h = h * 1000003U ^ std::hash<int>{}(e);
    return h;
  }
};

/// Reference to one generator: even generators occupy global indices
/// [0, even_count), odd ones follow.
struct GeneratorRef {
  bool odd = false;
  std::size_t index = 0;
  friend bool operator==(const GeneratorRef&, const GeneratorRef&) = default;
};

/// Generators of a weighted graded-commutative algebra: even generators of
/// positive weight and at most 64 odd generators of degree 1.
class GeneratorSet {
public:
  GeneratorSet() = default;
  GeneratorSet(std::vector<EvenGenerator> evens, std::vector<OddGenerator> odds)
      : evens_(std::move(evens)), odds_(std::move(odds)) {
    if (odds_.size() > kMaxOddGenerators)
      throw Error("too many odd generators (limit 64)");
    for (std::size_t i = 0; i < evens_.size(); ++i) {
      if (evens_[i].weight < 1)
        throw Error("even generator '" + evens_[i].name + "' must have weight >= 1");
      add_name(evens_[i].name, GeneratorRef{false, i});
    }
    for (std::size_t i = 0; i < odds_.size(); ++i)
      add_name(odds_[i].name, GeneratorRef{true, i});
  }

  [[nodiscard]] const std::vector<EvenGenerator>& evens() const { return evens_; }
  [[nodiscard]] const std::vector<OddGenerator>& odds() const { return odds_; }
  [[nodiscard]] std::size_t even_count() const { return evens_.size(); }
  [[nodiscard]] std::size_t odd_count() const { return odds_.size(); }
  [[nodiscard]] std::size_t size() const { return evens_.size() + odds_.size(); }

  [[nodiscard]] std::optional<GeneratorRef> find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end())
      return std::nullopt;
    return it->second;
  }
  [[nodiscard]] GeneratorRef at(const std::string& name) const {
    auto r = find(name);
    if (!r)
      throw Error("unknown generator '" + name + "'");
    return *r;
  }

  [[nodiscard]] std::size_t global_index(GeneratorRef g) const {
    return g.odd ? evens_.size() + g.index : g.index;
  }
  [[nodiscard]] GeneratorRef from_global(std::size_t i) const {
    return i < evens_.size() ? GeneratorRef{false, i} : GeneratorRef{true, i - evens_.size()};
  }
  [[nodiscard]] const std::string& name(GeneratorRef g) const {
    return g.odd ? odds_[g.index].name : evens_[g.index].name;
  }
  [[nodiscard]] int weight(GeneratorRef g) const {
    return g.odd ? odds_[g.index].weight : evens_[g.index].weight;
  }
  [[nodiscard]] static int degree(GeneratorRef g) { return g.odd ? 1 : 0; }

  [[nodiscard]] int weight(const Monomial& m) const {
    int w = 0;
    for (std::size_t i = 0; i < evens_.size(); ++i)
      w += m.exponents[i] * evens_[i].weight;
    for (std::size_t i = 0; i < odds_.size(); ++i)
      if (m.has_odd(i))
        w += odds_[i].weight;
    return w;
  }

  [[nodiscard]] Monomial unit() const { return Monomial{std::vector<int>(evens_.size(), 0), 0}; }
  [[nodiscard]] Monomial monomial_of(GeneratorRef g) const {
    Monomial m = unit();
    if (g.odd)
      m.odd = std::uint64_t{1} << g.index;
    else
      m.exponents[g.index] = 1;
    return m;
  }

  /// Smallest weight any monomial of the given cochain degree can have.
  [[nodiscard]] std::optional<int> min_weight(int degree) const {
    if (degree < 0 || static_cast<std::size_t>(degree) > odds_.size())
      return std::nullopt;
    std::vector<int> w;
    for (const auto& o : odds_)
      w.push_back(o.weight);
    std::sort(w.begin(), w.end());
    return std::accumulate(w.begin(), w.begin() + degree, 0);
  }

  friend bool operator==(const GeneratorSet& a, const GeneratorSet& b) {
    return a.evens_ == b.evens_ && a.odds_ == b.odds_;
  }

private:
  void add_name(const std::string& name, GeneratorRef ref) {
    if (name.empty())
      throw Error("generator with empty name");
    if (!by_name_.emplace(name, ref).second)
      throw Error("duplicate generator name '" + name + "'");
  }

  std::vector<EvenGenerator> evens_;
  std::vector<OddGenerator> odds_;
  std::unordered_map<std::string, GeneratorRef> by_name_;
};

using GeneratorSetPtr = std::shared_ptr<const GeneratorSet>;

inline GeneratorSetPtr make_generators(std::vector<EvenGenerator> evens,
                                       std::vector<OddGenerator> odds) {
  return std::make_shared<const GeneratorSet>(std::move(evens), std::move(odds));
}

inline bool same_generators(const GeneratorSetPtr& a, const GeneratorSetPtr& b) {
  return a == b || (a && b && *a == *b);
}

namespace detail {

inline void even_exponents_of_weight(const GeneratorSet& gens, std::size_t pos, int remaining,
                                     std::vector<int>& current,
                                     std::vector<std::vector<int>>& out) {
  if (pos == gens.even_count()) {
    if (remaining == 0)
      out.push_back(current);
    return;
  }
  const int w = gens.evens()[pos].weight;
  for (int e = 0; e * w <= remaining; ++e) {
    current[pos] = e;
    even_exponents_of_weight(gens, pos + 1, remaining - e * w, current, out);
  }
  current[pos] = 0;
}

inline void odd_subsets(std::size_t n, int k, std::size_t start, std::uint64_t mask,
                        std::vector<std::uint64_t>& out) {
  if (k == 0) {
    out.push_back(mask);
    return;
  }
  for (std::size_t i = start; i + static_cast<std::size_t>(k) <= n; ++i)
    odd_subsets(n, k - 1, i + 1, mask | (std::uint64_t{1} << i), out);
}

}  // namespace detail

/// Every monomial of exactly the given cochain degree and weight, sorted by
/// MonomialLess.
inline std::vector<Monomial> basis_enumerate(const GeneratorSet& gens, int degree, int weight) {
  std::vector<Monomial> result;
  if (degree < 0 || static_cast<std::size_t>(degree) > gens.odd_count())
    return result;
  std::vector<std::uint64_t> subsets;
  detail::odd_subsets(gens.odd_count(), degree, 0, 0, subsets);
  std::vector<int> current(gens.even_count(), 0);
  for (std::uint64_t mask : subsets) {
    int odd_weight = 0;
    for (std::size_t i = 0; i < gens.odd_count(); ++i)
      if ((mask >> i) & 1U)
        odd_weight += gens.odds()[i].weight;
    const int remaining = weight - odd_weight;
    if (remaining < 0)
      continue;
    std::vector<std::vector<int>> exps;
    detail::even_exponents_of_weight(gens, 0, remaining, current, exps);
    for (auto& e : exps)
      result.push_back(Monomial{std::move(e), mask});
  }
  std::sort(result.begin(), result.end(), MonomialLess{});
  return result;
}

/// Position lookup for a basis returned by basis_enumerate.
class MonomialIndex {
public:
  MonomialIndex() = default;
  explicit MonomialIndex(const std::vector<Monomial>& basis) {
    for (std::size_t i = 0; i < basis.size(); ++i)
      index_.emplace(basis[i], i);
  }
  [[nodiscard]] std::optional<std::size_t> find(const Monomial& m) const {
    auto it = index_.find(m);
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }
  [[nodiscard]] std::size_t size() const { return index_.size(); }

private:
  std::unordered_map<Monomial, std::size_t, MonomialHash> index_;
};

}  // namespace lax
