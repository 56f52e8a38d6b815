#pragma once

// Dense Chevalley–Eilenberg cohomology H^n(g; g) with adjoint coefficients,
// from structure constants alone. Shares no code with the library beyond GMP.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <tuple>
#include <vector>

namespace lax::oracle {

/// Rank by plain Gaussian elimination over mpq.
inline std::size_t dense_rank(std::vector<std::vector<mpq_class>> m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0)
      ++p;
    if (p == m.size())
      continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0)
        continue;
      const mpq_class f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j)
        m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

using Constants = std::map<std::tuple<int, int, int>, mpq_class>;  // (i, j, k) -> c^k_ij, i < j

class LieAlgebraCE {
public:
  LieAlgebraCE(int dim, const Constants& constants) : n_(dim), c_(dim * dim * dim, 0) {
    for (const auto& [ijk, v] : constants) {
      auto [i, j, k] = ijk;
      at(i, j, k) = v;
      at(j, i, k) = -v;
    }
  }

  /// Dimension of H^p(g; g).
  [[nodiscard]] std::size_t betti(int p) const {
    if (p < 0)
      return 0;
    const auto out = matrix(p), in = matrix(p - 1);
    const std::size_t dim = subsets(p).size() * static_cast<std::size_t>(n_);
    return dim - dense_rank(out) - dense_rank(in);
  }

  /// Dimension of the cochain space Hom(Λ^p g, g).
  [[nodiscard]] std::size_t cochain_dimension(int p) const { return subsets(p).size() * static_cast<std::size_t>(n_); }

private:
  using Matrix = std::vector<std::vector<mpq_class>>;

  mpq_class& at(int i, int j, int k) { return c_[(i * n_ + j) * n_ + k]; }
  [[nodiscard]] const mpq_class& at(int i, int j, int k) const { return c_[(i * n_ + j) * n_ + k]; }

  [[nodiscard]] std::vector<std::vector<int>> subsets(int p) const {
    std::vector<std::vector<int>> out;
    if (p < 0 || p > n_)
      return out;
    for (unsigned mask = 0; mask < (1U << n_); ++mask) {
      if (__builtin_popcount(mask) != p)
        continue;
      std::vector<int> s;
      for (int i = 0; i < n_; ++i)
        if (mask & (1U << i))
          s.push_back(i);
      out.push_back(s);
    }
    return out;
  }

  /// Value of the cochain `c` (p-subset index -> vector) on an ordered tuple.
  static std::vector<mpq_class> evaluate(const std::vector<std::vector<int>>& domain,
                                         const std::vector<std::vector<mpq_class>>& values, std::vector<int> args,
                                         int dim) {
    std::vector<mpq_class> zero(dim, 0);
    int sign = 1;
    for (std::size_t i = 0; i < args.size(); ++i)
      for (std::size_t j = 0; j + 1 < args.size() - i; ++j)
        if (args[j] > args[j + 1]) {
          std::swap(args[j], args[j + 1]);
          sign = -sign;
        } else if (args[j] == args[j + 1]) {
          return zero;
        }
    for (std::size_t j = 0; j + 1 < args.size(); ++j)
      if (args[j] == args[j + 1])
        return zero;
    for (std::size_t s = 0; s < domain.size(); ++s)
      if (domain[s] == args) {
        auto v = values[s];
        if (sign < 0)
          for (auto& x : v)
            x = -x;
        return v;
      }
    return zero;
  }

  /// Matrix of δ: C^p -> C^{p+1}; columns indexed by (subset, output).
  [[nodiscard]] Matrix matrix(int p) const {
    const auto src = subsets(p), dst = subsets(p + 1);
    const std::size_t cols = src.size() * n_, rows = dst.size() * n_;
    Matrix m(rows, std::vector<mpq_class>(cols, 0));
    if (p < 0 || src.empty() || dst.empty())
      return m;
    for (std::size_t s = 0; s < src.size(); ++s)
      for (int out = 0; out < n_; ++out) {
        std::vector<std::vector<mpq_class>> values(src.size(), std::vector<mpq_class>(n_, 0));
        values[s][out] = 1;
        const std::size_t col = s * n_ + out;
        for (std::size_t t = 0; t < dst.size(); ++t) {
          const auto& x = dst[t];
          std::vector<mpq_class> result(n_, 0);
          for (std::size_t i = 0; i < x.size(); ++i) {
            std::vector<int> rest;
            for (std::size_t r = 0; r < x.size(); ++r)
              if (r != i)
                rest.push_back(x[r]);
            const auto v = evaluate(src, values, rest, n_);
            const int sign = i % 2 == 0 ? 1 : -1;
            for (int a = 0; a < n_; ++a)
              for (int k = 0; k < n_; ++k)
                result[k] += sign * v[a] * at(x[i], a, k);
          }
          for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = i + 1; j < x.size(); ++j) {
              const int sign = (i + j) % 2 == 0 ? 1 : -1;
              for (int b = 0; b < n_; ++b) {
                const mpq_class coef = at(x[i], x[j], b);
                if (coef == 0)
                  continue;
                std::vector<int> args{b};
                for (std::size_t r = 0; r < x.size(); ++r)
                  if (r != i && r != j)
                    args.push_back(x[r]);
                const auto v = evaluate(src, values, args, n_);
                for (int k = 0; k < n_; ++k)
                  result[k] += sign * coef * v[k];
              }
            }
          for (int k = 0; k < n_; ++k)
            m[t * n_ + k][col] = result[k];
        }
      }
    return m;
  }

  int n_;
  std::vector<mpq_class> c_;
};

}  // namespace lax::oracle
