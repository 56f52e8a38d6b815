#pragma once

#include "lax/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lax {

using RationalVector = std::vector<Rational>;

/// Sparse matrix over the rationals. Zero entries are never stored.
class SparseRationalMatrix {
public:
  using Key = std::pair<std::size_t, std::size_t>;

  SparseRationalMatrix() = default;
  SparseRationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::size_t nonzeros() const { return entries_.size(); }
  [[nodiscard]] bool is_zero() const { return entries_.empty(); }
  [[nodiscard]] const std::map<Key, Rational>& entries() const { return entries_; }

  [[nodiscard]] Rational get(std::size_t r, std::size_t c) const {
    auto it = entries_.find({r, c});
    return it == entries_.end() ? Rational(0) : it->second;
  }
  void set(std::size_t r, std::size_t c, const Rational& v) {
    check(r, c);
    if (v.is_zero())
      entries_.erase({r, c});
    else
      entries_[{r, c}] = v;
  }
  void add(std::size_t r, std::size_t c, const Rational& v) {
    check(r, c);
    if (v.is_zero())
      return;
    auto [it, inserted] = entries_.try_emplace({r, c}, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero())
        entries_.erase(it);
    }
  }

  [[nodiscard]] RationalVector column(std::size_t c) const {
    RationalVector v(rows_);
    for (const auto& [k, x] : entries_)
      if (k.second == c)
        v[k.first] = x;
    return v;
  }

  [[nodiscard]] std::vector<RationalVector> dense() const {
    std::vector<RationalVector> d(rows_, RationalVector(cols_));
    for (const auto& [k, x] : entries_)
      d[k.first][k.second] = x;
    return d;
  }

  [[nodiscard]] RationalVector apply(const RationalVector& v) const {
    RationalVector out(rows_);
    for (const auto& [k, x] : entries_)
      if (!v[k.second].is_zero())
        out[k.first] += x * v[k.second];
    return out;
  }

  friend SparseRationalMatrix operator*(const SparseRationalMatrix& a, const SparseRationalMatrix& b) {
    if (a.cols_ != b.rows_)
      throw Error("matrix product dimension mismatch");
    std::map<std::size_t, std::vector<std::pair<std::size_t, Rational>>> b_rows;
    for (const auto& [k, x] : b.entries_)
      b_rows[k.first].emplace_back(k.second, x);
    SparseRationalMatrix out(a.rows_, b.cols_);
    for (const auto& [k, x] : a.entries_) {
      auto it = b_rows.find(k.second);
      if (it == b_rows.end())
        continue;
      for (const auto& [c, y] : it->second)
        out.add(k.first, c, x * y);
    }
    return out;
  }

  friend SparseRationalMatrix operator-(const SparseRationalMatrix& a, const SparseRationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw Error("matrix difference dimension mismatch");
    SparseRationalMatrix out = a;
    for (const auto& [k, x] : b.entries_)
      out.add(k.first, k.second, -x);
    return out;
  }

  friend bool operator==(const SparseRationalMatrix& a, const SparseRationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  [[nodiscard]] std::string str() const {
    std::string out;
    for (std::size_t r = 0; r < rows_; ++r) {
      out += "[";
      for (std::size_t c = 0; c < cols_; ++c)
        out += (c ? " " : "") + get(r, c).str();
      out += "]\n";
    }
    return out;
  }

private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_)
      throw Error("matrix index out of range");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::map<Key, Rational> entries_;
};

inline SparseRationalMatrix from_columns(std::size_t rows, const std::vector<RationalVector>& cols) {
  SparseRationalMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows; ++r)
      m.set(r, c, cols[c][r]);
  return m;
}

/// Rank by fraction-free (Bareiss) elimination. Each row is first scaled to
/// integers; every intermediate division is exact.
inline std::size_t rank(const SparseRationalMatrix& a) {
  if (a.is_zero())
    return 0;
  const std::size_t n = a.rows(), m = a.cols();
  std::vector<std::vector<mpz_class>> rows(n, std::vector<mpz_class>(m, 0));
  std::vector<mpz_class> lcm(n, 1);
  for (const auto& [k, x] : a.entries())
    mpz_lcm(lcm[k.first].get_mpz_t(), lcm[k.first].get_mpz_t(), x.denominator().get_mpz_t());
  for (const auto& [k, x] : a.entries())
    rows[k.first][k.second] = x.numerator() * (lcm[k.first] / x.denominator());

  mpz_class previous = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m && r < n; ++c) {
    std::size_t pivot = r;
    while (pivot < n && rows[pivot][c] == 0)
      ++pivot;
    if (pivot == n)
      continue;
    std::swap(rows[pivot], rows[r]);
    const mpz_class& p = rows[r][c];
    for (std::size_t i = r + 1; i < n; ++i) {
      const mpz_class factor = rows[i][c];
      for (std::size_t j = c + 1; j < m; ++j) {
        mpz_class v = p * rows[i][j] - factor * rows[r][j];
        mpz_divexact(rows[i][j].get_mpz_t(), v.get_mpz_t(), previous.get_mpz_t());
      }
      rows[i][c] = 0;
    }
    previous = p;
    ++r;
  }
  return r;
}

/// Reduced row echelon form over the rationals; returns pivot columns.
inline std::vector<std::size_t> rref(std::vector<RationalVector>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty())
    return pivots;
  const std::size_t n = rows.size(), m = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < m && r < n; ++c) {
    std::size_t pivot = r;
    while (pivot < n && rows[pivot][c].is_zero())
      ++pivot;
    if (pivot == n)
      continue;
    std::swap(rows[pivot], rows[r]);
    const Rational inv = Rational(1) / rows[r][c];
    for (std::size_t j = c; j < m; ++j)
      rows[r][j] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || rows[i][c].is_zero())
        continue;
      const Rational f = rows[i][c];
      for (std::size_t j = c; j < m; ++j)
        if (!rows[r][j].is_zero())
          rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Basis of the null space {v : A v = 0}, one vector per free column.
inline std::vector<RationalVector> kernel_basis(const SparseRationalMatrix& a) {
  std::vector<RationalVector> rows = a.dense();
  const std::vector<std::size_t> pivots = rref(rows);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots)
    is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free])
      continue;
    RationalVector v(a.cols());
    v[free] = Rational(1);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      v[pivots[i]] = -rows[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some x with A x = b, or nullopt when b is outside the column space.
inline std::optional<RationalVector> solve(const SparseRationalMatrix& a, const RationalVector& b) {
  std::vector<RationalVector> rows = a.dense();
  for (std::size_t i = 0; i < rows.size(); ++i)
    rows[i].push_back(b[i]);
  if (rows.empty())
    return RationalVector(a.cols());
  const std::vector<std::size_t> pivots = rref(rows);
  RationalVector x(a.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == a.cols())
      return std::nullopt;
    x[pivots[i]] = rows[i][a.cols()];
  }
  return x;
}

}  // namespace lax
