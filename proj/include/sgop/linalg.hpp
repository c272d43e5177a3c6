#ifndef SGOP_LINALG_HPP
#define SGOP_LINALG_HPP

#include "rational.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sgop {

template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  if (a.empty()) return {};
  Matrix<T> t(a[0].size(), std::vector<T>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

template <class T>
bool is_symmetric(const Matrix<T>& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != a.size()) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (a[i][j] != a[j][i]) return false;
  }
  return true;
}

namespace detail {

inline Integer lcm_int(const Integer& a, const Integer& b) { return boost::multiprecision::lcm(a, b); }

// Clears denominators row by row. Returns the integer matrix and the row scale factors.
inline std::pair<Matrix<Integer>, std::vector<Integer>> integerize(const Matrix<Rational>& a) {
  Matrix<Integer> z(a.size());
  std::vector<Integer> scale(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Integer l = 1;
    for (auto& x : a[i]) l = lcm_int(l, denominator_of(x));
    scale[i] = l;
    z[i].reserve(a[i].size());
    for (auto& x : a[i]) z[i].push_back(numerator_of(x) * (l / denominator_of(x)));
  }
  return {std::move(z), std::move(scale)};
}

}  // namespace detail

// Exact determinant by Bareiss fraction-free elimination on the row-scaled integer matrix.
inline Rational determinant(const Matrix<Rational>& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  for (auto& r : a)
    if (r.size() != n) throw std::invalid_argument("determinant needs a square matrix");
  auto [z, scale] = detail::integerize(a);
  int sgn = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (z[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && z[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(z[p], z[k]);
      sgn = -sgn;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) z[i][j] = (z[i][j] * z[k][k] - z[i][k] * z[k][j]) / prev;
      z[i][k] = 0;
    }
    prev = z[k][k];
  }
  Integer s = 1;
  for (auto& x : scale) s *= x;
  return Rational(z[n - 1][n - 1] * sgn, s);
}

// Leading principal minors 1..n, stopping early (with a zero entry) at the first vanishing pivot.
inline std::vector<Rational> leading_minors(const Matrix<Rational>& a) {
  const std::size_t n = a.size();
  auto [z, scale] = detail::integerize(a);
  std::vector<Rational> out;
  Integer prev = 1, sc = 1;
  for (std::size_t k = 0; k < n; ++k) {
    sc *= scale[k];
    out.push_back(Rational(z[k][k], sc));
    if (z[k][k] == 0) break;
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) z[i][j] = (z[i][j] * z[k][k] - z[i][k] * z[k][j]) / prev;
      z[i][k] = 0;
    }
    prev = z[k][k];
  }
  return out;
}

inline bool is_positive_definite(const Matrix<Rational>& a) {
  if (!is_symmetric(a)) return false;
  auto m = leading_minors(a);
  if (m.size() != a.size()) return false;
  for (auto& x : m)
    if (x <= 0) return false;
  return true;
}

// Symmetric and every principal minor nonnegative (3x3 or smaller).
inline bool is_psd3(const Matrix<Rational>& a) {
  if (a.size() > 3 || !is_symmetric(a)) return false;
  const std::size_t n = a.size();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    Matrix<Rational> sub(idx.size(), std::vector<Rational>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) sub[r][c] = a[idx[r]][idx[c]];
    if (determinant(sub) < 0) return false;
  }
  return true;
}

// Gaussian elimination with partial pivoting (largest magnitude for floats, first nonzero for exact types).
// Returns nullopt when the matrix is singular.
template <class T>
std::optional<std::vector<T>> solve(Matrix<T> a, std::vector<T> b) {
  using std::abs;
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    if constexpr (std::is_same_v<T, Rational>) {
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return std::nullopt;
    } else {
      for (std::size_t i = k + 1; i < n; ++i)
        if (abs(a[i][k]) > abs(a[p][k])) p = i;
      if (a[p][k] == 0) return std::nullopt;
    }
    std::swap(a[p], a[k]);
    std::swap(b[p], b[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      T f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = n; i-- > 0;) {
    T s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a) {
  const std::size_t n = a.size();
  Matrix<T> inv(n, std::vector<T>(n));
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<T> e(n, T(0));
    e[c] = T(1);
    auto x = solve(a, e);
    if (!x) return std::nullopt;
    for (std::size_t r = 0; r < n; ++r) inv[r][c] = (*x)[r];
  }
  return inv;
}

// LU determinant with partial pivoting for floating types.
template <class T>
T determinant_lu(Matrix<T> a) {
  using std::abs;
  const std::size_t n = a.size();
  T det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs(a[i][k]) > abs(a[p][k])) p = i;
    if (a[p][k] == 0) return T(0);
    if (p != k) {
      std::swap(a[p], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      T f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return det;
}

}  // namespace sgop

#endif
