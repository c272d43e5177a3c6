#ifndef SGOP_GRAM_HPP
#define SGOP_GRAM_HPP

#include "linalg.hpp"
#include "poly.hpp"

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace sgop {

// <f,g> = sum_l chi_l <D^l f, D^l g>_2 + sum_l chi'_l E(D^l f, D^l g) + sum_l [D^l f(q)] M_l [D^l g(q)]^T.
// The energy and boundary lists may have any length; entry l acts on D^l.
struct SobolevParams {
  std::vector<Rational> chi{Rational(1)};
  std::vector<Rational> energy_weights;
  std::vector<Matrix<Rational>> boundary_matrices;

  int order() const { return static_cast<int>(chi.size()) - 1; }
  bool has_extended_terms() const { return !energy_weights.empty() || !boundary_matrices.empty(); }

  static SobolevParams l2() { return {}; }
  static SobolevParams sobolev1(const Rational& c) { return sobolev({Rational(1), c}); }
  static SobolevParams sobolev(std::vector<Rational> weights) {
    SobolevParams p;
    p.chi = std::move(weights);
    p.validate();
    return p;
  }

  void validate() const {
    if (chi.empty() || chi[0] != 1) throw std::invalid_argument("chi[0] must be 1");
    for (auto& c : chi)
      if (c < 0) throw std::invalid_argument("Sobolev weights must be nonnegative");
    for (auto& c : energy_weights)
      if (c < 0) throw std::invalid_argument("energy weights must be nonnegative");
    for (auto& m : boundary_matrices) {
      if (m.size() != 3 || m[0].size() != 3 || m[1].size() != 3 || m[2].size() != 3)
        throw std::invalid_argument("boundary matrices must be 3x3");
      if (!is_psd3(m)) throw std::invalid_argument("boundary matrix is not positive semi-definite");
    }
  }

  std::string key() const {
    std::ostringstream os;
    for (auto& c : chi) os << to_string(c) << ',';
    os << ';';
    for (auto& c : energy_weights) os << to_string(c) << ',';
    os << ';';
    for (auto& m : boundary_matrices)
      for (auto& r : m)
        for (auto& x : r) os << to_string(x) << ',';
    return os.str();
  }
};

// Boundary form sum_v [P_{j,a} dn P_{k,b} - P_{k,b} dn P_{j,a}](q_v).
inline Rational boundary_form(int j, int a, int k, int b) {
  auto& t = coeffs();
  Rational s = 0;
  for (int v = 0; v < 3; ++v) {
    Corner c = corner_of(v);
    s += t.value(j, a, c) * t.normal(k, b, c) - t.value(k, b, c) * t.normal(j, a, c);
  }
  return s;
}

namespace detail {
inline std::map<std::tuple<int, int, int, int>, Rational>& l2_cache() {
  static std::map<std::tuple<int, int, int, int>, Rational> cache;
  return cache;
}
}  // namespace detail

// <P_{j,a}, P_{k,b}>_2 for monomials with the same base point. Gauss-Green applied to
// Delta P_{m+1} = P_m telescopes the product into boundary forms:
// <P_{j,a}, P_{k,b}> = sum_{l=0}^{j} B(j-l, a; k+l+1, b).
inline Rational l2_mono(int j, int a, int k, int b) {
  if (j < 0 || k < 0) return 0;
  if ((a == 3) != (b == 3)) return 0;
  if (std::tie(j, a) > std::tie(k, b)) {
    std::swap(j, k);
    std::swap(a, b);
  }
  auto key = std::make_tuple(j, a, k, b);
  auto& cache = detail::l2_cache();
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  Rational s = 0;
  for (int l = 0; l <= j; ++l) s += boundary_form(j - l, a, k + l + 1, b);
  cache.emplace(key, s);
  return s;
}

// S^m product of monomials. For two k=3 monomials based at different vertices the value is
// -1/2 times the same-base value; other cross-base pairs are unsupported.
inline Rational mono_inner(const SobolevParams& params, Mono x, Mono y, int base_x = 0, int base_y = 0) {
  if (base_x != base_y && !(x.k == 3 && y.k == 3))
    throw std::invalid_argument("cross-base inner products are only available for the k=3 family");
  Rational s = 0;
  for (int r = 0; r <= params.order(); ++r) {
    if (params.chi[r] == 0) continue;
    s += params.chi[r] * l2_mono(x.j - r, x.k, y.j - r, y.k);
  }
  if (base_x != base_y) s *= Rational(-1, 2);
  return s;
}

inline Rational poly_inner(const SobolevParams& params, const Poly& f, const Poly& g) {
  Rational s = 0;
  for (auto& [a, ca] : f.terms())
    for (auto& [b, cb] : g.terms()) s += ca * cb * mono_inner(params, a, b, f.base_point(), g.base_point());
  return s;
}

inline Rational l2_inner(const Poly& f, const Poly& g) { return poly_inner(SobolevParams::l2(), f, g); }
inline Rational l2_norm_sq(const Poly& f) { return l2_inner(f, f); }

// E(f,g) = -<Delta f, g>_2 + sum_l g(q_l) dn f(q_l).
inline Rational energy_inner(const Poly& f, const Poly& g) {
  if (!f.is_zero() && !g.is_zero() && f.base_point() != g.base_point())
    throw std::invalid_argument("energy needs a common base point");
  Rational s = -l2_inner(laplacian(f), g);
  for (int v = 0; v < 3; ++v) s += boundary_value(g, corner_of(v)) * normal_derivative(f, corner_of(v));
  return s;
}

// S^m product plus energy and boundary point-mass terms. Base point q0 only.
inline Rational extended_inner(const SobolevParams& params, const Poly& f, const Poly& g) {
  params.validate();
  if (f.base_point() != 0 || g.base_point() != 0)
    throw std::invalid_argument("extended inner product is defined for base point q0 only");
  Rational s = poly_inner(params, f, g);
  for (std::size_t l = 0; l < params.energy_weights.size(); ++l) {
    if (params.energy_weights[l] == 0) continue;
    int li = static_cast<int>(l);
    s += params.energy_weights[l] * energy_inner(laplacian_pow(f, li), laplacian_pow(g, li));
  }
  for (std::size_t l = 0; l < params.boundary_matrices.size(); ++l) {
    int li = static_cast<int>(l);
    Poly df = laplacian_pow(f, li), dg = laplacian_pow(g, li);
    const auto& m = params.boundary_matrices[l];
    for (int r = 0; r < 3; ++r) {
      Rational fr = boundary_value(df, corner_of(r));
      if (fr == 0) continue;
      for (int c = 0; c < 3; ++c) s += fr * m[r][c] * boundary_value(dg, corner_of(c));
    }
  }
  return s;
}

// The product actually used for orthogonality: extended when extra terms are present.
inline Rational inner(const SobolevParams& params, const Poly& f, const Poly& g) {
  if (params.has_extended_terms()) return extended_inner(params, f, g);
  return poly_inner(params, f, g);
}

// Mixed ordering: j ascending, then k ascending.
inline std::vector<Mono> basis(int family, int maxdeg) {
  std::vector<Mono> b;
  for (int j = 0; j <= maxdeg; ++j) {
    if (family == 0)
      for (int k = 1; k <= 3; ++k) b.push_back({j, k});
    else
      b.push_back({j, family});
  }
  return b;
}

struct GramMatrix {
  SobolevParams params;
  int family = 0;  // 0 means mixed
  std::vector<Mono> basis;
  Matrix<Rational> entries;
};

// family is 1, 2, 3 or 0 for the mixed basis.
inline const GramMatrix& gram_matrix(const SobolevParams& params, int family, int maxdeg) {
  if (maxdeg < 0) throw std::invalid_argument("maxdeg must be nonnegative");
  if (family < 0 || family > 3) throw std::invalid_argument("family must be 0 (mixed), 1, 2 or 3");
  params.validate();
  static std::map<std::string, GramMatrix> cache;
  std::string key = params.key() + "|" + std::to_string(family) + "|" + std::to_string(maxdeg);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  GramMatrix g{params, family, basis(family, maxdeg), {}};
  const std::size_t n = g.basis.size();
  g.entries.assign(n, std::vector<Rational>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      Poly a = Poly::monomial(g.basis[r].j, g.basis[r].k);
      Poly b = Poly::monomial(g.basis[c].j, g.basis[c].k);
      g.entries[r][c] = g.entries[c][r] = inner(params, a, b);
    }
  return cache.emplace(key, std::move(g)).first->second;
}

}  // namespace sgop

#endif
