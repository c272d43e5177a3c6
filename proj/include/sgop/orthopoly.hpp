#ifndef SGOP_ORTHOPOLY_HPP
#define SGOP_ORTHOPOLY_HPP

#include "gram.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgop {

// A stated hypothesis (for example a nonvanishing normal derivative) failed.
struct AssumptionViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two constructions that must agree did not.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

struct OPFamily {
  int family = 1;
  SobolevParams params;
  int first_degree = 0;      // degree of polys[0]
  std::vector<Poly> polys;   // monic, polys[i] has degree first_degree + i
  std::vector<Rational> norms_sq;
  std::map<std::string, std::map<int, Rational>> recurrence;
  std::string method = "gram-schmidt";
  bool verified = true;

  const Poly& at(int n) const { return polys.at(static_cast<std::size_t>(n - first_degree)); }
  const Rational& norm_sq(int n) const { return norms_sq.at(static_cast<std::size_t>(n - first_degree)); }
  int max_degree() const { return first_degree + static_cast<int>(polys.size()) - 1; }
};

inline void check_family(int k) {
  if (k < 1 || k > 3) throw std::invalid_argument("family must be 1, 2 or 3");
}

inline OPFamily gram_schmidt(const SobolevParams& params, int k, int N) {
  check_family(k);
  if (N < 0) throw std::invalid_argument("maximum degree must be nonnegative");
  params.validate();
  OPFamily fam;
  fam.family = k;
  fam.params = params;
  for (int n = 0; n <= N; ++n) {
    Poly mono = Poly::monomial(n, k);
    Poly s = mono;
    for (int l = 0; l < n; ++l) s.axpy(-inner(params, mono, fam.polys[l]) / fam.norms_sq[l], fam.polys[l]);
    Rational nn = inner(params, s, s);
    if (nn <= 0) throw ConsistencyError("Gram-Schmidt produced a nonpositive norm");
    fam.polys.push_back(std::move(s));
    fam.norms_sq.push_back(std::move(nn));
  }
  return fam;
}

// Legendre family of the L2 product, memoized per family.
inline OPFamily legendre(int k, int N) {
  check_family(k);
  static std::map<int, OPFamily> cache;
  auto it = cache.find(k);
  if (it == cache.end() || it->second.max_degree() < N) {
    cache[k] = gram_schmidt(SobolevParams::l2(), k, std::max(N, 10));
    it = cache.find(k);
  }
  OPFamily out = it->second;
  out.polys.resize(static_cast<std::size_t>(N + 1));
  out.norms_sq.resize(static_cast<std::size_t>(N + 1));
  return out;
}

// Green image written out through the zeta coefficients:
// sum_l w_l P_{l+1,k} + zeta P_{0,k'}, with zeta = 2 sum w_l alpha_{l+1} (k=1, on P_{0,2}),
// 2 sum w_l beta_{l+1} (k=2, on P_{0,2}) and -2 sum w_l gamma_{l+1} (k=3, on P_{0,3}).
inline Poly f_from_zeta(const Poly& p, int k) {
  Poly f(p.base_point());
  Rational zeta = 0;
  auto& t = coeffs();
  for (auto& [m, w] : p.terms()) {
    if (m.k != k) throw std::invalid_argument("zeta expansion needs a single-family polynomial");
    f.add_term(m.j + 1, k, w);
    if (k == 1) zeta += w * t.alpha(m.j + 1);
    else if (k == 2) zeta += w * t.beta(m.j + 1);
    else zeta += w * t.gamma(m.j + 1);
  }
  if (k == 3)
    f.add_term(0, 3, -2 * zeta);
  else
    f.add_term(0, 2, 2 * zeta);
  return f;
}

// f_t = G p_{t-1} for t = 1..N; entry 0 is the zero polynomial. Both constructions are compared.
inline std::vector<Poly> f_seq(int k, int N) {
  OPFamily leg = legendre(k, std::max(N - 1, 0));
  std::vector<Poly> f(1);
  for (int t = 1; t <= N; ++t) {
    Poly g = green_apply(leg.at(t - 1));
    if (!(g == f_from_zeta(leg.at(t - 1), k)))
      throw ConsistencyError("Green image and zeta expansion disagree at t=" + std::to_string(t));
    f.push_back(std::move(g));
  }
  return f;
}

// Three-term recurrence s_{n+1} + a_n s_n + bt_n s_{n-1} = f_{n+1} for k = 2, 3.
inline OPFamily recurrence_k23(const Rational& chi, int k, int N) {
  if (k != 2 && k != 3) throw std::invalid_argument("three-term recurrence needs family 2 or 3");
  if (chi < 0) throw std::invalid_argument("chi must be nonnegative");
  SobolevParams S = SobolevParams::sobolev1(chi);
  OPFamily fam = gram_schmidt(S, k, std::min(N, 1));
  fam.method = "three-term recurrence";
  auto f = f_seq(k, std::max(N, 1));
  fam.recurrence["a"][0] = poly_inner(S, f[1], fam.polys[0]) / fam.norms_sq[0];
  for (int n = 1; n + 1 <= N; ++n) {
    Rational a = poly_inner(S, f[n + 1], fam.polys[n]) / fam.norms_sq[n];
    Rational bt = poly_inner(S, f[n + 1], fam.polys[n - 1]) / fam.norms_sq[n - 1];
    Poly s = f[n + 1];
    s.axpy(-a, fam.polys[n]).axpy(-bt, fam.polys[n - 1]);
    fam.recurrence["a"][n] = a;
    fam.recurrence["b_tilde"][n] = bt;
    fam.norms_sq.push_back(poly_inner(S, s, s));
    fam.polys.push_back(std::move(s));
  }
  return fam;
}

struct LegendreRecurrence {
  Rational b;
  Rational c;
};

// f_{n+1} = p_{n+1} + b_n p_n + c_n p_{n-1}, coefficients by L2 projection; the residual must vanish.
inline LegendreRecurrence legendre_recurrence_coeffs(int k, int n) {
  if (k != 2 && k != 3) throw std::invalid_argument("Legendre recurrence needs family 2 or 3");
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  OPFamily leg = legendre(k, n + 1);
  Poly f = green_apply(leg.at(n));
  LegendreRecurrence r;
  r.b = l2_inner(f, leg.at(n)) / leg.norm_sq(n);
  r.c = n >= 1 ? l2_inner(f, leg.at(n - 1)) / leg.norm_sq(n - 1) : Rational(0);
  Poly res = f - leg.at(n + 1);
  res.axpy(-r.b, leg.at(n));
  if (n >= 1) res.axpy(-r.c, leg.at(n - 1));
  if (!res.is_zero()) throw ConsistencyError("Legendre three-term residual is nonzero at n=" + std::to_string(n));
  return r;
}

// dn f_t(q0) for k=1 through 2<p_{t-1}, P_{0,2}>_2 (valid for t >= 2).
inline Rational k1_normal_q0(int t) {
  if (t < 2) throw std::invalid_argument("the inner-product form of dn f_t(q0) needs t >= 2");
  OPFamily leg = legendre(1, t - 1);
  return 2 * l2_inner(leg.at(t - 1), Poly::monomial(0, 2));
}

// Four-term recurrence s_{n+3} + a_n s_{n+2} + b_n s_{n+1} + c_n s_n = f_{n+3} + d_n f_{n+2} for k = 1.
inline OPFamily recurrence_k1(const Rational& chi, int N) {
  if (chi < 0) throw std::invalid_argument("chi must be nonnegative");
  SobolevParams S = SobolevParams::sobolev1(chi);
  OPFamily fam = gram_schmidt(S, 1, std::min(N, 2));
  fam.method = "four-term recurrence";
  auto f = f_seq(1, std::max(N, 2));
  for (int n = 0; n + 3 <= N; ++n) {
    Rational dn2 = k1_normal_q0(n + 2);
    if (dn2 == 0)
      throw AssumptionViolated("normal derivative of f_" + std::to_string(n + 2) + " vanishes at q0 (k=1)");
    Rational d = -k1_normal_q0(n + 3) / dn2;
    Poly F = f[n + 3];
    F.axpy(d, f[n + 2]);
    Rational a = poly_inner(S, F, fam.polys[n + 2]) / fam.norms_sq[n + 2];
    Rational b = poly_inner(S, F, fam.polys[n + 1]) / fam.norms_sq[n + 1];
    Rational c = poly_inner(S, F, fam.polys[n]) / fam.norms_sq[n];
    Poly s = F;
    s.axpy(-a, fam.polys[n + 2]).axpy(-b, fam.polys[n + 1]).axpy(-c, fam.polys[n]);
    fam.recurrence["a"][n] = a;
    fam.recurrence["b"][n] = b;
    fam.recurrence["c"][n] = c;
    fam.recurrence["d"][n] = d;
    fam.norms_sq.push_back(poly_inner(S, s, s));
    fam.polys.push_back(std::move(s));
  }
  return fam;
}

// ft_{j+1} = sum_l w_{l,j} P_{l+1,1} - (sum_l w_{l,j} alpha_{l+1}) P_{0,1}; entry 0 is zero.
inline std::vector<Poly> k1_tilde_f(int N) {
  OPFamily leg = legendre(1, std::max(N - 1, 0));
  std::vector<Poly> out(1);
  for (int t = 1; t <= N; ++t) {
    Poly g;
    Rational z = 0;
    for (auto& [m, w] : leg.at(t - 1).terms()) {
      g.add_term(m.j + 1, 1, w);
      z += w * alpha(m.j + 1);
    }
    g.add_term(0, 1, -z);
    out.push_back(std::move(g));
  }
  return out;
}

// Three-term recurrence driven by ft for k = 1, checked against Gram-Schmidt.
inline OPFamily recurrence_k1_tilde(const Rational& chi, int N) {
  SobolevParams S = SobolevParams::sobolev1(chi);
  OPFamily fam = gram_schmidt(S, 1, std::min(N, 1));
  fam.method = "three-term recurrence (tilde f)";
  auto ft = k1_tilde_f(std::max(N, 1));
  for (int n = 1; n + 1 <= N; ++n) {
    Rational a = poly_inner(S, ft[n + 1], fam.polys[n]) / fam.norms_sq[n];
    Rational bt = poly_inner(S, ft[n + 1], fam.polys[n - 1]) / fam.norms_sq[n - 1];
    Poly s = ft[n + 1];
    s.axpy(-a, fam.polys[n]).axpy(-bt, fam.polys[n - 1]);
    fam.recurrence["a"][n] = a;
    fam.recurrence["b_tilde"][n] = bt;
    fam.norms_sq.push_back(poly_inner(S, s, s));
    fam.polys.push_back(std::move(s));
  }
  OPFamily ref = gram_schmidt(S, 1, N);
  fam.verified = ref.polys == fam.polys;
  return fam;
}

// s_n + chi D^2 s_n - [D p_{n+1} + a_n |s_n|_S^2/|p_n|^2 D p_n + |s_n|_S^2/|p_{n-1}|^2 D p_{n-1}].
inline Poly ode_residual(int n, const Rational& chi, int k) {
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  OPFamily s = recurrence_k23(chi, k, n + 1);
  OPFamily p = legendre(k, n + 1);
  const Rational& xi = s.norm_sq(n);
  Poly lhs = s.at(n);
  lhs.axpy(chi, laplacian_pow(s.at(n), 2));
  Poly rhs = laplacian(p.at(n + 1));
  rhs.axpy(s.recurrence["a"][n] * xi / p.norm_sq(n), laplacian(p.at(n)));
  if (n >= 1) rhs.axpy(xi / p.norm_sq(n - 1), laplacian(p.at(n - 1)));
  return lhs - rhs;
}

// Order-m recurrence: F_{n+m+1} = st_{n+m+1} + sum_{l=0}^{2m-1} a_{n,l} st_{n+m-l} with F_{m+j} = G^m p_j.
inline OPFamily higher_recurrence(const SobolevParams& params, int k, int N) {
  if (k != 2 && k != 3) throw std::invalid_argument("higher-order recurrence needs family 2 or 3");
  const int m = params.order();
  if (m < 2) throw std::invalid_argument("higher-order recurrence needs m >= 2");
  if (params.chi[m] <= 0) throw std::invalid_argument("the top Sobolev weight must be positive");
  if (params.has_extended_terms()) throw std::invalid_argument("higher-order recurrence uses the plain S^m product");
  OPFamily fam = gram_schmidt(params, k, std::min(N, m));
  fam.method = "order-" + std::to_string(m) + " recurrence";
  OPFamily leg = legendre(k, std::max(N - m, 0));
  for (int n = 0; n + m + 1 <= N; ++n) {
    Poly F = green_pow(leg.at(n + 1), m);
    Poly s = F;
    for (int l = 0; l <= 2 * m - 1; ++l) {
      int idx = n + m - l;
      if (idx < 0) break;
      Rational a = poly_inner(params, F, fam.polys[idx]) / fam.norms_sq[idx];
      fam.recurrence["a_" + std::to_string(l)][n] = a;
      s.axpy(-a, fam.polys[idx]);
    }
    fam.norms_sq.push_back(poly_inner(params, s, s));
    fam.polys.push_back(std::move(s));
  }
  return fam;
}

// st_n + sum_l chi_l D^{2l} st_n - [D^m p_{n+m} + sum_{l=1}^{2m} |st_n|^2/|p_{n+m-l}|^2 a_{n+m-l-1,2m-l-1} D^m p_{n+m-l}]
// with a_{N,-1} = 1 and a_{N,L} = <G^m p_{N+1}, st_{N+m-L}>/|st_{N+m-L}|^2.
inline Poly higher_ode_residual(int n, const SobolevParams& params, int k) {
  const int m = params.order();
  if (n < m) throw std::invalid_argument("the higher-order equation needs n >= m");
  OPFamily s = gram_schmidt(params, k, n);
  OPFamily p = legendre(k, n + m);
  const Poly& sn = s.at(n);
  const Rational& xi = s.norm_sq(n);
  Poly lhs = sn;
  for (int l = 1; l <= m; ++l) lhs.axpy(params.chi[l], laplacian_pow(sn, 2 * l));
  Poly rhs = laplacian_pow(p.at(n + m), m);
  for (int l = 1; l <= 2 * m; ++l) {
    int deg = n + m - l;
    if (deg < 0) break;
    Rational a = 1;
    if (l < 2 * m) {
      int N0 = deg - 1, L = 2 * m - l - 1;
      int idx = N0 + m - L;
      a = poly_inner(params, green_pow(p.at(N0 + 1), m), s.at(idx)) / s.norm_sq(idx);
    }
    rhs.axpy(xi / p.norm_sq(deg) * a, laplacian_pow(p.at(deg), m));
  }
  return lhs - rhs;
}

// ff_n = f_n + t_n ff_{n-1} + u_n ff_{n-2}, n >= 1, pairwise orthogonal in the chi Sobolev product.
inline OPFamily associated_family(const Rational& chi, int k, int N) {
  if (k != 2 && k != 3) throw std::invalid_argument("associated family needs family 2 or 3");
  if (N < 1) throw std::invalid_argument("associated family starts at degree 1");
  SobolevParams S = SobolevParams::sobolev1(chi);
  auto f = f_seq(k, N);
  if (N >= 2 && l2_inner(f[2], f[1]) == 0) throw AssumptionViolated("<f_2, f_1>_2 vanishes");
  OPFamily fam;
  fam.family = k;
  fam.params = S;
  fam.first_degree = 1;
  fam.method = "associated family";
  fam.polys.push_back(f[1]);
  fam.norms_sq.push_back(poly_inner(S, f[1], f[1]));
  for (int n = 2; n <= N; ++n) {
    const Poly& prev = fam.at(n - 1);
    Rational t = -poly_inner(S, f[n], prev) / fam.norm_sq(n - 1);
    Rational u = 0;
    Poly g = f[n];
    g.axpy(t, prev);
    if (n >= 3) {
      u = -poly_inner(S, f[n], fam.at(n - 2)) / fam.norm_sq(n - 2);
      g.axpy(u, fam.at(n - 2));
    }
    fam.recurrence["t"][n] = t;
    fam.recurrence["u"][n] = u;
    fam.norms_sq.push_back(poly_inner(S, g, g));
    fam.polys.push_back(std::move(g));
  }
  return fam;
}

struct ChiAsymptoticRow {
  Rational chi;
  Rational err_sq;          // |s_n(chi) - f_n|_2^2
  Rational limit_err_sq;    // distance to the chi -> infinity limit
  Rational chi_b_tilde;     // chi * bt_n
};

struct ChiAsymptoticReport {
  int family = 3;
  int n = 3;
  Poly limit;               // f_n for n >= 3, f_2 - (|p_1|^2/|p_0|^2) p_0 for n = 2
  Rational b_tilde_limit;   // |p_n|^2 / |p_{n-2}|^2
  std::vector<ChiAsymptoticRow> rows;
};

inline ChiAsymptoticReport chi_asymptotics(int k, int n, const std::vector<Rational>& chis) {
  check_family(k);
  if (n < 2) throw std::invalid_argument("chi asymptotics needs n >= 2");
  auto f = f_seq(k, n);
  OPFamily p = legendre(k, n);
  ChiAsymptoticReport rep;
  rep.family = k;
  rep.n = n;
  rep.limit = f[n];
  if (n == 2) rep.limit.axpy(-p.norm_sq(1) / p.norm_sq(0), p.at(0));
  rep.b_tilde_limit = p.norm_sq(n) / p.norm_sq(n - 2);
  for (auto& chi : chis) {
    OPFamily s = gram_schmidt(SobolevParams::sobolev1(chi), k, n);
    Poly e = s.at(n) - f[n];
    Poly el = s.at(n) - rep.limit;
    rep.rows.push_back({chi, l2_norm_sq(e), l2_norm_sq(el), chi * p.norm_sq(n) / s.norm_sq(n - 1)});
  }
  return rep;
}

}  // namespace sgop

#endif
