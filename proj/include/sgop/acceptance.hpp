#ifndef SGOP_ACCEPTANCE_HPP
#define SGOP_ACCEPTANCE_HPP

#include "studies.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace sgop {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool gated = true;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

namespace accept {

inline std::string fmt(const Rational& q, int digits = 6) { return to_decimal(q, digits); }

inline double ratio_of(const Rational& a, const Rational& b) { return (a / b).convert_to<double>(); }

inline bool all_offdiagonal_zero(const OPFamily& f) {
  for (std::size_t i = 0; i < f.polys.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (inner(f.params, f.polys[i], f.polys[j]) != 0) return false;
  return true;
}

inline CriterionResult c1() {
  CriterionResult r{1, "exact orthogonality, k=1,2,3, chi=1, degree <= 8"};
  std::ostringstream d;
  bool ok = true;
  Rational chi = 1;
  for (int k = 1; k <= 3; ++k) {
    OPFamily gs = gram_schmidt(SobolevParams::sobolev1(chi), k, 8);
    OPFamily rec = k == 1 ? recurrence_k1(chi, 8) : recurrence_k23(chi, k, 8);
    bool a = all_offdiagonal_zero(gs), b = all_offdiagonal_zero(rec);
    d << "k=" << k << " gram-schmidt " << (a ? "ok" : "NONZERO") << ", " << rec.method << ' ' << (b ? "ok" : "NONZERO") << "; ";
    ok = ok && a && b;
  }
  r.pass = ok;
  r.detail = d.str();
  return r;
}

inline CriterionResult c2() {
  CriterionResult r{2, "recurrences equal Gram-Schmidt (three/four-term to degree 8, order 2 to degree 7)"};
  std::ostringstream d;
  bool ok = true;
  for (const Rational& chi : {Rational(1), Rational(1, 2)}) {
    SobolevParams S = SobolevParams::sobolev1(chi);
    for (int k = 2; k <= 3; ++k) {
      bool e = recurrence_k23(chi, k, 8).polys == gram_schmidt(S, k, 8).polys;
      ok = ok && e;
      d << "k=" << k << " chi=" << to_string(chi) << (e ? " eq" : " DIFF") << "; ";
    }
    bool e1 = recurrence_k1(chi, 8).polys == gram_schmidt(S, 1, 8).polys;
    ok = ok && e1;
    d << "k=1 chi=" << to_string(chi) << (e1 ? " eq" : " DIFF") << "; ";
  }
  for (auto chis : {std::vector<Rational>{1, 1, 1}, std::vector<Rational>{1, Rational(1, 3), 2}}) {
    SobolevParams P = SobolevParams::sobolev(chis);
    for (int k = 2; k <= 3; ++k) {
      bool e = higher_recurrence(P, k, 7).polys == gram_schmidt(P, k, 7).polys;
      ok = ok && e;
      d << "m=2 k=" << k << " chi=(" << to_string(chis[0]) << ',' << to_string(chis[1]) << ',' << to_string(chis[2])
        << ")" << (e ? " eq" : " DIFF") << "; ";
    }
  }
  r.pass = ok;
  r.detail = d.str();
  return r;
}

inline CriterionResult c3() {
  CriterionResult r{3, "differential equations: second order n <= 6, order 2m for m=2, n <= 4"};
  std::ostringstream d;
  bool ok = true;
  int checked = 0;
  for (int k = 2; k <= 3; ++k)
    for (const Rational& chi : {Rational(1), Rational(1, 2)})
      for (int n = 0; n <= 6; ++n) {
        ++checked;
        if (!ode_residual(n, chi, k).is_zero()) {
          ok = false;
          d << "nonzero residual k=" << k << " chi=" << to_string(chi) << " n=" << n << "; ";
        }
      }
  for (auto chis : {std::vector<Rational>{1, 1, 1}, std::vector<Rational>{1, Rational(1, 3), 2}})
    for (int k = 2; k <= 3; ++k)
      for (int n = 2; n <= 4; ++n) {
        ++checked;
        if (!higher_ode_residual(n, SobolevParams::sobolev(chis), k).is_zero()) {
          ok = false;
          d << "nonzero order-2 residual k=" << k << " n=" << n << "; ";
        }
      }
  d << checked << " residuals checked";
  r.pass = ok;
  r.detail = d.str();
  return r;
}

inline CriterionResult c4() {
  CriterionResult r{4, "coefficient identities for b~_n and c_n"};
  std::ostringstream d;
  bool ok = true;
  for (int k = 2; k <= 3; ++k) {
    OPFamily s = recurrence_k23(1, k, 9);
    OPFamily p = legendre(k, 9);
    for (int n = 1; n <= 8; ++n) {
      const Rational& bt = s.recurrence["b_tilde"].at(n);
      if (bt != p.norm_sq(n) / s.norm_sq(n - 1) || bt <= 0) {
        ok = false;
        d << "b~ fails k=" << k << " n=" << n << "; ";
      }
    }
    for (int n = 2; n <= 8; ++n) {
      auto lc = legendre_recurrence_coeffs(k, n);
      if (lc.c != p.norm_sq(n) / p.norm_sq(n - 1)) {
        ok = false;
        d << "c fails k=" << k << " n=" << n << "; ";
      }
    }
  }
  d << (ok ? "all identities exact for k=2,3" : "");
  r.pass = ok;
  r.detail = d.str();
  return r;
}

inline CriterionResult c5() {
  CriterionResult r{5, "Gauss-Green canaries on normal derivatives of f_t"};
  std::ostringstream d;
  bool ok = true;
  for (int k = 2; k <= 3; ++k) {
    auto f = f_seq(k, 9);
    for (int t = 2; t <= 9; ++t)
      if (normal_derivative(f[t], Corner::q1) != 0) {
        ok = false;
        d << "dn f_{" << t << "," << k << "}(q1) != 0; ";
      }
  }
  auto f1 = f_seq(1, 9);
  for (int t = 1; t <= 9; ++t) {
    Rational v = normal_derivative(f1[t], Corner::q0) + 2 * normal_derivative(f1[t], Corner::q1);
    if (v != 0) {
      ok = false;
      d << "k=1 t=" << t << ": dn f(q0) + 2 dn f(q1) = " << to_string(v) << "; ";
    }
  }
  if (ok) d << "all canaries vanish";
  r.pass = ok;
  r.detail = d.str();
  return r;
}

inline CriterionResult c6() {
  CriterionResult r{6, "almost-orthogonality of f_n and orthogonality of the associated family"};
  std::ostringstream d;
  bool ok = true;
  SobolevParams S = SobolevParams::sobolev1(1);
  for (int k = 2; k <= 3; ++k) {
    auto f = f_seq(k, 10);
    for (int n = 1; n <= 10; ++n)
      for (int m = 1; m <= 10; ++m)
        if (std::abs(n - m) >= 3 && poly_inner(S, f[n], f[m]) != 0) {
          ok = false;
          d << "<f_" << n << ",f_" << m << "> != 0 (k=" << k << "); ";
        }
    OPFamily a = associated_family(1, k, 8);
    if (!all_offdiagonal_zero(a)) {
      ok = false;
      d << "associated family not orthogonal (k=" << k << "); ";
    }
  }
  if (ok) d << "k=2,3 exact";
  r.pass = ok;
  r.detail = d.str();
  return r;
}

inline CriterionResult c7() {
  CriterionResult r{7, "strict norm chain for 1 <= n <= 10, chi=1"};
  std::ostringstream d;
  bool ok = true;
  Rational chi = 1;
  SobolevParams S = SobolevParams::sobolev1(chi);
  for (int k = 1; k <= 3; ++k) {
    OPFamily p = legendre(k, 10);
    OPFamily s = gram_schmidt(S, k, 10);
    for (int n = 1; n <= 10; ++n) {
      Rational a = p.norm_sq(n), b = l2_norm_sq(s.at(n)), c = s.norm_sq(n);
      Rational top = l2_mono(n, k, n, k) + chi * l2_mono(n - 1, k, n - 1, k);
      if (!(a < b)) d << "k=" << k << " n=" << n << ": |p_n|^2 " << (a == b ? "==" : ">") << " |s_n|_2^2; ";
      if (!(b < c)) d << "k=" << k << " n=" << n << ": |s_n|_2^2 !< |s_n|_S^2; ";
      if (!(c < top)) d << "k=" << k << " n=" << n << ": |s_n|_S^2 !< |P_n|^2 + chi|P_{n-1}|^2; ";
      ok = ok && a < b && b < c && c < top;
    }
  }
  if (ok) d << "all strict";
  r.pass = ok;
  r.detail = d.str();
  return r;
}

inline CriterionResult c8() {
  CriterionResult r{8, "chi asymptotics: |s_3(1e3)-f_3| / |s_3(1e5)-f_3| in [50, 200], k=3"};
  auto t0 = std::chrono::steady_clock::now();
  auto rep = chi_asymptotics(3, 3, {Rational(1000), Rational(100000)});
  Rational ratio_sq = rep.rows[0].err_sq / rep.rows[1].err_sq;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  HighFloat ratio = sqrt(HighFloat(ratio_sq));
  r.pass = ratio_sq >= 2500 && ratio_sq <= 40000 && secs < 60;
  r.detail = "ratio = " + to_decimal(ratio, 10) + " (ratio^2 = " + fmt(ratio_sq, 10) + ")";
  return r;
}

inline CriterionResult c9() {
  CriterionResult r{9, "composite quadrature order, n=1, f=P_{2,1}, m=1..4, solver at m+2"};
  auto t0 = std::chrono::steady_clock::now();
  Poly f = Poly::monomial(2, 1);
  bool ref_ok = monomial_integral(2, 1) == 2 * eta(3);
  auto rows = quadrature_error_study<Rational>(1, f, 1, 4, 2);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Rational prod = 1;
  std::ostringstream d;
  bool have = true;
  for (auto& row : rows) {
    d << "m=" << row.m << " err=" << fmt(row.abs_error, 4);
    if (row.ratio) {
      prod *= *row.ratio;
      d << " ratio=" << fmt(*row.ratio, 6);
    } else if (row.m > 1) {
      have = false;
    }
    d << "; ";
  }
  HighFloat geo = cbrt(HighFloat(prod));
  d << "geometric mean " << to_decimal(geo, 8);
  r.pass = ref_ok && have && rows.size() == 4 && prod >= 15 * 15 * 15 && prod <= 40 * 40 * 40 && secs < 300;
  r.detail = d.str();
  return r;
}

inline CriterionResult c10() {
  CriterionResult r{10, "quadrature exactness for n <= 3 and the n=0 rule"};
  std::ostringstream d;
  bool ok = true;
  for (int n = 0; n <= 3; ++n) {
    auto q = quadrature_weights(n);
    for (auto& x : quadrature_residuals(q, n))
      if (x != 0) {
        ok = false;
        d << "nonzero residual n=" << n << "; ";
        break;
      }
  }
  auto q0 = quadrature_weights(0);
  bool w0 = q0.weights == std::vector<Rational>{0, Rational(5, 6), Rational(1, 6)};
  if (!w0) d << "n=0 weights differ; ";
  // Harmonic h with boundary data e_c; the rule must return 1/3 for each c.
  bool mean = true;
  for (int c = 0; c < 3; ++c) {
    std::array<Rational, 3> b{0, 0, 0};
    b[c] = 1;
    auto h = harmonic_extend<Rational>(b, 1);
    Rational s = 0;
    for (std::size_t i = 0; i < q0.weights.size(); ++i) s += q0.weights[i] * h.at(q0.nodes.nodes[i]);
    mean = mean && s == Rational(1, 3);
  }
  if (!mean) d << "harmonic mean-value identity fails; ";
  r.pass = ok && w0 && mean;
  if (r.pass) d << "residuals exactly zero, n=0 weights (0, 5/6, 1/6), mean-value identity exact";
  r.detail = d.str();
  return r;
}

inline CriterionResult c11() {
  CriterionResult r{11, "grid evaluation convergence on spine vertices, P_{j,1}, j <= 3, solve level 5..8"};
  std::ostringstream d;
  bool ok = true;
  for (int j = 0; j <= 3; ++j) {
    Poly P = Poly::monomial(j, 1);
    std::vector<Rational> errs, rels;
    for (int L = 5; L <= 8; ++L) {
      auto F = eval_poly_fine<Rational>(P, L);
      Rational e = 0, rel = 0;
      for (int n = 0; n <= 4; ++n)
        for (int t = 1; t <= 2; ++t) {
          Rational ex = eval_spine_exact(P, 0, n, t);
          Rational err = abs(F.at(VertexAddress::spine(0, n, t).canonical()) - ex);
          e = std::max(e, err);
          rel = std::max(rel, err / abs(ex));
        }
      errs.push_back(e);
      rels.push_back(rel);
    }
    bool mono = true;
    for (std::size_t i = 1; i < errs.size(); ++i)
      if (errs[i] > errs[i - 1] || (errs[i - 1] > 0 && !(errs[i] < errs[i - 1]))) mono = false;
    bool small = rels.back() < Rational(1, 100);
    ok = ok && mono && small;
    d << "j=" << j << " max err";
    for (auto& e : errs) d << ' ' << fmt(e, 3);
    if (errs[2] > 0 && errs[3] > 0) {
      double order = std::log(ratio_of(errs[2], errs[3])) / std::log(5.0);
      d << " (error ~ 5^-" << to_decimal(order, 3) << "m)";
    }
    d << " final rel " << fmt(rels.back(), 3) << (mono ? "" : " NOT MONOTONE") << (small ? "" : " TOO LARGE") << "; ";
  }
  r.pass = ok;
  r.detail = d.str();
  return r;
}

inline CriterionResult c12() {
  CriterionResult r{12, "interpolation determinants"};
  std::ostringstream d;
  bool ok = true;
  int zb = first_vanishing_beta(50);
  if (zb >= 0) {
    ok = false;
    d << "beta_" << zb << " = 0; ";
  } else {
    d << "beta_j != 0 for j <= 50; ";
  }
  for (int n = 0; n <= 3; ++n) {
    auto det = invertibility_check(interpolation_matrix(two_spine_nodes(n), n));
    ok = ok && det.exact && det.value != 0;
    d << "n=" << n << " det=" << fmt(det.value, 4) << "; ";
  }
  for (int n = 1; n <= 3; ++n) {
    auto det = invertibility_check(interpolation_matrix(q1_spine_nodes(n), n));
    ok = ok && det.exact && det.value == 0;
    d << "q1-spine n=" << n << " det=" << to_string(det.value) << "; ";
  }
  auto v1 = invertibility_check(interpolation_matrix(v1_nodes(), 1));
  bool v1ok = abs(v1.approx) > HighFloat("1e-8") && v1.nonzero();
  ok = ok && v1ok;
  d << "V_1 det=" << to_decimal(v1.approx, 10) << " (bound " << to_decimal(v1.error_bound, 3) << ")";
  r.pass = ok;
  r.detail = d.str();
  return r;
}

inline CriterionResult c13() {
  CriterionResult r{13, "report: zero counts per edge on Gamma_7 and max-norm ratios (not gated)"};
  r.gated = false;
  std::ostringstream d;
  for (int k = 1; k <= 3; ++k) {
    auto z = zero_study(k, 1, 6, 7, 9, HighFloat("1e-30"));
    d << "k=" << k << ": ";
    for (int n = 1; n <= 6; ++n) {
      d << "n=" << n;
      for (const char* kind : {"p", "s"}) {
        d << ' ' << kind << '(';
        bool first = true;
        for (auto& row : z.rows)
          if (row.n == n && row.kind == kind) {
            d << (first ? "" : "/") << row.report.sign_changes;
            first = false;
          }
        d << ')';
      }
      d << " |s|/|p|=" << to_decimal(z.magnitude_ratio[n - 1].second, 3) << "; ";
    }
  }
  r.pass = true;
  r.detail = d.str();
  return r;
}

}  // namespace accept

inline std::vector<std::function<CriterionResult()>> acceptance_criteria(bool include_report = true) {
  std::vector<std::function<CriterionResult()>> v{accept::c1, accept::c2, accept::c3, accept::c4,  accept::c5,  accept::c6,
                                                  accept::c7, accept::c8, accept::c9, accept::c10, accept::c11, accept::c12};
  if (include_report) v.push_back(accept::c13);
  return v;
}

// Runs each criterion, timing it; exceptions count as failures.
inline CriterionResult run_criterion(const std::function<CriterionResult()>& fn, int id) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = fn();
  } catch (const std::exception& e) {
    r.id = id;
    r.title = "criterion " + std::to_string(id);
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace sgop

#endif
