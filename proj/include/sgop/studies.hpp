#ifndef SGOP_STUDIES_HPP
#define SGOP_STUDIES_HPP

#include "interp_quad.hpp"

#include <string>
#include <vector>

namespace sgop {

// Grid fields of P_{0,k} .. P_{N,k}; any polynomial in that span is evaluated by linear combination.
class MonomialFields {
 public:
  MonomialFields(int k, int N, int m, int solve_level, const EvalOptions& opt = {}) : k_(k) {
    for (int j = 0; j <= N; ++j) fields_.push_back(eval_poly_grid<HighFloat>(Poly::monomial(j, k), m, solve_level, opt));
  }

  FieldOnGrid<HighFloat> eval(const Poly& f) const {
    FieldOnGrid<HighFloat> out;
    out.grid = fields_.at(0).grid;
    out.precision_bits = fields_.at(0).precision_bits;
    out.exact = false;
    out.values.assign(out.grid->size(), HighFloat(0));
    for (auto& [m, c] : f.terms()) {
      if (m.k != k_ || m.j >= static_cast<int>(fields_.size())) throw std::invalid_argument("polynomial outside the evaluated span");
      HighFloat cf(c);
      const auto& v = fields_[m.j].values;
      for (std::size_t i = 0; i < v.size(); ++i) out.values[i] += cf * v[i];
    }
    return out;
  }

 private:
  int k_;
  std::vector<FieldOnGrid<HighFloat>> fields_;
};

// Edge samples used for zero counting: the bottom edge keeps both corners, a side edge keeps q0 and
// drops its corner on the bottom edge.
inline std::vector<HighFloat> counting_samples(const FieldOnGrid<HighFloat>& f, Edge e) {
  auto pts = restrict_edge(f, e);
  std::vector<HighFloat> v;
  for (std::size_t i = (e == Edge::bottom ? 0 : 1); i < pts.size(); ++i) v.push_back(pts[i].second);
  return v;
}

struct ZeroCountRow {
  std::string kind;  // "p" (Legendre) or "s" (Sobolev)
  int n = 0;
  Edge edge = Edge::bottom;
  SignChangeReport report;
  HighFloat max_abs;  // over the whole grid
};

struct ZeroStudy {
  int family = 1;
  Rational chi;
  int level = 7;
  int solve_level = 9;
  HighFloat threshold;
  std::vector<ZeroCountRow> rows;
  std::vector<std::pair<int, HighFloat>> magnitude_ratio;  // max|s_n| / max|p_n|
};

inline ZeroStudy zero_study(int k, const Rational& chi, int N, int level, int solve_level, const HighFloat& threshold,
                            const EvalOptions& opt = {}) {
  ZeroStudy z;
  z.family = k;
  z.chi = chi;
  z.level = level;
  z.solve_level = solve_level;
  z.threshold = threshold;
  MonomialFields fields(k, N, level, solve_level, opt);
  OPFamily p = legendre(k, N);
  OPFamily s = gram_schmidt(SobolevParams::sobolev1(chi), k, N);
  auto max_abs = [](const FieldOnGrid<HighFloat>& f) {
    HighFloat m = 0;
    for (auto& v : f.values) m = std::max(m, HighFloat(abs(v)));
    return m;
  };
  for (int n = 1; n <= N; ++n) {
    HighFloat mp, ms;
    for (const char* kind : {"p", "s"}) {
      auto f = fields.eval(kind[0] == 'p' ? p.at(n) : s.at(n));
      HighFloat mx = max_abs(f);
      (kind[0] == 'p' ? mp : ms) = mx;
      for (Edge e : {Edge::bottom, Edge::left, Edge::right})
        z.rows.push_back({kind, n, e, count_sign_changes(counting_samples(f, e), threshold), mx});
    }
    z.magnitude_ratio.emplace_back(n, mp == 0 ? HighFloat(0) : HighFloat(ms / mp));
  }
  return z;
}

}  // namespace sgop

#endif
