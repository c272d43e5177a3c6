#ifndef SGOP_INTERP_QUAD_HPP
#define SGOP_INTERP_QUAD_HPP

#include "evaluation.hpp"
#include "orthopoly.hpp"

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgop {

struct NodeSet {
  std::vector<VertexAddress> nodes;
  int n = 0;

  bool distinct() const {
    std::set<VertexAddress> s;
    for (auto& v : nodes) s.insert(v.canonical());
    return s.size() == nodes.size();
  }
};

// x_i = F_0^i q_1 for i = 0..2n+1, then F_0^i q_2 for i = 0..n.
inline NodeSet two_spine_nodes(int n) {
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  NodeSet s;
  s.n = n;
  for (int i = 0; i <= 2 * n + 1; ++i) s.nodes.push_back(VertexAddress::spine(0, i, 1).canonical());
  for (int i = 0; i <= n; ++i) s.nodes.push_back(VertexAddress::spine(0, i, 2).canonical());
  return s;
}

// All 3n+3 nodes on the q_1 spine: F_0^i q_1, i = 0..3n+2.
inline NodeSet q1_spine_nodes(int n) {
  NodeSet s;
  s.n = n;
  for (int i = 0; i <= 3 * n + 2; ++i) s.nodes.push_back(VertexAddress::spine(0, i, 1).canonical());
  return s;
}

// The six vertices of V_1.
inline NodeSet v1_nodes() {
  NodeSet s;
  s.n = 1;
  auto g = build_grid(1);
  for (std::size_t i = 0; i < g->size(); ++i) s.nodes.push_back(g->address(static_cast<int>(i)));
  return s;
}

struct InterpolationMatrix {
  NodeSet node_set;
  std::vector<Mono> columns;  // mixed order
  Matrix<Rational> exact_entries;
  Matrix<HighFloat> entries;
  Matrix<HighFloat> error_bound;
  std::vector<std::vector<bool>> exact;

  bool all_exact() const {
    for (auto& r : exact)
      for (bool b : r)
        if (!b) return false;
    return true;
  }
};

// Spine nodes are filled exactly. Other nodes use the grid solver at solve_level, with the change from
// solve_level - 1 as the entry error bound.
inline InterpolationMatrix interpolation_matrix(const NodeSet& nodes, int n, int solve_level = 8,
                                                unsigned precision_bits = default_precision_bits) {
  const std::size_t dim = static_cast<std::size_t>(3 * n + 3);
  if (nodes.nodes.size() != dim) throw std::invalid_argument("interpolation needs 3n+3 nodes");
  set_working_precision(precision_bits);
  InterpolationMatrix M;
  M.node_set = nodes;
  M.columns = basis(0, n);
  M.exact_entries.assign(dim, std::vector<Rational>(dim));
  M.entries.assign(dim, std::vector<HighFloat>(dim));
  M.error_bound.assign(dim, std::vector<HighFloat>(dim, HighFloat(0)));
  M.exact.assign(dim, std::vector<bool>(dim, true));
  std::map<std::size_t, std::pair<FieldOnGrid<HighFloat>, FieldOnGrid<HighFloat>>> fields;
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      Poly P = Poly::monomial(M.columns[c].j, M.columns[c].k);
      if (auto v = eval_exact_if_spine(P, nodes.nodes[r])) {
        M.exact_entries[r][c] = *v;
        M.entries[r][c] = HighFloat(*v);
        continue;
      }
      M.exact[r][c] = false;
      auto it = fields.find(c);
      if (it == fields.end()) {
        EvalOptions opt;
        opt.precision_bits = precision_bits;
        it = fields.emplace(c, std::make_pair(eval_poly_fine<HighFloat>(P, solve_level, opt),
                                              eval_poly_fine<HighFloat>(P, solve_level - 1, opt))).first;
      }
      const HighFloat& fine = it->second.first.at(nodes.nodes[r]);
      const HighFloat& coarse = it->second.second.at(nodes.nodes[r]);
      M.entries[r][c] = fine;
      M.error_bound[r][c] = abs(fine - coarse);
    }
  return M;
}

struct DeterminantResult {
  bool exact = false;
  Rational value;
  HighFloat approx;
  HighFloat error_bound;  // first-order bound from the entry bounds; zero when exact

  bool nonzero() const { return exact ? value != 0 : abs(approx) > error_bound; }
};

inline DeterminantResult invertibility_check(const InterpolationMatrix& M) {
  DeterminantResult d;
  if (M.all_exact()) {
    d.exact = true;
    d.value = determinant(M.exact_entries);
    d.approx = HighFloat(d.value);
    d.error_bound = 0;
    return d;
  }
  d.approx = determinant_lu(M.entries);
  d.error_bound = 0;
  if (d.approx != 0) {
    auto inv = inverse(M.entries);
    // d det = det * sum_ij inv_ji dA_ij
    HighFloat s = 0;
    for (std::size_t i = 0; i < M.entries.size(); ++i)
      for (std::size_t j = 0; j < M.entries.size(); ++j) s += abs((*inv)[j][i]) * M.error_bound[i][j];
    d.error_bound = abs(d.approx) * s;
  }
  return d;
}

inline DeterminantResult invertibility_check(const Matrix<Rational>& m) {
  DeterminantResult d;
  d.exact = true;
  d.value = determinant(m);
  d.approx = HighFloat(d.value);
  d.error_bound = 0;
  return d;
}

// Infinity-norm condition number of an exact matrix (reported only).
inline HighFloat condition_number(const Matrix<Rational>& m) {
  auto inv = inverse(m);
  if (!inv) return HighFloat(-1);
  auto norm = [](const Matrix<Rational>& a) {
    Rational best = 0;
    for (auto& r : a) {
      Rational s = 0;
      for (auto& x : r) s += abs(x);
      best = std::max(best, s);
    }
    return best;
  };
  return HighFloat(norm(m) * norm(*inv));
}

// P_{j,3}(F_0^i q_1) for i, j = 0..n.
inline Matrix<Rational> k3_spine_block(int n) {
  Matrix<Rational> m(static_cast<std::size_t>(n + 1), std::vector<Rational>(static_cast<std::size_t>(n + 1)));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) m[i][j] = eval_spine_exact(Poly::monomial(j, 3), 0, i, 1);
  return m;
}

// prod_j gamma_j * prod_{1 <= i < j <= n+1} (5^{-j} - 5^{-i}).
inline Rational k3_vandermonde_formula(int n) {
  Rational d = 1;
  for (int j = 0; j <= n; ++j) d *= gamma(j);
  for (int i = 1; i <= n + 1; ++i)
    for (int j = i + 1; j <= n + 1; ++j) d *= pow5q(-j) - pow5q(-i);
  return d;
}

struct QuadratureRule {
  int n = 0;
  NodeSet nodes;
  std::vector<Rational> weights;
};

// Weights integrating every monomial of degree <= n exactly: M^T w = (int P_{j,k}).
inline QuadratureRule quadrature_weights(int n) {
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  int zb = first_vanishing_beta(n);
  if (zb >= 0) throw AssumptionViolated("beta_" + std::to_string(zb) + " vanishes");
  QuadratureRule q;
  q.n = n;
  q.nodes = two_spine_nodes(n);
  InterpolationMatrix M = interpolation_matrix(q.nodes, n);
  if (!M.all_exact()) throw ConsistencyError("spine node matrix should be exact");
  std::vector<Rational> moments;
  for (auto& b : M.columns) moments.push_back(monomial_integral(b.j, b.k));
  auto w = solve(transpose(M.exact_entries), moments);
  if (!w) throw ConsistencyError("quadrature system is singular");
  q.weights = std::move(*w);
  return q;
}

// sum_i w_i P(x_i) - int P for each monomial of degree <= upto.
inline std::vector<Rational> quadrature_residuals(const QuadratureRule& q, int upto) {
  std::vector<Rational> out;
  for (auto& b : basis(0, upto)) {
    Poly P = Poly::monomial(b.j, b.k);
    Rational s = 0;
    for (std::size_t i = 0; i < q.weights.size(); ++i) s += q.weights[i] * *eval_exact_if_spine(P, q.nodes.nodes[i]);
    out.push_back(s - monomial_integral(b.j, b.k));
  }
  return out;
}

// All words of a given length in lexicographic order.
inline std::vector<std::string> words_of_length(int len) {
  std::vector<std::string> out{""};
  for (int l = 0; l < len; ++l) {
    std::vector<std::string> next;
    next.reserve(out.size() * 3);
    for (auto& w : out)
      for (char c : {'0', '1', '2'}) next.push_back(w + c);
    out = std::move(next);
  }
  return out;
}

// I_n^m(f) = 3^{-(m-n)} sum_{|w| = m-n} sum_i w_i f(F_w x_i), summed in lexicographic word order.
template <class T>
T composite_quadrature(const QuadratureRule& rule, int m, const std::function<T(const VertexAddress&)>& f) {
  if (m < rule.n) throw std::invalid_argument("composite level must be at least the rule order");
  std::vector<T> w;
  for (auto& x : rule.weights) w.push_back(from_rational<T>(x));
  T total(0);
  for (auto& word : words_of_length(m - rule.n)) {
    T cell(0);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto& x = rule.nodes.nodes[i];
      cell += w[i] * f(VertexAddress{word + x.word, x.corner}.canonical());
    }
    total += cell;
  }
  T cells(1);
  for (int i = 0; i < m - rule.n; ++i) cells *= T(3);
  return total / cells;
}

// Deepest node level used by the composite rule at level m.
inline int composite_node_level(const QuadratureRule& rule, int m) { return m - rule.n + 2 * rule.n + 1; }

// Composite rule for a polynomial with node values from the grid solver at solve_level.
template <class T>
T composite_quadrature_poly(const QuadratureRule& rule, int m, const Poly& f, int solve_level,
                            const EvalOptions& opt = {}) {
  if (solve_level < composite_node_level(rule, m)) throw std::invalid_argument("solve level is too coarse for the rule nodes");
  auto field = eval_poly_fine<T>(f, solve_level, opt);
  return composite_quadrature<T>(rule, m, [&](const VertexAddress& v) { return field.at(v); });
}

template <class T>
struct QuadratureStudyRow {
  int m = 0;
  T estimate;
  Rational exact;
  T abs_error;
  std::optional<T> ratio;
};

// Errors at m = n..m_max against the exact integral; node values from the solver at m + oversample.
template <class T>
std::vector<QuadratureStudyRow<T>> quadrature_error_study(int n, const Poly& f, int m_min, int m_max, int oversample,
                                                          const EvalOptions& opt = {}) {
  using std::abs;
  QuadratureRule rule = quadrature_weights(n);
  Rational exact = 0;
  for (auto& [b, c] : f.terms()) exact += c * monomial_integral(b.j, b.k);
  std::vector<QuadratureStudyRow<T>> rows;
  for (int m = std::max(m_min, n); m <= m_max; ++m) {
    int L = std::max(m + oversample, composite_node_level(rule, m));
    QuadratureStudyRow<T> r;
    r.m = m;
    r.estimate = composite_quadrature_poly<T>(rule, m, f, L, opt);
    r.exact = exact;
    r.abs_error = abs(r.estimate - from_rational<T>(exact));
    if (!rows.empty() && r.abs_error != 0) r.ratio = rows.back().abs_error / r.abs_error;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace sgop

#endif
