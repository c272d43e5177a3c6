#ifndef SGOP_EVALUATION_HPP
#define SGOP_EVALUATION_HPP

#include "gram.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgop {

// The point F_word(q_corner), F_w = F_{w_1} o ... o F_{w_n}.
struct VertexAddress {
  std::string word;
  int corner = 0;

  auto operator<=>(const VertexAddress&) const = default;

  // Drops trailing letters equal to the corner (F_i q_i = q_i), then takes the smaller of the two
  // names F_{u i}(q_j) = F_{u j}(q_i).
  VertexAddress canonical() const {
    VertexAddress a = *this;
    while (!a.word.empty() && a.word.back() - '0' == a.corner) a.word.pop_back();
    if (a.word.empty()) return a;
    VertexAddress b = a.alternate();
    return b < a ? b : a;
  }

  // The other name of a junction point (requires a reduced address with a nonempty word).
  VertexAddress alternate() const {
    VertexAddress b;
    b.word = word.substr(0, word.size() - 1) + static_cast<char>('0' + corner);
    b.corner = word.back() - '0';
    return b;
  }

  int level() const { return static_cast<int>(canonical().word.size()); }

  std::string str() const { return word + "q" + std::to_string(corner); }

  static VertexAddress parse(const std::string& s) {
    auto q = s.find('q');
    if (q == std::string::npos || q + 2 != s.size()) throw std::invalid_argument("bad vertex address: " + s);
    VertexAddress a;
    a.word = s.substr(0, q);
    for (char c : a.word)
      if (c < '0' || c > '2') throw std::invalid_argument("bad vertex address: " + s);
    char c = s[q + 1];
    if (c < '0' || c > '2') throw std::invalid_argument("bad vertex address: " + s);
    a.corner = c - '0';
    return a;
  }

  static VertexAddress spine(int i, int n, int target) {
    return VertexAddress{std::string(static_cast<std::size_t>(n), static_cast<char>('0' + i)), target};
  }
};

// Integer coordinates at resolution N = 2^L: the point q1 + (a (q2 - q1) + b (q0 - q1)) / N.
struct Lattice {
  std::int64_t a = 0;
  std::int64_t b = 0;
  auto operator<=>(const Lattice&) const = default;
};

inline Lattice corner_lattice(int c, std::int64_t N) {
  switch (c) {
    case 0: return {0, N};
    case 1: return {0, 0};
    default: return {N, 0};
  }
}

inline Lattice midpoint(const Lattice& p, const Lattice& q) { return {(p.a + q.a) / 2, (p.b + q.b) / 2}; }

// Lattice coordinates of an address at resolution 2^L (needs L >= word length).
inline Lattice lattice_of(const VertexAddress& v, int L) {
  if (static_cast<int>(v.word.size()) > L) throw std::invalid_argument("address is finer than the lattice");
  const std::int64_t N = std::int64_t(1) << L;
  Lattice p = corner_lattice(v.corner, N);
  for (auto it = v.word.rbegin(); it != v.word.rend(); ++it) p = midpoint(p, corner_lattice(*it - '0', N));
  return p;
}

class LevelGrid {
 public:
  explicit LevelGrid(int m) : m_(m) {
    if (m < 0 || m > 14) throw std::invalid_argument("grid level must be in [0, 14]");
    N_ = std::int64_t(1) << m;
    lookup_.assign(static_cast<std::size_t>((N_ + 1) * (N_ + 1)), -1);
    std::map<VertexAddress, Lattice> found;
    std::vector<std::array<Lattice, 3>> cells;
    collect(std::string(), {corner_lattice(0, N_), corner_lattice(1, N_), corner_lattice(2, N_)}, found, cells);
    std::vector<std::pair<VertexAddress, Lattice>> order(found.begin(), found.end());
    std::stable_sort(order.begin(), order.end(), [](auto& x, auto& y) {
      if (x.first.word.size() != y.first.word.size()) return x.first.word.size() < y.first.word.size();
      return x.first < y.first;
    });
    for (auto& [addr, p] : order) {
      lookup_[slot(p)] = static_cast<int>(addr_.size());
      addr_.push_back(addr);
      pts_.push_back(p);
    }
    adj_.resize(addr_.size());
    for (auto& c : cells) {
      std::array<int, 3> id{index(c[0]), index(c[1]), index(c[2])};
      cells_.push_back(id);
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          adj_[id[i]].push_back(id[j]);
          adj_[id[j]].push_back(id[i]);
        }
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
  }

  int level() const { return m_; }
  std::int64_t resolution() const { return N_; }
  std::size_t size() const { return addr_.size(); }
  const VertexAddress& address(int i) const { return addr_[i]; }
  const Lattice& lattice(int i) const { return pts_[i]; }
  const std::vector<int>& neighbors(int i) const { return adj_[i]; }
  // m-cells as corner index triples (corner order q0, q1, q2 of the cell).
  const std::vector<std::array<int, 3>>& cells() const { return cells_; }
  std::size_t edge_count() const { return cells_.size() * 3; }

  static std::size_t expected_size(int m) {
    std::size_t p = 1;
    for (int i = 0; i < m; ++i) p *= 3;
    return 3 * (p + 1) / 2;
  }

  int index(const Lattice& p) const {
    if (p.a < 0 || p.b < 0 || p.a + p.b > N_) return -1;
    return lookup_[slot(p)];
  }

  int index(const VertexAddress& v) const {
    if (v.level() > m_) return -1;
    return index(lattice_of(v, m_));
  }

  int boundary_index(int c) const { return index(corner_lattice(c, N_)); }
  bool is_boundary(int i) const { return i < 3; }

  // Planar position: x is rational, y = y_sqrt3 * sqrt(3).
  Rational x(int i) const { return Rational(Integer(2 * pts_[i].a + pts_[i].b), Integer(2 * N_)); }
  Rational y_sqrt3(int i) const { return Rational(Integer(pts_[i].b), Integer(2 * N_)); }

  // Image under the reflection that fixes q0 and swaps q1 with q2.
  int reflect(int i) const { return index(Lattice{N_ - pts_[i].a - pts_[i].b, pts_[i].b}); }

 private:
  std::size_t slot(const Lattice& p) const { return static_cast<std::size_t>(p.a * (N_ + 1) + p.b); }

  void collect(const std::string& w, std::array<Lattice, 3> c, std::map<VertexAddress, Lattice>& found,
               std::vector<std::array<Lattice, 3>>& cells) {
    if (static_cast<int>(w.size()) == m_) {
      for (int i = 0; i < 3; ++i) found.emplace(VertexAddress{w, i}.canonical(), c[i]);
      cells.push_back(c);
      return;
    }
    Lattice m01 = midpoint(c[0], c[1]), m02 = midpoint(c[0], c[2]), m12 = midpoint(c[1], c[2]);
    collect(w + '0', {c[0], m01, m02}, found, cells);
    collect(w + '1', {m01, c[1], m12}, found, cells);
    collect(w + '2', {m02, m12, c[2]}, found, cells);
  }

  int m_;
  std::int64_t N_;
  std::vector<int> lookup_;
  std::vector<VertexAddress> addr_;
  std::vector<Lattice> pts_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::array<int, 3>> cells_;
};

inline std::shared_ptr<const LevelGrid> build_grid(int m) {
  static std::map<int, std::shared_ptr<const LevelGrid>> cache;
  auto& g = cache[m];
  if (!g) g = std::make_shared<const LevelGrid>(m);
  return g;
}

template <class T>
struct FieldOnGrid {
  std::shared_ptr<const LevelGrid> grid;
  std::vector<T> values;
  bool exact = std::is_same_v<T, Rational>;
  unsigned precision_bits = 0;  // working precision for HighFloat fields

  const T& at(const VertexAddress& v) const {
    int i = grid->index(v);
    if (i < 0) throw std::out_of_range("vertex " + v.str() + " is not on this grid");
    return values[static_cast<std::size_t>(i)];
  }
};

namespace detail {

// Walks the cells top down, setting each midpoint from its cell corners.
template <class T, class Mid>
void refine_cells(const LevelGrid& g, std::array<Lattice, 3> c, int depth, std::int64_t& id, std::vector<T>& u,
                  Mid&& mid) {
  if (depth == g.level()) return;
  std::int64_t me = id++;
  std::array<Lattice, 3> m{midpoint(c[0], c[1]), midpoint(c[0], c[2]), midpoint(c[1], c[2])};
  std::array<int, 3> ci{g.index(c[0]), g.index(c[1]), g.index(c[2])};
  std::array<int, 3> mi{g.index(m[0]), g.index(m[1]), g.index(m[2])};
  const T &a0 = u[ci[0]], &a1 = u[ci[1]], &a2 = u[ci[2]];
  T five(5);
  u[mi[0]] = (2 * a0 + 2 * a1 + a2) / five + mid(me, 0);
  u[mi[1]] = (2 * a0 + 2 * a2 + a1) / five + mid(me, 1);
  u[mi[2]] = (2 * a1 + 2 * a2 + a0) / five + mid(me, 2);
  refine_cells(g, {c[0], m[0], m[1]}, depth + 1, id, u, mid);
  refine_cells(g, {m[0], c[1], m[2]}, depth + 1, id, u, mid);
  refine_cells(g, {m[1], m[2], c[2]}, depth + 1, id, u, mid);
}

inline std::array<Lattice, 3> root_cell(const LevelGrid& g) {
  return {corner_lattice(0, g.resolution()), corner_lattice(1, g.resolution()), corner_lattice(2, g.resolution())};
}

}  // namespace detail

// Exact harmonic extension: the midpoint of (p_i, p_j) in a cell with values (a_i, a_j, a_k) gets (2a_i + 2a_j + a_k)/5.
template <class T = Rational>
FieldOnGrid<T> harmonic_extend(const std::array<T, 3>& boundary, int m) {
  FieldOnGrid<T> f;
  f.grid = build_grid(m);
  f.values.assign(f.grid->size(), T(0));
  for (int c = 0; c < 3; ++c) f.values[f.grid->boundary_index(c)] = boundary[c];
  std::int64_t id = 0;
  detail::refine_cells<T>(*f.grid, detail::root_cell(*f.grid), 0, id, f.values, [](std::int64_t, int) { return T(0); });
  return f;
}

// Direct solve of sum_{y ~ z} (u(z) - u(y)) = r(z) on the interior of V_m with u given on V_0.
// Interior vertices are eliminated cell by cell from the finest level up (each combined cell is a
// scaled triangle Laplacian, ratio 3/5 per level), then values are recovered top down. O(|V_m|).
template <class T>
std::vector<T> dirichlet_solve(const LevelGrid& g, const std::array<T, 3>& boundary, const std::vector<T>& r) {
  const int M = g.level();
  std::vector<T> cond(static_cast<std::size_t>(M + 1));  // conductance of an eliminated cell at each depth
  cond[M] = T(1);
  for (int k = M - 1; k >= 0; --k) cond[k] = cond[k + 1] * T(3) / T(5);
  std::vector<std::array<T, 3>> offs;
  offs.reserve(static_cast<std::size_t>((std::pow(3.0, M) - 1) / 2) + 1);

  // Returns the corner loads of the eliminated cell and records midpoint offsets in cell order.
  std::function<std::array<T, 3>(std::array<Lattice, 3>, int)> up = [&](std::array<Lattice, 3> c, int depth) {
    if (depth == M) return std::array<T, 3>{T(0), T(0), T(0)};
    std::size_t me = offs.size();
    offs.push_back({T(0), T(0), T(0)});
    std::array<Lattice, 3> m{midpoint(c[0], c[1]), midpoint(c[0], c[2]), midpoint(c[1], c[2])};
    auto L0 = up({c[0], m[0], m[1]}, depth + 1);
    auto L1 = up({m[0], c[1], m[2]}, depth + 1);
    auto L2 = up({m[1], m[2], c[2]}, depth + 1);
    std::array<T, 3> bm{r[g.index(m[0])] + L0[1] + L1[0], r[g.index(m[1])] + L0[2] + L2[0],
                        r[g.index(m[2])] + L1[2] + L2[1]};
    const T& a = cond[depth + 1];
    T half_sum = (bm[0] + bm[1] + bm[2]) / T(2);
    T scale = T(5) * a;
    std::array<T, 3> t{(bm[0] + half_sum) / scale, (bm[1] + half_sum) / scale, (bm[2] + half_sum) / scale};
    offs[me] = t;
    return std::array<T, 3>{L0[0] + a * (t[0] + t[1]), L1[1] + a * (t[0] + t[2]), L2[2] + a * (t[1] + t[2])};
  };
  up(detail::root_cell(g), 0);

  std::vector<T> u(g.size(), T(0));
  for (int c = 0; c < 3; ++c) u[g.boundary_index(c)] = boundary[c];
  std::int64_t id = 0;
  detail::refine_cells<T>(g, detail::root_cell(g), 0, id, u,
                          [&](std::int64_t cell, int k) { return offs[static_cast<std::size_t>(cell)][k]; });
  return u;
}

enum class RhsScheme {
  collocation,  // r(z) = -(2/3) 5^{-m} f(z)
  corrected     // cellwise harmonic mass plus a Green correction driven by the next Laplacian
};

inline std::string to_string(RhsScheme s) { return s == RhsScheme::collocation ? "collocation" : "corrected"; }

// Cell integrals of the harmonic basis h_i (h_i(q_j) = delta_ij): mass[i][j] = <h_i, h_j>_2 and
// green[i][j] = <h_i, G h_j>_2, computed exactly from the monomial tables.
struct CellMoments {
  std::array<std::array<Rational, 3>, 3> mass;
  std::array<std::array<Rational, 3>, 3> green;
};

inline const CellMoments& cell_moments() {
  static const CellMoments cm = [] {
    std::array<Poly, 3> h{Poly::monomial(0, 1) + Poly::monomial(0, 2, 2),
                          Poly::monomial(0, 2, -1) + Poly::monomial(0, 3),
                          Poly::monomial(0, 2, -1) - Poly::monomial(0, 3)};
    CellMoments r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        r.mass[i][j] = l2_inner(h[i], h[j]);
        r.green[i][j] = l2_inner(h[i], green_apply(h[j]));
      }
    return r;
  }();
  return cm;
}

struct EvalOptions {
  RhsScheme scheme = RhsScheme::corrected;
  unsigned precision_bits = default_precision_bits;
};

template <class T>
std::array<T, 3> boundary_values_as(const Poly& f) {
  return {from_rational<T>(boundary_value(f, Corner::q0)), from_rational<T>(boundary_value(f, Corner::q1)),
          from_rational<T>(boundary_value(f, Corner::q2))};
}

// Values of f on V_M from the chain u_i = D^i f: the top layer is harmonic, each lower layer solves the
// discrete Poisson problem with exact boundary data.
// For u with D u = f, testing against the level-M tent psi_z gives sum_{y~z}(u(z)-u(y)) = -(3/5)^M int f psi_z.
// The collocation scheme replaces the integral by (2/3) 3^{-M} f(z). The corrected scheme writes f on each
// cell as its harmonic interpolant plus 5^{-M} G of the harmonic interpolant of D f.
template <class T>
std::vector<T> solve_chain(const Poly& f, const LevelGrid& g, RhsScheme scheme) {
  if (f.base_point() != 0) throw std::invalid_argument("grid evaluation needs base point q0");
  const int d = f.degree();
  const std::size_t n = g.size();
  if (d < 0) return std::vector<T>(n, T(0));
  std::vector<Poly> chain{f};
  for (int i = 1; i <= d; ++i) chain.push_back(laplacian(chain.back()));

  std::vector<std::vector<T>> layer(static_cast<std::size_t>(d + 1));
  {
    std::int64_t id = 0;
    auto& top = layer[d];
    top.assign(n, T(0));
    auto b = boundary_values_as<T>(chain[d]);
    for (int c = 0; c < 3; ++c) top[g.boundary_index(c)] = b[c];
    detail::refine_cells<T>(g, detail::root_cell(g), 0, id, top, [](std::int64_t, int) { return T(0); });
  }
  const T h = from_rational<T>(pow5q(-g.level()));
  const auto& cm = cell_moments();
  std::array<std::array<T, 3>, 3> mass, corr;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      mass[i][j] = from_rational<T>(cm.mass[i][j]);
      corr[i][j] = from_rational<T>(cm.green[i][j]);
    }
  for (int i = d - 1; i >= 0; --i) {
    std::vector<T> r(n, T(0));
    const auto& f1 = layer[i + 1];
    if (scheme == RhsScheme::collocation) {
      T w = T(2) / T(3) * h;
      for (std::size_t v = 3; v < n; ++v) r[v] = -w * f1[v];
    } else {
      const std::vector<T>* f2 = i + 2 <= d ? &layer[i + 2] : nullptr;
      for (auto& cell : g.cells())
        for (int a = 0; a < 3; ++a) {
          if (cell[a] < 3) continue;
          T s(0);
          for (int b = 0; b < 3; ++b) {
            s += mass[a][b] * f1[cell[b]];
            if (f2) s += h * corr[a][b] * (*f2)[cell[b]];
          }
          r[cell[a]] -= h * s;
        }
    }
    layer[i] = dirichlet_solve<T>(g, boundary_values_as<T>(chain[i]), r);
  }
  return layer[0];
}

template <class T>
FieldOnGrid<T> restrict_field(const FieldOnGrid<T>& fine, int m) {
  if (m > fine.grid->level()) throw std::invalid_argument("cannot restrict to a finer level");
  FieldOnGrid<T> out;
  out.grid = build_grid(m);
  out.exact = fine.exact;
  out.precision_bits = fine.precision_bits;
  const std::int64_t s = std::int64_t(1) << (fine.grid->level() - m);
  out.values.reserve(out.grid->size());
  for (std::size_t i = 0; i < out.grid->size(); ++i) {
    Lattice p = out.grid->lattice(static_cast<int>(i));
    out.values.push_back(fine.values[fine.grid->index(Lattice{p.a * s, p.b * s})]);
  }
  return out;
}

// Field of f on V_{solve_level}, without restriction.
template <class T = HighFloat>
FieldOnGrid<T> eval_poly_fine(const Poly& f, int solve_level, const EvalOptions& opt = {}) {
  if constexpr (std::is_same_v<T, HighFloat>) set_working_precision(opt.precision_bits);
  FieldOnGrid<T> out;
  out.grid = build_grid(solve_level);
  out.values = solve_chain<T>(f, *out.grid, opt.scheme);
  out.exact = f.degree() <= 0 && std::is_same_v<T, Rational>;
  if constexpr (std::is_same_v<T, HighFloat>) out.precision_bits = opt.precision_bits;
  return out;
}

// Values of f on V_m, computed on V_{solve_level} and restricted. Exact only for harmonic f.
template <class T = HighFloat>
FieldOnGrid<T> eval_poly_grid(const Poly& f, int m, int solve_level, const EvalOptions& opt = {}) {
  if (solve_level < m) throw std::invalid_argument("solve level must be at least the output level");
  return restrict_field(eval_poly_fine<T>(f, solve_level, opt), m);
}

// Scale factor of P_{j,k} under one application of F_0.
inline Rational spine_scale(int j, int k) {
  if (k == 1) return pow5q(-j);
  if (k == 2) return Rational(3, 5) * pow5q(-j);
  return pow5q(-(j + 1));
}

// Exact value of f at F_i^n(q_target); f must be based at q_i. Values at q_i itself (target == i) are
// accepted only for n = 0.
inline Rational eval_spine_exact(const Poly& f, int i, int n, int target) {
  if (i < 0 || i > 2 || target < 0 || target > 2) throw std::invalid_argument("corner indices must be 0, 1 or 2");
  if (n < 0) throw std::invalid_argument("spine depth must be nonnegative");
  if (target == i && n > 0) throw std::invalid_argument("F_i^n(q_i) = q_i is not a spine point for n > 0");
  if (!f.is_zero() && f.base_point() != i)
    throw std::invalid_argument("spine of q" + std::to_string(i) + " needs a polynomial based there");
  Corner w = rotated_corner(i, corner_of(target));
  Rational s = 0;
  for (auto& [m, c] : f.terms()) s += c * pow_q(spine_scale(m.j, m.k), static_cast<unsigned>(n)) * coeffs().value(m.j, m.k, w);
  return s;
}

// (n, target) when v = F_i^n(q_target) for some n >= 0 (any target, n = 0 allowed), else nullopt.
inline std::optional<std::pair<int, int>> spine_position(const VertexAddress& v, int i) {
  VertexAddress c = v.canonical();
  if (c.word.empty()) return std::make_pair(0, c.corner);
  auto all_i = [&](const std::string& w) { return std::all_of(w.begin(), w.end(), [&](char x) { return x - '0' == i; }); };
  if (all_i(c.word) && c.corner != i) return std::make_pair(static_cast<int>(c.word.size()), c.corner);
  VertexAddress a = c.alternate();
  if (all_i(a.word) && a.corner != i) return std::make_pair(static_cast<int>(a.word.size()), a.corner);
  return std::nullopt;
}

inline std::optional<Rational> eval_exact_if_spine(const Poly& f, const VertexAddress& v) {
  auto pos = spine_position(v, f.base_point());
  if (!pos) return std::nullopt;
  return eval_spine_exact(f, f.base_point(), pos->first, pos->second);
}

enum class Edge { bottom, left, right };

inline Edge parse_edge(const std::string& s) {
  if (s == "bottom") return Edge::bottom;
  if (s == "left") return Edge::left;
  if (s == "right") return Edge::right;
  throw std::invalid_argument("edge must be bottom, left or right");
}

inline std::string to_string(Edge e) { return e == Edge::bottom ? "bottom" : e == Edge::left ? "left" : "right"; }

// Points on a boundary edge with their dyadic parameter: bottom runs q1 -> q2, left q1 -> q0, right q2 -> q0.
template <class T>
std::vector<std::pair<Rational, T>> restrict_edge(const FieldOnGrid<T>& field, Edge e) {
  const auto& g = *field.grid;
  const std::int64_t N = g.resolution();
  std::vector<std::pair<Rational, T>> out;
  for (std::int64_t s = 0; s <= N; ++s) {
    Lattice p = e == Edge::bottom ? Lattice{s, 0} : e == Edge::left ? Lattice{0, s} : Lattice{N - s, s};
    out.emplace_back(Rational(Integer(s), Integer(N)), field.values[g.index(p)]);
  }
  return out;
}

struct SignChangeReport {
  int sign_changes = 0;
  int zeros = 0;      // values treated as zero
  int plateaus = 0;   // runs of two or more consecutive zeros
};

// Counts strict sign alternations between consecutive nonzero values; |v| <= threshold counts as zero.
template <class T, class U = T>
SignChangeReport count_sign_changes(const std::vector<T>& values, const U& threshold = U(0)) {
  using std::abs;
  SignChangeReport r;
  int last = 0, run = 0;
  for (auto& v : values) {
    if (abs(v) <= threshold) {
      ++r.zeros;
      if (++run == 2) ++r.plateaus;
      continue;
    }
    run = 0;
    int s = v > 0 ? 1 : -1;
    if (last != 0 && s != last) ++r.sign_changes;
    last = s;
  }
  return r;
}

// Integral of the piecewise harmonic interpolant of the field: 3^{-m} times the corner mean, summed over cells.
template <class T>
T integrate_harmonic_spline(const FieldOnGrid<T>& f) {
  T s(0);
  for (auto& c : f.grid->cells()) s += f.values[c[0]] + f.values[c[1]] + f.values[c[2]];
  T cells(static_cast<long>(f.grid->cells().size()));
  return s / (T(3) * cells);
}

}  // namespace sgop

#endif
