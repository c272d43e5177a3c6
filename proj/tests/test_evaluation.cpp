#include "sgop/studies.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sgop;

namespace {

Poly P(int j, int k) { return Poly::monomial(j, k); }

HighFloat max_abs(const std::vector<HighFloat>& v) {
  HighFloat m = 0;
  for (auto& x : v) m = std::max(m, HighFloat(abs(x)));
  return m;
}

double spine_error(const Poly& f, int solve_level, int depth, RhsScheme scheme) {
  EvalOptions opt;
  opt.scheme = scheme;
  auto field = eval_poly_fine<HighFloat>(f, solve_level, opt);
  double worst = 0;
  for (int n = 0; n <= depth; ++n)
    for (int t : {1, 2}) {
      auto v = VertexAddress::spine(0, n, t);
      HighFloat d = abs(field.at(v) - HighFloat(eval_spine_exact(f, 0, n, t)));
      worst = std::max(worst, d.convert_to<double>());
    }
  return worst;
}

}  // namespace

TEST(Grid, Sizes) {
  auto g0 = build_grid(0);
  EXPECT_EQ(g0->size(), 3u);
  EXPECT_EQ(g0->edge_count(), 3u);
  EXPECT_EQ(build_grid(1)->size(), 6u);
  EXPECT_EQ(build_grid(2)->size(), 15u);
  for (int m = 0; m <= 7; ++m) {
    auto g = build_grid(m);
    EXPECT_EQ(g->size(), LevelGrid::expected_size(m));
    EXPECT_EQ(2 * g->size(), 3 * (static_cast<std::size_t>(std::pow(3, m)) + 1));
  }
}

TEST(Grid, BoundaryAndAdjacency) {
  for (int m = 0; m <= 5; ++m) {
    auto g = build_grid(m);
    for (int c = 0; c < 3; ++c) {
      int i = g->boundary_index(c);
      EXPECT_TRUE(g->is_boundary(i));
      EXPECT_EQ(g->address(i).word, "");
      EXPECT_EQ(g->address(i).corner, c);
      EXPECT_EQ(g->neighbors(i).size(), 2u);
    }
    for (std::size_t i = 3; i < g->size(); ++i) EXPECT_EQ(g->neighbors(static_cast<int>(i)).size(), 4u);
    // adjacency is exactly the set of pairs sharing a cell
    std::set<std::pair<int, int>> from_cells, from_adj;
    for (auto& c : g->cells())
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          if (a != b) from_cells.insert({c[a], c[b]});
    for (std::size_t i = 0; i < g->size(); ++i)
      for (int j : g->neighbors(static_cast<int>(i))) from_adj.insert({static_cast<int>(i), j});
    EXPECT_EQ(from_cells, from_adj);
    EXPECT_EQ(g->cells().size(), static_cast<std::size_t>(std::pow(3, m)));
  }
}

TEST(Grid, Coordinates) {
  auto g = build_grid(1);
  EXPECT_EQ(g->x(g->boundary_index(0)), Rational(1, 2));
  EXPECT_EQ(g->y_sqrt3(g->boundary_index(0)), Rational(1, 2));
  EXPECT_EQ(g->x(g->boundary_index(1)), 0);
  EXPECT_EQ(g->x(g->boundary_index(2)), 1);
  int mid01 = g->index(VertexAddress{"0", 1});
  EXPECT_EQ(g->x(mid01), Rational(1, 4));
  EXPECT_EQ(g->y_sqrt3(mid01), Rational(1, 4));
}

TEST(Address, Canonicalization) {
  auto g = build_grid(4);
  const std::vector<std::string> words{"", "0", "12", "201"};
  for (auto& w : words)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        VertexAddress a{w + char('0' + i), j}, b{w + char('0' + j), i};
        EXPECT_EQ(a.canonical().str(), b.canonical().str());
        EXPECT_EQ(g->index(a), g->index(b));
      }
  // trailing letters equal to the corner do not change the point
  EXPECT_EQ(VertexAddress::parse("011q1").canonical().str(), VertexAddress::parse("0q1").canonical().str());
  EXPECT_EQ(VertexAddress::parse("01q2").str(), "01q2");
  EXPECT_THROW(VertexAddress::parse("3q1"), std::invalid_argument);
  for (std::size_t i = 0; i < g->size(); ++i) {
    auto& a = g->address(static_cast<int>(i));
    EXPECT_EQ(g->index(VertexAddress::parse(a.str())), static_cast<int>(i));
  }
}

TEST(Harmonic, Examples) {
  auto h = harmonic_extend<Rational>({Rational(0), Rational(-1, 2), Rational(-1, 2)}, 1);
  EXPECT_EQ(h.at(VertexAddress{"0", 1}), Rational(-3, 10));
  EXPECT_EQ(h.at(VertexAddress{"0", 1}), Rational(3, 5) * beta(0));
  EXPECT_EQ(h.at(VertexAddress{"1", 2}), Rational(-2, 5));
  auto c = harmonic_extend<Rational>({Rational(7, 3), Rational(7, 3), Rational(7, 3)}, 4);
  for (auto& v : c.values) EXPECT_EQ(v, Rational(7, 3));
}

TEST(Harmonic, DiscreteHarmonicAtEveryInteriorVertex) {
  for (int m = 1; m <= 4; ++m) {
    auto h = harmonic_extend<Rational>({Rational(1), Rational(-2), Rational(5, 7)}, m);
    auto& g = *h.grid;
    for (std::size_t i = 3; i < g.size(); ++i) {
      Rational s = 0;
      for (int j : g.neighbors(static_cast<int>(i))) s += h.values[j];
      EXPECT_EQ(4 * h.values[i], s);
    }
  }
}

TEST(Harmonic, MeanValueIdentity) {
  for (int m = 0; m <= 6; ++m) {
    std::array<Rational, 3> b{Rational(2), Rational(-1, 3), Rational(5, 4)};
    auto h = harmonic_extend<Rational>(b, m);
    EXPECT_EQ(integrate_harmonic_spline(h), (b[0] + b[1] + b[2]) / 3);
  }
}

TEST(Dirichlet, MatchesDenseSolve) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-9, 9);
  for (int m = 1; m <= 3; ++m) {
    auto g = build_grid(m);
    const std::size_t n = g->size();
    std::vector<Rational> r(n, Rational(0));
    for (std::size_t i = 3; i < n; ++i) r[i] = Rational(num(rng), 7);
    std::array<Rational, 3> b{Rational(num(rng)), Rational(num(rng), 2), Rational(num(rng), 3)};
    auto u = dirichlet_solve<Rational>(*g, b, r);
    // dense system on the interior
    const std::size_t ni = n - 3;
    Matrix<Rational> A(ni, std::vector<Rational>(ni, Rational(0)));
    std::vector<Rational> rhs(ni);
    for (std::size_t i = 3; i < n; ++i) {
      rhs[i - 3] = r[i];
      for (int j : g->neighbors(static_cast<int>(i))) {
        A[i - 3][i - 3] += 1;
        if (j < 3)
          rhs[i - 3] += b[static_cast<std::size_t>(g->address(j).corner)];
        else
          A[i - 3][static_cast<std::size_t>(j) - 3] -= 1;
      }
    }
    auto x = solve(A, rhs);
    ASSERT_TRUE(x.has_value());
    for (int c = 0; c < 3; ++c) EXPECT_EQ(u[g->boundary_index(c)], b[c]);
    for (std::size_t i = 3; i < n; ++i) EXPECT_EQ(u[i], (*x)[i - 3]) << m << ' ' << i;
  }
}

TEST(Spine, Examples) {
  for (int j = 0; j <= 4; ++j)
    for (int m = 0; m <= 4; ++m) {
      EXPECT_EQ(eval_spine_exact(P(j, 1), 0, m, 1), pow_q(pow5q(-j), m) * alpha(j));
      EXPECT_EQ(eval_spine_exact(P(j, 3), 0, m, 2), -pow_q(pow5q(-(j + 1)), m) * gamma(j));
      EXPECT_EQ(eval_spine_exact(P(j, 2), 0, m, 1), eval_spine_exact(P(j, 2), 0, m, 2));
    }
  for (int m = 0; m <= 5; ++m) EXPECT_EQ(eval_spine_exact(P(0, 1), 0, m, 2), 1);
  EXPECT_THROW(eval_spine_exact(P(1, 1), 0, 2, 0), std::invalid_argument);
}

TEST(Spine, ExactIfSpine) {
  auto v = eval_exact_if_spine(P(2, 1), VertexAddress{"00", 1});
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(*v, eval_spine_exact(P(2, 1), 0, 2, 1));
  EXPECT_FALSE(eval_exact_if_spine(P(2, 1), VertexAddress{"01", 2}).has_value());
}

TEST(EvalGrid, HarmonicIsExact) {
  for (int k = 1; k <= 3; ++k) {
    Poly f = P(0, k);
    auto u = eval_poly_grid<Rational>(f, 3, 5);
    auto h = harmonic_extend<Rational>({boundary_value(f, Corner::q0), boundary_value(f, Corner::q1),
                                        boundary_value(f, Corner::q2)},
                                       3);
    EXPECT_EQ(u.values, h.values);
  }
}

TEST(EvalGrid, QuadraticsExactWithCorrectedScheme) {
  for (int k = 1; k <= 3; ++k)
    for (int j = 1; j <= 2; ++j) {
      auto u = eval_poly_fine<Rational>(P(j, k), 5);
      for (int n = 0; n <= 5; ++n)
        for (int t : {1, 2}) EXPECT_EQ(u.at(VertexAddress::spine(0, n, t)), eval_spine_exact(P(j, k), 0, n, t));
    }
}

TEST(EvalGrid, ApproachesSpineValue) {
  Rational target = pow5q(-1) * alpha(1);
  EXPECT_EQ(target, Rational(1, 30));
  double prev = 1;
  for (int L = 2; L <= 7; ++L) {
    EvalOptions opt;
    opt.scheme = RhsScheme::collocation;
    auto u = eval_poly_grid<HighFloat>(P(1, 1), 1, L, opt);
    double err = std::abs((u.at(VertexAddress{"0", 1}) - HighFloat(target)).convert_to<double>());
    EXPECT_LE(err, prev + 1e-30);
    prev = err;
  }
  EXPECT_LT(prev, 1e-4);
  auto c = eval_poly_grid<Rational>(P(1, 1), 1, 4);
  EXPECT_EQ(c.at(VertexAddress{"0", 1}), target);
}

TEST(EvalGrid, K3VanishesAtBottomMidpoint) {
  for (int j = 0; j <= 4; ++j) {
    auto u = eval_poly_grid<Rational>(P(j, 3), 1, 5);
    EXPECT_EQ(u.at(VertexAddress{"1", 2}), 0);
  }
}

TEST(EvalGrid, ScalingConsistency) {
  for (int k = 1; k <= 3; ++k)
    for (int j = 0; j <= 4; ++j)
      for (RhsScheme s : {RhsScheme::corrected, RhsScheme::collocation}) {
        double prev = 1e300;
        for (int L = 4; L <= 8; ++L) {
          double e = spine_error(P(j, k), L, 4, s);
          EXPECT_LE(e, prev * (1 + 1e-9) + 1e-35) << j << ',' << k << " L=" << L;
          prev = e;
        }
        EXPECT_LT(prev, 1e-6) << j << ',' << k;
      }
}

TEST(EvalGrid, Antisymmetry) {
  auto s = gram_schmidt(SobolevParams::sobolev1(1), 3, 5);
  for (int n : {1, 3, 5}) {
    auto u = eval_poly_grid<HighFloat>(s.at(n), 5, 7);
    auto& g = *u.grid;
    HighFloat scale = max_abs(u.values);
    for (std::size_t i = 0; i < g.size(); ++i) {
      int r = g.reflect(static_cast<int>(i));
      EXPECT_LE(abs(u.values[i] + u.values[r]), scale * HighFloat("1e-30"));
    }
  }
}

TEST(EvalGrid, IntegrationOracle) {
  for (int k = 1; k <= 3; ++k)
    for (int j = 0; j <= 3; ++j) {
      auto u = eval_poly_grid<Rational>(P(j, k), 6, 7);
      double err = std::abs((integrate_harmonic_spline(u) - monomial_integral(j, k)).convert_to<double>());
      EXPECT_LT(err, 2e-4) << j << ',' << k;
    }
}

TEST(EvalGrid, RejectsOtherBasePoint) {
  EXPECT_THROW(eval_poly_grid<HighFloat>(Poly::monomial(1, 3, 1, 2), 2, 3), std::invalid_argument);
  EXPECT_THROW(eval_poly_grid<HighFloat>(P(1, 1), 4, 3), std::invalid_argument);
}

TEST(Edge, Restriction) {
  auto u = eval_poly_grid<HighFloat>(P(2, 3), 7, 7);
  auto bottom = restrict_edge(u, Edge::bottom);
  ASSERT_EQ(bottom.size(), 129u);
  EXPECT_EQ(bottom.front().first, 0);
  EXPECT_EQ(bottom.back().first, 1);
  for (std::size_t i = 0; i < bottom.size(); ++i) {
    EXPECT_EQ(bottom[i].first, Rational(Integer(i), 128));
    EXPECT_LE(abs(bottom[i].second + bottom[bottom.size() - 1 - i].second), HighFloat("1e-35"));
  }
  auto h = harmonic_extend<Rational>({Rational(1), Rational(2), Rational(3)}, 0);
  auto left = restrict_edge(h, Edge::left);
  ASSERT_EQ(left.size(), 2u);
  EXPECT_EQ(left[0].second, 2);
  EXPECT_EQ(left[1].second, 1);
  auto right = restrict_edge(h, Edge::right);
  EXPECT_EQ(right[0].second, 3);
  EXPECT_EQ(parse_edge("right"), Edge::right);
  EXPECT_THROW(parse_edge("top"), std::invalid_argument);
}

TEST(SignChanges, Examples) {
  auto h = harmonic_extend<Rational>({Rational(0), Rational(1, 2), Rational(-1, 2)}, 5);
  std::vector<Rational> vals;
  for (auto& [t, v] : restrict_edge(h, Edge::bottom)) vals.push_back(v);
  auto r = count_sign_changes(vals);
  EXPECT_EQ(r.sign_changes, 1);
  EXPECT_EQ(r.zeros, 1);
  EXPECT_EQ(count_sign_changes(std::vector<Rational>(10, Rational(3))).sign_changes, 0);
  EXPECT_EQ(count_sign_changes(std::vector<double>{1, -1, 1}).sign_changes, 2);
  auto z = count_sign_changes(std::vector<double>{1, 0, 0, -2, 1e-40, 3}, 1e-30);
  EXPECT_EQ(z.sign_changes, 2);
  EXPECT_EQ(z.zeros, 3);
  EXPECT_EQ(z.plateaus, 1);
}

TEST(ZeroStudy, ReportShape) {
  auto z = zero_study(3, 1, 3, 5, 6, HighFloat("1e-30"));
  EXPECT_EQ(z.rows.size(), 3u * 2u * 3u);
  for (auto& row : z.rows) {
    EXPECT_GE(row.report.sign_changes, 0);
    EXPECT_GT(row.max_abs, 0);
  }
  // antisymmetric family: odd number of bottom-edge sign changes
  for (auto& row : z.rows)
    if (row.edge == Edge::bottom) EXPECT_EQ(row.report.sign_changes % 2, 1) << row.kind << row.n;
}
