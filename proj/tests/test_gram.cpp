#include "sgop/io.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sgop;

namespace {

Rational ap(int i) { return alpha_prime(i); }

// Closed forms for the L2 products of monomials at a common base point.
Rational closed_l2(int j, int a, int k, int b) {
  if (a > b) return closed_l2(k, b, j, a);
  if (a == 1 && b == 3) return 0;
  if (a == 2 && b == 3) return 0;
  const int ms = std::min(j, k);
  Rational s = 0;
  if (a == 1 && b == 1)
    for (int l = j - ms; l <= j; ++l) s += 2 * (alpha(j - l) * eta(k + l + 1) - alpha(k + l + 1) * eta(j - l));
  if (a == 2 && b == 2)
    for (int l = j - ms; l <= j; ++l) s += -2 * (beta(j - l) * alpha(k + l + 1) - beta(k + l + 1) * ap(j - l));
  if (a == 3 && b == 3)
    for (int l = j - ms; l <= j; ++l) s += 18 * (alpha(j - l + 1) * eta(k + l + 2) - alpha(k + l + 2) * eta(j - l + 1));
  if (a == 1 && b == 2)
    for (int l = 0; l <= j; ++l) s += -2 * (alpha(j - l) * alpha(k + l + 1) + beta(k + l + 1) * eta(j - l));
  return s;
}

Poly random_poly(std::mt19937& rng, int maxdeg) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4), deg(0, maxdeg), fam(1, 3), terms(1, 4);
  Poly f;
  int t = terms(rng);
  for (int i = 0; i < t; ++i) f.add_term(deg(rng), fam(rng), Rational(num(rng), den(rng)));
  return f;
}

Matrix<Rational> identity3() { return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}; }

}  // namespace

TEST(MonoInner, Examples) {
  auto L2 = SobolevParams::l2();
  EXPECT_EQ(mono_inner(L2, {0, 1}, {0, 1}), 1);
  for (auto p : {L2, SobolevParams::sobolev1(1), SobolevParams::sobolev({1, 2, Rational(1, 3)})})
    for (int j = 0; j <= 4; ++j)
      for (int k = 0; k <= 4; ++k) {
        EXPECT_EQ(mono_inner(p, {j, 1}, {k, 3}), 0);
        EXPECT_EQ(mono_inner(p, {j, 2}, {k, 3}), 0);
      }
  Rational expect = -2 * (beta(0) * alpha(1) - beta(1) * alpha_prime(0));
  EXPECT_EQ(mono_inner(L2, {0, 2}, {0, 2}), expect);
  EXPECT_EQ(expect, Rational(11, 90));
}

TEST(MonoInner, MatchesClosedForms) {
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      for (int j = 0; j <= 6; ++j)
        for (int k = 0; k <= 6; ++k)
          EXPECT_EQ(l2_mono(j, a, k, b), closed_l2(j, a, k, b)) << j << ',' << a << ' ' << k << ',' << b;
}

TEST(MonoInner, DiscreteIntegrationOracle) {
  // Integral of the product of two harmonic functions from their level-m piecewise harmonic splines.
  Rational exact = mono_inner(SobolevParams::l2(), {0, 2}, {0, 2});
  double prev = 1;
  for (int m = 3; m <= 6; ++m) {
    auto h = harmonic_extend<Rational>({Rational(0), Rational(-1, 2), Rational(-1, 2)}, m);
    FieldOnGrid<Rational> sq = h;
    for (auto& v : sq.values) v *= v;
    double err = std::abs((integrate_harmonic_spline(sq) - exact).convert_to<double>());
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(MonoInner, SobolevShiftIdentity) {
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      for (int j = 1; j <= 5; ++j)
        for (int k = 1; k <= 5; ++k) {
          Poly dj = laplacian(Poly::monomial(j, a)), dk = laplacian(Poly::monomial(k, b));
          EXPECT_EQ(l2_inner(dj, dk), l2_mono(j - 1, a, k - 1, b));
        }
  std::vector<Rational> chi{1, Rational(2, 3), 5};
  auto p = SobolevParams::sobolev(chi);
  auto& g = gram_matrix(p, 0, 4);
  for (std::size_t r = 0; r < g.basis.size(); ++r)
    for (std::size_t c = 0; c < g.basis.size(); ++c) {
      Rational s = 0;
      for (int l = 0; l < 3; ++l) {
        Mono x = g.basis[r], y = g.basis[c];
        if (x.j - l < 0 || y.j - l < 0) continue;
        s += chi[l] * l2_mono(x.j - l, x.k, y.j - l, y.k);
      }
      EXPECT_EQ(g.entries[r][c], s);
    }
}

TEST(MonoInner, K3AcrossBasePoints) {
  for (auto p : {SobolevParams::l2(), SobolevParams::sobolev1(Rational(1, 2))})
    for (int j = 0; j <= 4; ++j)
      for (int k = 0; k <= 4; ++k) {
        Rational same = mono_inner(p, {j, 3}, {k, 3});
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) EXPECT_EQ(mono_inner(p, {j, 3}, {k, 3}, b, c), b == c ? same : -same / 2);
      }
}

TEST(PolyInner, PositiveAndSymmetric) {
  std::mt19937 rng(12345);
  std::vector<SobolevParams> ps{SobolevParams::l2(), SobolevParams::sobolev1(Rational(1, 2)),
                                SobolevParams::sobolev({1, 1, 1})};
  for (int it = 0; it < 60; ++it) {
    Poly f = random_poly(rng, 4), g = random_poly(rng, 4);
    for (auto& p : ps) {
      EXPECT_EQ(poly_inner(p, f, g), poly_inner(p, g, f));
      if (!f.is_zero()) EXPECT_GT(poly_inner(p, f, f), 0);
    }
  }
}

TEST(PolyInner, SobolevAddsLaplacianTerm) {
  for (Rational chi : {Rational(1), Rational(1, 3), Rational(7)}) {
    auto S = SobolevParams::sobolev1(chi);
    Poly p = Poly::monomial(1, 1);
    EXPECT_EQ(poly_inner(S, p, p), l2_norm_sq(p) + chi * 1);
  }
}

TEST(Energy, Examples) {
  std::mt19937 rng(7);
  for (int it = 0; it < 10; ++it) EXPECT_EQ(energy_inner(Poly::monomial(0, 1), random_poly(rng, 3)), 0);
  Poly h2 = Poly::monomial(0, 2), h3 = Poly::monomial(0, 3);
  EXPECT_EQ(energy_inner(h2, h2), 2 * Rational(-1, 2) * Rational(-1, 2));
  EXPECT_EQ(energy_inner(h2, h3), 0);
  EXPECT_EQ(energy_inner(h3, h2), 0);
}

TEST(Energy, Symmetric) {
  std::mt19937 rng(99);
  for (int it = 0; it < 30; ++it) {
    Poly f = random_poly(rng, 3), g = random_poly(rng, 3);
    EXPECT_EQ(energy_inner(f, g), energy_inner(g, f));
  }
}

TEST(Energy, DiscreteGraphEnergyOracle) {
  auto discrete = [](const FieldOnGrid<Rational>& u) {
    Rational e = 0;
    for (auto& c : u.grid->cells())
      for (int a = 0; a < 3; ++a) {
        Rational d = u.values[c[a]] - u.values[c[(a + 1) % 3]];
        e += d * d;
      }
    int m = u.grid->level();
    return e * pow_q(Rational(5, 3), static_cast<unsigned>(m));
  };
  // Renormalized energy of a harmonic function is the same at every level.
  for (int m = 0; m <= 5; ++m) {
    auto h = harmonic_extend<Rational>({Rational(0), Rational(-1, 2), Rational(-1, 2)}, m);
    EXPECT_EQ(discrete(h), Rational(1, 2));
  }
  // Nonharmonic case converges.
  Poly f = Poly::monomial(1, 2);
  Rational exact = energy_inner(f, f);
  double prev = 1;
  for (int m = 3; m <= 6; ++m) {
    auto u = eval_poly_grid<Rational>(f, m, m);
    double err = std::abs((discrete(u) - exact).convert_to<double>());
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-3 * std::abs(exact.convert_to<double>()));
}

TEST(Extended, ReducesWhenWeightsZero) {
  SobolevParams p = SobolevParams::sobolev1(2);
  p.energy_weights = {0};
  p.boundary_matrices = {Matrix<Rational>(3, std::vector<Rational>(3, 0))};
  std::mt19937 rng(3);
  for (int it = 0; it < 10; ++it) {
    Poly f = random_poly(rng, 3), g = random_poly(rng, 3);
    EXPECT_EQ(extended_inner(p, f, g), poly_inner(SobolevParams::sobolev1(2), f, g));
    EXPECT_EQ(inner(SobolevParams::l2(), f, g), l2_inner(f, g));
  }
}

TEST(Extended, Examples) {
  Poly one = Poly::monomial(0, 1);
  SobolevParams p;
  p.boundary_matrices = {identity3()};
  EXPECT_EQ(extended_inner(p, one, one), 1 + 3);
  SobolevParams e;
  e.energy_weights = {1};
  EXPECT_EQ(extended_inner(e, one, one), 1);
  // Energy term on a harmonic function.
  Poly h = Poly::monomial(0, 2);
  EXPECT_EQ(extended_inner(e, h, h), l2_norm_sq(h) + energy_inner(h, h));
}

TEST(Extended, RejectsNonPsdMatrix) {
  SobolevParams p;
  p.boundary_matrices = {{{1, 0, 0}, {0, -1, 0}, {0, 0, 1}}};
  Poly one = Poly::monomial(0, 1);
  EXPECT_THROW(extended_inner(p, one, one), std::invalid_argument);
  SobolevParams q;
  q.boundary_matrices = {{{1, 2, 0}, {0, 1, 0}, {0, 0, 1}}};
  EXPECT_THROW(extended_inner(q, one, one), std::invalid_argument);
}

TEST(Extended, OtherBasePointRejected) {
  SobolevParams p;
  p.energy_weights = {1};
  Poly f = Poly::monomial(1, 3, 1, 1);
  EXPECT_THROW(extended_inner(p, f, f), std::invalid_argument);
}

TEST(Params, Validation) {
  SobolevParams p;
  p.chi = {2};
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.chi = {1, -1};
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_NO_THROW(SobolevParams::sobolev({1, 0, 3}).validate());
}

TEST(GramMatrix, Examples) {
  auto& g3 = gram_matrix(SobolevParams::l2(), 3, 0);
  ASSERT_EQ(g3.entries.size(), 1u);
  EXPECT_EQ(g3.entries[0][0], 18 * (alpha(1) * eta(2) - alpha(2) * eta(1)));
  EXPECT_EQ(g3.entries[0][0], Rational(1, 30));

  auto& g = gram_matrix(SobolevParams::l2(), 0, 1);
  ASSERT_EQ(g.basis.size(), 6u);
  EXPECT_TRUE(is_symmetric(g.entries));
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 6; ++c)
      if ((g.basis[r].k == 3) != (g.basis[c].k == 3)) EXPECT_EQ(g.entries[r][c], 0);
}

TEST(GramMatrix, MixedOrder) {
  auto b = basis(0, 2);
  ASSERT_EQ(b.size(), 9u);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(b[i].j, static_cast<int>(i / 3));
    EXPECT_EQ(b[i].k, static_cast<int>(i % 3) + 1);
  }
}

TEST(GramMatrix, SymmetricForAnyParams) {
  for (auto p : {SobolevParams::l2(), SobolevParams::sobolev1(Rational(3, 7)), SobolevParams::sobolev({1, 1, 2})})
    for (int fam = 0; fam <= 3; ++fam) EXPECT_TRUE(is_symmetric(gram_matrix(p, fam, 3).entries));
}

TEST(GramMatrix, PositiveDefinite) {
  for (auto p : {SobolevParams::l2(), SobolevParams::sobolev1(1)}) {
    for (int fam = 1; fam <= 3; ++fam) {
      auto minors = leading_minors(gram_matrix(p, fam, 10).entries);
      for (auto& x : minors) EXPECT_GT(x, 0) << fam;
    }
    for (auto& x : leading_minors(gram_matrix(p, 0, 5).entries)) EXPECT_GT(x, 0);
  }
}

TEST(GramMatrix, JsonShape) {
  auto& g = gram_matrix(SobolevParams::sobolev1(Rational(1, 2)), 2, 1);
  Json j = to_json(g);
  ASSERT_TRUE(j.contains("params"));
  EXPECT_EQ(j["basis"][1][0], 1);
  EXPECT_EQ(j["basis"][1][1], 2);
  EXPECT_EQ(j["entries"][0][0], to_string(g.entries[0][0]));
  EXPECT_EQ(j["params"]["chi"][1], "1/2");
}
