#ifndef SGOP_POLY_HPP
#define SGOP_POLY_HPP

#include "coeff_core.hpp"

#include <compare>
#include <map>
#include <stdexcept>
#include <string>

namespace sgop {

// Index of the monomial P_{j,k}.
struct Mono {
  int j = 0;
  int k = 1;
  auto operator<=>(const Mono&) const = default;
};

// Finite combination of monomials P^{(b)}_{j,k} based at q_b, where P^{(b)} = P^{(0)} o R_b and R_b is
// the rotation sending q_b to q_0, q_{b+1} to q_1 and q_{b+2} to q_2. Zero coefficients are never stored.
class Poly {
 public:
  using Map = std::map<Mono, Rational>;

  Poly() = default;
  explicit Poly(int base_point) : base_(check_base(base_point)) {}

  static Poly monomial(int j, int k, const Rational& c = 1, int base_point = 0) {
    if (j < 0) throw std::invalid_argument("monomial degree must be nonnegative");
    if (k < 1 || k > 3) throw std::invalid_argument("family must be 1, 2 or 3");
    Poly p(base_point);
    p.add_term(j, k, c);
    return p;
  }

  const Map& terms() const { return c_; }
  int base_point() const { return base_; }
  bool is_zero() const { return c_.empty(); }
  std::size_t size() const { return c_.size(); }

  Rational coeff(int j, int k) const {
    auto it = c_.find({j, k});
    return it == c_.end() ? Rational(0) : it->second;
  }

  // Largest j with a nonzero coefficient, -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (auto& [m, c] : c_) d = std::max(d, m.j);
    return d;
  }

  bool is_monic(int n, int k) const {
    if (coeff(n, k) != 1) return false;
    for (auto& [m, c] : c_)
      if (m.j > n) return false;
    return true;
  }

  void add_term(int j, int k, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = c_.try_emplace({j, k}, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) c_.erase(it);
    }
  }

  // this += c * other
  Poly& axpy(const Rational& c, const Poly& other) {
    if (c == 0 || other.is_zero()) return *this;
    adopt_base(other);
    for (auto& [m, v] : other.c_) add_term(m.j, m.k, c * v);
    return *this;
  }

  Poly& operator+=(const Poly& o) { return axpy(1, o); }
  Poly& operator-=(const Poly& o) { return axpy(-1, o); }
  Poly& operator*=(const Rational& s) {
    if (s == 0) {
      c_.clear();
      return *this;
    }
    for (auto& [m, v] : c_) v *= s;
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator-(Poly a) { return a *= Rational(-1); }
  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.base_ == b.base_ && a.c_ == b.c_;
  }

  // Restriction to a single family.
  Poly family_part(int k) const {
    Poly p(base_);
    for (auto& [m, v] : c_)
      if (m.k == k) p.c_.emplace(m, v);
    return p;
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::string s;
    for (auto& [m, v] : c_) {
      if (!s.empty()) s += " + ";
      s += "(" + to_string(v) + ")P" + std::to_string(m.j) + "," + std::to_string(m.k);
    }
    return s;
  }

 private:
  static int check_base(int b) {
    if (b < 0 || b > 2) throw std::invalid_argument("base point must be 0, 1 or 2");
    return b;
  }
  void adopt_base(const Poly& o) {
    if (is_zero()) {
      base_ = o.base_;
      return;
    }
    if (o.base_ != base_) throw std::invalid_argument("polynomials have different base points");
  }

  Map c_;
  int base_ = 0;
};

// Lowers every degree by one and drops the harmonic terms.
inline Poly laplacian(const Poly& f) {
  Poly g(f.base_point());
  for (auto& [m, c] : f.terms())
    if (m.j > 0) g.add_term(m.j - 1, m.k, c);
  return g;
}

inline Poly laplacian_pow(Poly f, int times) {
  for (int i = 0; i < times; ++i) f = laplacian(f);
  return f;
}

// Dirichlet Green operator: Laplacian of the result is f and the result vanishes on the boundary.
// The Green function commutes with rotations, so the rule is the same for every base point.
inline Poly green_apply(const Poly& f) {
  Poly g(f.base_point());
  auto& t = coeffs();
  for (auto& [m, c] : f.terms()) {
    g.add_term(m.j + 1, m.k, c);
    if (m.k == 1) g.add_term(0, 2, 2 * t.alpha(m.j + 1) * c);
    else if (m.k == 2) g.add_term(0, 2, 2 * t.beta(m.j + 1) * c);
    else g.add_term(0, 3, -2 * t.gamma(m.j + 1) * c);
  }
  return g;
}

inline Poly green_pow(Poly f, int times) {
  for (int i = 0; i < times; ++i) f = green_apply(f);
  return f;
}

// Corner of the base-0 picture that the rotation R_b sends q_v to.
inline Corner rotated_corner(int base_point, Corner v) { return corner_of((index_of(v) - base_point + 3) % 3); }

inline Rational boundary_value(const Poly& f, Corner v) {
  Corner w = rotated_corner(f.base_point(), v);
  Rational s = 0;
  for (auto& [m, c] : f.terms()) s += c * coeffs().value(m.j, m.k, w);
  return s;
}

inline Rational normal_derivative(const Poly& f, Corner v) {
  Corner w = rotated_corner(f.base_point(), v);
  Rational s = 0;
  for (auto& [m, c] : f.terms()) s += c * coeffs().normal(m.j, m.k, w);
  return s;
}

}  // namespace sgop

#endif
