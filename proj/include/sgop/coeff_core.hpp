#ifndef SGOP_COEFF_CORE_HPP
#define SGOP_COEFF_CORE_HPP

#include "rational.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgop {

// Boundary vertices q0, q1, q2 of the gasket.
enum class Corner : int { q0 = 0, q1 = 1, q2 = 2 };

enum class BoundaryKind { value, normal, tangential };

inline int index_of(Corner c) { return static_cast<int>(c); }
inline Corner corner_of(int i) {
  if (i < 0 || i > 2) throw std::out_of_range("corner index must be 0, 1 or 2");
  return static_cast<Corner>(i);
}

// Memoized alpha, beta, eta sequences. Caches only grow. Not thread safe: one
// table per thread, or external locking.
class CoeffTable {
 public:
  CoeffTable() {
    alpha_ = {Rational(1), Rational(1, 6)};
    beta_ = {Rational(-1, 2)};
    eta_ = {Rational(0)};
  }

  Rational alpha(int j) {
    if (j < 0) return 0;
    grow_alpha(j);
    return alpha_[j];
  }

  Rational beta(int j) {
    if (j < 0) return 0;
    grow_beta(j);
    return beta_[j];
  }

  Rational gamma(int j) {
    if (j < 0) return 0;
    return 3 * alpha(j + 1);
  }

  Rational eta(int j) {
    if (j < 0) return 0;
    grow_eta(j);
    return eta_[j];
  }

  Rational alpha_prime(int j) {
    if (j < 0) return 0;
    if (j == 0) return Rational(1, 2);
    return alpha(j);
  }

  // Values of P_{j,k} or its normal derivative at a boundary vertex.
  Rational boundary(int j, int k, Corner v, BoundaryKind kind) {
    check_family(k);
    if (j < 0) return 0;
    if (v == Corner::q0) {
      switch (kind) {
        case BoundaryKind::value: return (j == 0 && k == 1) ? 1 : 0;
        case BoundaryKind::normal: return (j == 0 && k == 2) ? 1 : 0;
        case BoundaryKind::tangential: return (j == 0 && k == 3) ? 1 : 0;
      }
    }
    if (kind == BoundaryKind::tangential)
      throw std::domain_error("tangential derivatives at q1 and q2 are not available");
    Rational at_q1;
    if (kind == BoundaryKind::value)
      at_q1 = k == 1 ? alpha(j) : k == 2 ? beta(j) : gamma(j);
    else
      at_q1 = k == 1 ? eta(j) : k == 2 ? -alpha_prime(j) : 3 * eta(j + 1);
    if (k == 3 && v == Corner::q2) return -at_q1;
    return at_q1;
  }

  Rational value(int j, int k, Corner v) { return boundary(j, k, v, BoundaryKind::value); }
  Rational normal(int j, int k, Corner v) { return boundary(j, k, v, BoundaryKind::normal); }

  // Integral of P_{j,k} against the standard self-similar measure.
  Rational integral(int j, int k) {
    check_family(k);
    if (j < 0) return 0;
    if (k == 1) return 2 * eta(j + 1);
    if (k == 2) return -2 * alpha(j + 1);
    return 0;
  }

  int computed_alpha() const { return static_cast<int>(alpha_.size()) - 1; }
  int computed_beta() const { return static_cast<int>(beta_.size()) - 1; }
  int computed_eta() const { return static_cast<int>(eta_.size()) - 1; }

  // Text cache: one "name index p/q" entry per line.
  void save(std::ostream& os) const {
    for (std::size_t j = 0; j < alpha_.size(); ++j) os << "alpha " << j << ' ' << to_string(alpha_[j]) << '\n';
    for (std::size_t j = 0; j < beta_.size(); ++j) os << "beta " << j << ' ' << to_string(beta_[j]) << '\n';
    for (std::size_t j = 0; j < eta_.size(); ++j) os << "eta " << j << ' ' << to_string(eta_[j]) << '\n';
  }

  // Entries must be contiguous from index 0; the seeds are checked.
  void load(std::istream& is) {
    std::vector<Rational> a, b, e;
    std::string name, value;
    std::size_t idx;
    while (is >> name >> idx >> value) {
      auto& dst = name == "alpha" ? a : name == "beta" ? b : name == "eta" ? e : a;
      if (name != "alpha" && name != "beta" && name != "eta") throw std::runtime_error("bad cache entry: " + name);
      if (idx != dst.size()) throw std::runtime_error("cache entries out of order");
      dst.push_back(parse_rational(value));
    }
    if (a.size() < 2 || a[0] != 1 || a[1] != Rational(1, 6)) throw std::runtime_error("cache seed mismatch (alpha)");
    if (b.empty() || b[0] != Rational(-1, 2)) throw std::runtime_error("cache seed mismatch (beta)");
    if (e.empty() || e[0] != 0) throw std::runtime_error("cache seed mismatch (eta)");
    if (b.size() > a.size() || e.size() > b.size()) throw std::runtime_error("cache tables inconsistent");
    alpha_ = std::move(a);
    beta_ = std::move(b);
    eta_ = std::move(e);
  }

 private:
  static void check_family(int k) {
    if (k < 1 || k > 3) throw std::invalid_argument("family must be 1, 2 or 3");
  }

  void grow_alpha(int j) {
    while (static_cast<int>(alpha_.size()) <= j) {
      int n = static_cast<int>(alpha_.size());
      Rational s = 0;
      for (int l = 1; l < n; ++l) s += alpha_[n - l] * alpha_[l];
      alpha_.push_back(Rational(Integer(4), pow5(n) - 5) * s);
    }
  }

  void grow_beta(int j) {
    grow_alpha(j);
    while (static_cast<int>(beta_.size()) <= j) {
      int n = static_cast<int>(beta_.size());
      Rational s = 0;
      for (int l = 0; l < n; ++l) {
        Integer w = 3 * pow5(n - l) - pow5(l + 1) + 6;
        s += Rational(w) * alpha_[n - l] * beta_[l];
      }
      beta_.push_back(Rational(Integer(2), 15 * (pow5(n) - 1)) * s);
    }
  }

  void grow_eta(int j) {
    grow_beta(j);
    while (static_cast<int>(eta_.size()) <= j) {
      int n = static_cast<int>(eta_.size());
      Rational s = 0;
      for (int l = 0; l < n; ++l) s += eta_[l] * beta_[n - l];
      eta_.push_back(Rational(pow5(n) + 1, Integer(2)) * alpha_[n] + 2 * s);
    }
  }

  std::vector<Rational> alpha_, beta_, eta_;
};

// Process-wide table used by the free functions below.
inline CoeffTable& coeffs() {
  static CoeffTable table;
  return table;
}

inline Rational alpha(int j) { return coeffs().alpha(j); }
inline Rational beta(int j) { return coeffs().beta(j); }
inline Rational gamma(int j) { return coeffs().gamma(j); }
inline Rational eta(int j) { return coeffs().eta(j); }
inline Rational alpha_prime(int j) { return coeffs().alpha_prime(j); }

inline Rational monomial_boundary(int j, int k, Corner v, BoundaryKind kind) {
  if (j < 0) throw std::invalid_argument("degree must be nonnegative");
  return coeffs().boundary(j, k, v, kind);
}

inline Rational monomial_integral(int j, int k) {
  if (j < 0) throw std::invalid_argument("degree must be nonnegative");
  return coeffs().integral(j, k);
}

// First index in [0, jmax] with beta_j == 0, or -1 if none.
inline int first_vanishing_beta(int jmax) {
  for (int j = 0; j <= jmax; ++j)
    if (beta(j) == 0) return j;
  return -1;
}

}  // namespace sgop

#endif
