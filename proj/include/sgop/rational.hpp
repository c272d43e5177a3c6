#ifndef SGOP_RATIONAL_HPP
#define SGOP_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cctype>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sgop {

namespace bmp = boost::multiprecision;

// Expression templates are off so that `auto` always holds a value.
using Integer = bmp::number<bmp::gmp_int, bmp::et_off>;
using Rational = bmp::number<bmp::gmp_rational, bmp::et_off>;
using HighFloat = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;

inline constexpr unsigned default_precision_bits = 128;

inline unsigned bits_to_digits10(unsigned bits) { return static_cast<unsigned>(bits * 0.30102999566398120) + 1; }

// Sets the working precision of newly created HighFloat values.
inline void set_working_precision(unsigned bits) { HighFloat::default_precision(bits_to_digits10(bits)); }

inline Integer pow_int(long base, unsigned e) {
  Integer r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

inline Integer pow5(unsigned e) { return pow_int(5, e); }

// 5^e for any sign of e.
inline Rational pow5q(int e) {
  if (e >= 0) return Rational(pow5(static_cast<unsigned>(e)));
  return Rational(Integer(1), pow5(static_cast<unsigned>(-e)));
}

inline Rational pow_q(const Rational& x, unsigned e) {
  Rational r = 1;
  for (unsigned i = 0; i < e; ++i) r *= x;
  return r;
}

inline Integer numerator_of(const Rational& q) { return bmp::numerator(q); }
inline Integer denominator_of(const Rational& q) { return bmp::denominator(q); }

// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_string(const Rational& q) {
  Integer d = denominator_of(q);
  if (d == 1) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + d.str();
}

// Accepts "p", "p/q", decimals such as "-0.125" and scientific forms such as "1e6" or "2.5e-3".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&]() { return std::invalid_argument("not a rational number: '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto parse_int = [&](const std::string& t) {
    if (t.empty()) throw bad();
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw bad();
    for (std::size_t k = i; k < t.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(t[k]))) throw bad();
    // strip leading zeros: the Integer string constructor reads "0..." as octal
    std::size_t d = i;
    while (d + 1 < t.size() && t[d] == '0') ++d;
    return Integer((t[0] == '-' ? "-" : "") + t.substr(d));
  };
  if (slash != std::string::npos) {
    Integer p = parse_int(s.substr(0, slash));
    Integer q = parse_int(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(p, q);
  }
  std::string mant = s;
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    mant = s.substr(0, epos);
    std::string e = s.substr(epos + 1);
    exp10 = parse_int(e).convert_to<long>();
  }
  auto dot = mant.find('.');
  if (dot != std::string::npos) {
    std::string frac = mant.substr(dot + 1);
    std::string whole = mant.substr(0, dot);
    if (frac.empty() && (whole.empty() || whole == "-" || whole == "+")) throw bad();
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    mant = whole + frac;
    exp10 -= static_cast<long>(frac.size());
  }
  Rational r(parse_int(mant));
  if (exp10 >= 0)
    r *= Rational(pow_int(10, static_cast<unsigned>(exp10)));
  else
    r /= Rational(pow_int(10, static_cast<unsigned>(-exp10)));
  return r;
}

template <class Float>
std::string format_float(const Float& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << std::scientific << x;
  return os.str();
}

// Decimal rendering with `digits` significant digits. Exact zero prints as "0".
inline std::string to_decimal(const Rational& q, int digits) {
  if (q == 0) return "0";
  unsigned saved = HighFloat::default_precision();
  HighFloat::default_precision(static_cast<unsigned>(digits) + 20);
  HighFloat x(q);
  std::string r = format_float(x, digits - 1);
  HighFloat::default_precision(saved);
  return r;
}

inline std::string to_decimal(const HighFloat& x, int digits) {
  if (x == 0) return "0";
  return format_float(x, digits - 1);
}

inline std::string to_decimal(double x, int digits) {
  if (x == 0) return "0";
  return format_float(x, digits - 1);
}

inline int sign(const Rational& q) { return q.sign(); }

template <class T>
T from_rational(const Rational& q) {
  if constexpr (std::is_same_v<T, Rational>)
    return q;
  else if constexpr (std::is_same_v<T, double>)
    return q.convert_to<double>();
  else
    return T(q);
}

}  // namespace sgop

#endif
