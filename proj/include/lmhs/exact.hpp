// Exact scalar arithmetic: Gaussian rationals with a formal (2*pi)^k twist.
//
// Every quantity in this library is an element q * (2*pi)^k with q in Q(i)
// and k an integer.  2*pi is treated as a formal positive unit, so signs of
// i-free values are decidable exactly.  Addition across different twists is
// a hard error rather than a silent coercion; this catches unit mistakes in
// pairing formulas long before they corrupt a verdict.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace lmhs {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

enum class Err {
  Twist,
  Containment,
  NotDecidable,
  NotUnipotent,
  ZeroVector,
  Shape,
  MissingPairing,
  NotACocycle,
  Lift,
  HypothesisFailure,
  UnsupportedDiamond,
  UnsupportedOrder,
  SingularLeadingBlock,
  Growth,
  GramDegenerate,
  Consistency,
  Parse,
  Schema,
  Validation,
  FriedmanCondition,
};

class Error : public std::runtime_error {
public:
  Error(Err kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Err kind() const { return kind_; }

private:
  Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& msg) { throw Error(kind, msg); }

// q = re + im * i with exact rational parts.
struct GaussianRational {
  Rational re, im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long r) : re(r) {}
  GaussianRational(long r, long i) : re(r), im(i) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im == 0; }

  GaussianRational conj() const { return {re, -im}; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational n = b.re * b.re + b.im * b.im;
    if (n == 0) fail(Err::Shape, "division by zero Gaussian rational");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

// i^k for k normalized mod 4.
inline GaussianRational i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

// A scalar q * (2*pi)^k.  Zero is normalized to twist 0.
struct ExactScalar {
  GaussianRational coeff;
  int twist = 0;

  ExactScalar() = default;
  ExactScalar(GaussianRational q, int k = 0) : coeff(std::move(q)), twist(k) { normalize(); }
  ExactScalar(long v) : coeff(v) {}
  ExactScalar(Rational v) : coeff(std::move(v)) {}

  void normalize() {
    if (coeff.is_zero()) twist = 0;
  }

  bool is_zero() const { return coeff.is_zero(); }
  bool is_real() const { return coeff.is_real(); }

  static ExactScalar zero() { return ExactScalar(); }
  static ExactScalar one() { return ExactScalar(1); }
  static ExactScalar i() { return ExactScalar(GaussianRational(0, 1)); }
  // (2*pi*i)^k as an exact scalar.
  static ExactScalar two_pi_i(int k) { return ExactScalar(i_power(k), k); }

  ExactScalar conj() const { return ExactScalar(coeff.conj(), twist); }

  // Sign of an i-free scalar; nullopt when the imaginary part is nonzero.
  std::optional<int> sign() const {
    if (!coeff.is_real()) return std::nullopt;
    if (coeff.re == 0) return 0;
    return coeff.re > 0 ? 1 : -1;
  }

  friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.twist != b.twist)
      fail(Err::Twist, "adding scalars of different twist: " + std::to_string(a.twist) + " vs " +
                           std::to_string(b.twist));
    return ExactScalar(a.coeff + b.coeff, a.twist);
  }
  friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return a + (-b); }
  friend ExactScalar operator-(const ExactScalar& a) { return ExactScalar(-a.coeff, a.twist); }
  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    if (a.is_zero() || b.is_zero()) return ExactScalar();
    return ExactScalar(a.coeff * b.coeff, a.twist + b.twist);
  }
  friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
    if (b.is_zero()) fail(Err::Shape, "division by zero scalar");
    if (a.is_zero()) return ExactScalar();
    return ExactScalar(a.coeff / b.coeff, a.twist - b.twist);
  }
  ExactScalar& operator+=(const ExactScalar& b) { return *this = *this + b; }
  ExactScalar& operator-=(const ExactScalar& b) { return *this = *this - b; }
  ExactScalar& operator*=(const ExactScalar& b) { return *this = *this * b; }

  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.twist == b.twist && a.coeff == b.coeff;
  }
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }
};

namespace detail {

inline std::string rational_str(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

}  // namespace detail

// Canonical textual form "a/b+c/d*i*twist^k"; parts that vanish are omitted.
inline std::string to_string(const ExactScalar& s) {
  if (s.is_zero()) return "0";
  std::string out;
  const Rational& re = s.coeff.re;
  const Rational& im = s.coeff.im;
  if (re != 0) out += detail::rational_str(re);
  if (im != 0) {
    if (im > 0 && !out.empty()) out += "+";
    if (im == -1)
      out += "-";
    else if (im != 1)
      out += detail::rational_str(im) + "*";
    out += "i";
  }
  if (out.empty()) out = "0";
  if (s.twist != 0) out += "*twist^" + std::to_string(s.twist);
  return out;
}

// Parser for the canonical form above (tolerates surrounding whitespace).
ExactScalar parse_scalar(const std::string& text);

namespace detail {

inline Rational parse_rational(const std::string& t) {
  auto slash = t.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(t));
    return Rational(Integer(t.substr(0, slash)), Integer(t.substr(slash + 1)));
  } catch (const std::exception&) {
    fail(Err::Parse, "bad rational: '" + t + "'");
  }
}

}  // namespace detail

inline ExactScalar parse_scalar(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) fail(Err::Parse, "empty scalar");
  int twist = 0;
  auto tw = t.find("*twist^");
  if (tw != std::string::npos) {
    twist = std::stoi(t.substr(tw + 7));
    t = t.substr(0, tw);
  } else if (t.rfind("twist^", 0) == 0) {
    twist = std::stoi(t.substr(6));
    t = "1";
  }
  if (t == "0") return ExactScalar();
  // Split into real and imaginary summands at top-level +/- signs.
  Rational re = 0, im = 0;
  std::size_t pos = 0;
  while (pos < t.size()) {
    std::size_t start = pos;
    if (t[pos] == '+' || t[pos] == '-') ++pos;
    while (pos < t.size() && t[pos] != '+' && t[pos] != '-') ++pos;
    std::string term = t.substr(start, pos - start);
    bool imag = false;
    auto istar = term.find("*i");
    if (istar != std::string::npos && istar + 2 == term.size()) {
      imag = true;
      term = term.substr(0, istar);
    } else if (!term.empty() && term.back() == 'i') {
      imag = true;
      term.pop_back();
      if (term.empty() || term == "+")
        term = "1";
      else if (term == "-")
        term = "-1";
    }
    if (term.empty()) fail(Err::Parse, "bad scalar: '" + text + "'");
    if (term[0] == '+') term = term.substr(1);
    Rational v = detail::parse_rational(term);
    if (imag)
      im += v;
    else
      re += v;
  }
  return ExactScalar(GaussianRational(re, im), twist);
}

}  // namespace lmhs
