#include "setfam/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include "setfam/errors.hpp"

namespace setfam {

std::string to_fraction_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

std::string to_decimal_string(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_integer(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw InputError("not an integer: '" + std::string(s) + "'");
  std::string text(s);
  if (text.front() == '+') text.erase(0, 1);
  return BigInt(text, 10);
}

}  // namespace

Rational parse_exact_rational(std::string_view text) {
  if (text.empty()) throw InputError("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  // Decimal with optional exponent.
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    exponent = parse_integer(text.substr(e + 1)).get_si();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long frac_digits = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    digits = std::string(mantissa.substr(0, dot));
    std::string frac(mantissa.substr(dot + 1));
    frac_digits = static_cast<long>(frac.size());
    digits += frac;
  } else {
    digits = std::string(mantissa);
  }
  if (!all_digits(digits)) throw InputError("not a number: '" + std::string(text) + "'");
  BigInt num(digits, 10);
  if (negative) num = -num;
  const long shift = exponent - frac_digits;
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  Rational q = shift >= 0 ? Rational(num * scale) : Rational(num, scale);
  q.canonicalize();
  return q;
}

Scalar Scalar::exact(Rational q) {
  Scalar s;
  q.canonicalize();
  s.value_ = q.get_d();
  s.exact_ = std::move(q);
  return s;
}

Scalar Scalar::approx(double x) {
  Scalar s;
  s.value_ = x;
  return s;
}

const Rational& Scalar::rational() const {
  if (!exact_) throw ContractError("scalar is not exact");
  return *exact_;
}

std::string Scalar::to_string() const {
  return exact_ ? to_fraction_string(*exact_) : to_decimal_string(value_);
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar::exact(a.rational() + b.rational());
  return Scalar::approx(a.value() + b.value());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar::exact(a.rational() - b.rational());
  return Scalar::approx(a.value() - b.value());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar::exact(a.rational() * b.rational());
  return Scalar::approx(a.value() * b.value());
}

int compare(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) {
    const int c = cmp(a.rational(), b.rational());
    return (c > 0) - (c < 0);
  }
  return a.value() < b.value() ? -1 : (a.value() > b.value() ? 1 : 0);
}

Bias::Bias(Rational p) {
  p.canonicalize();
  if (p <= 0 || p >= 1) throw InputError("bias must lie in (0,1), got " + to_fraction_string(p));
  value_ = p.get_d();
  exact_ = std::move(p);
}

Bias::Bias(double p) {
  if (!(p > 0.0 && p < 1.0) || !std::isfinite(p))
    throw InputError("bias must lie in (0,1), got " + to_decimal_string(p));
  value_ = p;
}

Bias Bias::parse(std::string_view text, bool force_exact) {
  if (text.find('/') != std::string_view::npos || force_exact)
    return Bias(parse_exact_rational(text));
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(text), &used);
    if (used != text.size()) throw InputError("not a number: '" + std::string(text) + "'");
    return Bias(v);
  } catch (const std::logic_error&) {
    throw InputError("not a number: '" + std::string(text) + "'");
  }
}

const Rational& Bias::rational() const {
  if (!exact_) throw ContractError("bias is not exact");
  return *exact_;
}

Scalar Bias::scalar() const { return exact_ ? Scalar::exact(*exact_) : Scalar::approx(value_); }

Bias Bias::complement() const {
  if (exact_) return Bias(Rational(1 - *exact_));
  return Bias(1.0 - value_);
}

Rational pow(const Rational& q, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), q.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), q.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

}  // namespace setfam
