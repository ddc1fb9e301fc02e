#pragma once

// Exact rationals (GMP) and the exact-or-floating scalar used by measure reports.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace setfam {

using Rational = mpq_class;
using BigInt = mpz_class;

/// "a/b" or "a"; never a decimal point.
[[nodiscard]] std::string to_fraction_string(const Rational& q);
/// 17 significant digits.
[[nodiscard]] std::string to_decimal_string(double x);

/// Parses "a/b", an integer, or a finite decimal ("0.375", "1e-3") into an exact rational.
[[nodiscard]] Rational parse_exact_rational(std::string_view text);

/// A value that is exact when the inputs allowed it and floating otherwise.
class Scalar {
 public:
  Scalar() = default;
  static Scalar exact(Rational q);
  static Scalar approx(double x);

  [[nodiscard]] bool is_exact() const noexcept { return exact_.has_value(); }
  [[nodiscard]] const Rational& rational() const;
  [[nodiscard]] double value() const noexcept { return value_; }
  /// Fraction when exact, 17-digit decimal otherwise.
  [[nodiscard]] std::string to_string() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& other) { return *this = *this + other; }

 private:
  std::optional<Rational> exact_;
  double value_ = 0.0;
};

/// The bias p of the product measure mu_p, 0 < p < 1.
class Bias {
 public:
  /// Exact bias; throws InputError unless 0 < p < 1.
  explicit Bias(Rational p);
  /// Floating bias; throws InputError unless 0 < p < 1.
  explicit Bias(double p);

  /// "a/b" gives an exact bias; a decimal gives a floating one unless `force_exact`.
  static Bias parse(std::string_view text, bool force_exact = false);

  [[nodiscard]] bool is_exact() const noexcept { return exact_.has_value(); }
  [[nodiscard]] const Rational& rational() const;
  [[nodiscard]] double value() const noexcept { return value_; }
  [[nodiscard]] Scalar scalar() const;
  /// 1 - p with the same exactness.
  [[nodiscard]] Bias complement() const;

 private:
  std::optional<Rational> exact_;
  double value_ = 0.0;
};

/// Three-way comparison; exact when both sides are exact.
[[nodiscard]] int compare(const Scalar& a, const Scalar& b);

/// q^e for a nonnegative integer exponent.
[[nodiscard]] Rational pow(const Rational& q, unsigned long e);

}  // namespace setfam
