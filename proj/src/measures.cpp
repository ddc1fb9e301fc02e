#include "setfam/measures.hpp"

#include <cmath>
#include <string>

#include "setfam/errors.hpp"

namespace setfam {

namespace {

std::vector<Rational> exact_weights(int n, const Rational& p) {
  const Rational q = 1 - p;
  std::vector<Rational> w(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j)
    w[static_cast<std::size_t>(j)] = pow(p, static_cast<unsigned long>(j)) *
                                     pow(q, static_cast<unsigned long>(n - j));
  return w;
}

std::vector<long double> float_weights(int n, long double p) {
  std::vector<long double> w(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j)
    w[static_cast<std::size_t>(j)] = std::pow(p, j) * std::pow(1.0L - p, n - j);
  return w;
}

void check_coordinate(const SetFamily& family, int i) {
  if (i < 1 || i > family.n())
    throw InputError("coordinate " + std::to_string(i) + " outside 1.." +
                     std::to_string(family.n()));
}

std::vector<std::uint64_t> influence_profile(const SetFamily& family, int i) {
  std::vector<std::uint64_t> profile(static_cast<std::size_t>(family.n()) + 1, 0);
  const Subset bit = element_bit(i);
  family.for_each([&](Subset s) {
    if (!family.contains(s ^ bit)) {
      ++profile[static_cast<std::size_t>(cardinality(s))];
      ++profile[static_cast<std::size_t>(cardinality(s ^ bit))];
    }
  });
  return profile;
}

}  // namespace

Rational mu_uniform(const SetFamily& family) {
  const int k = family.k();
  Rational out(static_cast<unsigned long>(family.size()),
               static_cast<unsigned long>(binomial(family.n(), k)));
  out.canonicalize();
  return out;
}

Scalar weigh_profile(const std::vector<std::uint64_t>& profile, int n, const Bias& p) {
  if (p.is_exact()) {
    const auto w = exact_weights(n, p.rational());
    Rational sum = 0;
    for (int j = 0; j <= n; ++j) {
      const auto c = profile[static_cast<std::size_t>(j)];
      if (c != 0) sum += Rational(static_cast<unsigned long>(c)) * w[static_cast<std::size_t>(j)];
    }
    return Scalar::exact(sum);
  }
  const auto w = float_weights(n, p.value());
  long double sum = 0;
  for (int j = 0; j <= n; ++j)
    sum += static_cast<long double>(profile[static_cast<std::size_t>(j)]) *
           w[static_cast<std::size_t>(j)];
  return Scalar::approx(static_cast<double>(sum));
}

Scalar mu_biased(const SetFamily& family, const Bias& p) {
  return weigh_profile(size_profile(family), family.n(), p);
}

double mu_biased(const SetFamily& family, double p) {
  return mu_biased(family, Bias(p)).value();
}

Scalar influence(const SetFamily& family, int i, const Bias& p) {
  check_coordinate(family, i);
  return weigh_profile(influence_profile(family, i), family.n(), p);
}

std::vector<Scalar> influences(const SetFamily& family, const Bias& p) {
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(family.n()));
  for (int i = 1; i <= family.n(); ++i) out.push_back(influence(family, i, p));
  return out;
}

Scalar total_influence(const SetFamily& family, const Bias& p) {
  Scalar total = p.is_exact() ? Scalar::exact(0) : Scalar::approx(0.0);
  for (const Scalar& x : influences(family, p)) total += x;
  return total;
}

double derivative_mu(const SetFamily& family, double p, double step) {
  if (!(step > 0) || p - step <= 0 || p + step >= 1)
    throw InputError("derivative step must keep p +- step inside (0,1)");
  const auto profile = size_profile(family);
  const double hi = weigh_profile(profile, family.n(), Bias(p + step)).value();
  const double lo = weigh_profile(profile, family.n(), Bias(p - step)).value();
  return (hi - lo) / (2 * step);
}

std::vector<double> fourier_level1(const SetFamily& family, const Bias& bias) {
  const int n = family.n();
  // in[i][j]: members of size j containing i; out likewise without i.
  std::vector<std::vector<std::uint64_t>> in(static_cast<std::size_t>(n),
                                             std::vector<std::uint64_t>(n + 1, 0));
  auto out = in;
  family.for_each([&](Subset s) {
    const auto j = static_cast<std::size_t>(cardinality(s));
    for (int i = 0; i < n; ++i) ((s >> i) & 1U ? in : out)[static_cast<std::size_t>(i)][j]++;
  });
  const long double p = bias.value();
  const long double sigma = std::sqrt(p * (1 - p));
  const auto w = float_weights(n, p);
  std::vector<double> coeffs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    long double sum = 0;
    for (int j = 0; j <= n; ++j) {
      const auto ii = static_cast<std::size_t>(i);
      const auto jj = static_cast<std::size_t>(j);
      sum += (static_cast<long double>(in[ii][jj]) * (1 - p) -
              static_cast<long double>(out[ii][jj]) * p) *
             w[jj];
    }
    coeffs[static_cast<std::size_t>(i)] = static_cast<double>(sum / sigma);
  }
  return coeffs;
}

MeasureReport measure_report(const SetFamily& family, const Bias& p) {
  MeasureReport r;
  r.mu = mu_biased(family, p);
  r.influences = influences(family, p);
  r.total = p.is_exact() ? Scalar::exact(0) : Scalar::approx(0.0);
  for (const Scalar& x : r.influences) r.total += x;
  return r;
}

namespace {

// Sign of p^(x) - mu^(mu) where x = pI, for exact p = u/v, x = a/b, mu = c/d.
// Returns nullopt when the integers involved would be unreasonably large.
std::optional<int> exact_power_compare(const Rational& p, const Rational& x, const Rational& mu) {
  const BigInt& u = p.get_num();
  const BigInt& v = p.get_den();
  const BigInt& a = x.get_num();
  const BigInt& b = x.get_den();
  const BigInt& c = mu.get_num();
  const BigInt& d = mu.get_den();
  BigInt L;
  mpz_lcm(L.get_mpz_t(), b.get_mpz_t(), d.get_mpz_t());
  const BigInt A = a * (L / b);
  const BigInt C = c * (L / d);
  const double bits = A.get_d() * (std::log2(v.get_d()) + 1) + C.get_d() * (std::log2(d.get_d()) + 1);
  if (!A.fits_ulong_p() || !C.fits_ulong_p() || bits > 4e7) return std::nullopt;
  // p^A vs mu^C, i.e. u^A d^C vs c^C v^A.
  BigInt ua, dc, cc, va;
  mpz_pow_ui(ua.get_mpz_t(), u.get_mpz_t(), A.get_ui());
  mpz_pow_ui(dc.get_mpz_t(), d.get_mpz_t(), C.get_ui());
  mpz_pow_ui(cc.get_mpz_t(), c.get_mpz_t(), C.get_ui());
  mpz_pow_ui(va.get_mpz_t(), v.get_mpz_t(), A.get_ui());
  return cmp(ua * dc, cc * va);
}

}  // namespace

IsoperimetryReport isoperimetry_check(const SetFamily& family, const Bias& p, double tol) {
  if (!is_increasing(family)) throw ContractError("isoperimetry_check: family is not increasing");
  if (family.empty()) throw ContractError("isoperimetry_check: family is empty");
  if (family.size() == (std::uint64_t{1} << family.n()))
    throw ContractError("isoperimetry_check: family is the whole power set");

  const Scalar mu = mu_biased(family, p);
  const Scalar total = total_influence(family, p);
  IsoperimetryReport r;
  const long double pv = p.value();
  const long double m = mu.value();
  const long double x = pv * total.value();
  r.lhs = static_cast<double>(x);
  r.rhs = static_cast<double>(m * std::log(m) / std::log(pv));

  // pI >= mu log_p mu  <=>  pI ln p <= mu ln mu.
  const long double gap = m * std::log(m) - x * std::log(pv);
  if (p.is_exact()) {
    r.exact = true;
    if (std::fabs(gap) > 1e-12L) {
      r.holds = gap > 0;
      return r;
    }
    const Rational px = p.rational() * total.rational();
    if (auto sign = exact_power_compare(p.rational(), px, mu.rational())) {
      // p^(pI) <= mu^mu is the inequality.
      r.holds = *sign <= 0;
      r.equality = *sign == 0;
      return r;
    }
    r.exact = false;
  }
  r.holds = r.lhs >= r.rhs - tol;
  r.equality = std::fabs(r.lhs - r.rhs) <= tol;
  return r;
}

}  // namespace setfam
