#include "setfam/frankl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "setfam/errors.hpp"
#include "setfam/measures.hpp"

namespace setfam {

namespace {

bool below_half(const Bias& p) {
  return p.is_exact() ? p.rational() < Rational(1, 2) : p.value() < 0.5;
}

template <class Pred>
SetFamily build_where(int n, std::optional<int> k, Pred&& keep) {
  if (k) {
    FamilyBuilder builder(n, Storage::layer, k);
    for (Subset s : layer_lex(n, *k))
      if (keep(s)) builder.add(s);
    return std::move(builder).build();
  }
  FamilyBuilder builder(n, Storage::power_set);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
    if (keep(static_cast<Subset>(s))) builder.add(static_cast<Subset>(s));
  return std::move(builder).build();
}

// Indices whose values tie with the maximum, exactly or within tol.
struct Scan {
  std::vector<int> argmax;
  std::vector<int> window;
  Scalar best;
};

Scan scan_closed_form(const Bias& p, int t, int lo, int hi, double tol) {
  Scan out;
  std::vector<Scalar> values;
  for (int r = lo; r <= hi; ++r) values.push_back(frankl_measure(p, t, r));
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (p.is_exact() ? values[i].rational() > values[best].rational()
                     : values[i].value() > values[best].value())
      best = i;
  out.best = values[best];
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int r = lo + static_cast<int>(i);
    if (p.is_exact()) {
      if (values[i].rational() == values[best].rational()) out.argmax.push_back(r);
      continue;
    }
    const double gap = values[best].value() - values[i].value();
    if (gap <= tol) out.argmax.push_back(r);
    if (gap <= 10 * tol) out.window.push_back(r);
  }
  return out;
}

}  // namespace

Subset frankl_base(const FranklSpec& spec) {
  if (spec.t < 1) throw InputError("frankl: t must be >= 1");
  if (spec.r < 0) throw InputError("frankl: r must be >= 0");
  const int width = spec.t + 2 * spec.r;
  if (width > spec.n)
    throw InputError("frankl: t+2r = " + std::to_string(width) + " exceeds n = " +
                     std::to_string(spec.n));
  if (spec.base == 0) return prefix_set(width);
  if ((spec.base & ~full_set(spec.n)) != 0) throw InputError("frankl: base is not inside [n]");
  if (cardinality(spec.base) != width)
    throw InputError("frankl: base must have t+2r = " + std::to_string(width) + " elements");
  return spec.base;
}

SetFamily frankl_family(const FranklSpec& spec) {
  const Subset base = frankl_base(spec);
  const int need = spec.t + spec.r;
  return build_where(spec.n, spec.k, [&](Subset s) { return cardinality(s & base) >= need; });
}

std::uint64_t frankl_size(int n, int k, int t, int r) {
  const int width = t + 2 * r;
  std::uint64_t total = 0;
  for (int i = t + r; i <= width; ++i) total += binomial(width, i) * binomial(n - width, k - i);
  return total;
}

UniformOptimum f_uniform(int n, int k, int t) {
  if (t < 1 || t > k || k > n) throw InputError("f_uniform needs 1 <= t <= k <= n");
  UniformOptimum out;
  for (int r = 0; r <= k - t && t + 2 * r <= n; ++r) {
    const std::uint64_t size = frankl_size(n, k, t, r);
    if (size > out.value) {
      out.value = size;
      out.argmax = {r};
    } else if (size == out.value) {
      out.argmax.push_back(r);
    }
  }
  return out;
}

Scalar frankl_measure(const Bias& p, int t, int r) {
  const int width = t + 2 * r;
  std::vector<std::uint64_t> profile(static_cast<std::size_t>(width) + 1, 0);
  for (int i = t + r; i <= width; ++i) profile[static_cast<std::size_t>(i)] = binomial(width, i);
  return weigh_profile(profile, width, p);
}

int default_r_max(const Bias& p, int t) {
  // r/(t+2r-1) > p at r = R+1 reads (R+1)/(t+2R+1) > p.
  for (int R = 0; R < 1000000; ++R) {
    Rational ratio(R + 1, t + 2 * R + 1);
    ratio.canonicalize();
    const bool past = p.is_exact() ? ratio > p.rational()
                                   : static_cast<double>(R + 1) / (t + 2 * R + 1) > p.value();
    if (past) return R + 1;
  }
  throw InputError("default_r_max: p too close to 1/2");
}

BiasedOptimum f_biased(int n, const Bias& p, int t, std::optional<int> r_max, double tol) {
  if (t < 1) throw InputError("f_biased: t must be >= 1");
  if (!below_half(p)) throw InputError("f_biased: p must be < 1/2");
  if (n < t) throw InputError("f_biased: n must be >= t");
  const int hi = std::min(r_max.value_or(default_r_max(p, t)), (n - t) / 2);
  if (hi < 0) throw InputError("f_biased: r_max must be >= 0");
  Scan scan = scan_closed_form(p, t, 0, hi, tol);
  BiasedOptimum out;
  out.value = scan.best;
  out.argmax = std::move(scan.argmax);
  out.near_window = std::move(scan.window);
  out.r_max = hi;
  return out;
}

RStar r_star(const Bias& beta, int t, double tol) {
  if (t < 1) throw InputError("r_star: t must be >= 1");
  if (!below_half(beta)) throw InputError("r_star: beta must be < 1/2");
  Scan scan = scan_closed_form(beta, t, 0, default_r_max(beta, t), tol);
  RStar out;
  out.r = scan.argmax.front();
  for (std::size_t i = 0; i + 1 < scan.argmax.size(); ++i)
    if (scan.argmax[i + 1] == scan.argmax[i] + 1) out.singular = true;
  out.near_window = std::move(scan.window);
  return out;
}

SetFamily tightness_family(const TightnessSpec& spec) {
  if (spec.t < 1 || spec.r < 0 || spec.s < 0) throw InputError("tightness: need t >= 1, r, s >= 0");
  const int width = spec.t + 2 * spec.r;
  if (width + spec.s > spec.n)
    throw InputError("tightness: t+2r+s = " + std::to_string(width + spec.s) + " exceeds n = " +
                     std::to_string(spec.n));
  const Subset base = prefix_set(width);
  const Subset block = range_set(width + 1, width + spec.s);
  const int need = spec.t + spec.r;
  return build_where(spec.n, spec.k, [&](Subset a) {
    const int c = cardinality(a & base);
    if (c >= need) return (a & block) != 0;
    return c == need - 1 && (a & block) == block;
  });
}

TightnessForms tightness_closed_forms(const TightnessSpec& spec, const Bias& p) {
  const int t = spec.t;
  const int r = spec.r;
  if (t + 2 * r + spec.s > spec.n) throw InputError("tightness: needs n >= t+2r+s");
  const auto choose = static_cast<unsigned long>(binomial(t + 2 * r, t + r - 1));
  TightnessForms out;
  if (p.is_exact()) {
    const Rational& x = p.rational();
    const Rational q = 1 - x;
    const Rational excess = Rational(choose) * pow(x, static_cast<unsigned long>(t + r - 1)) *
                            pow(q, static_cast<unsigned long>(r + 1)) *
                            pow(x, static_cast<unsigned long>(spec.s));
    const Rational f = frankl_measure(p, t, r).rational();
    out.excess = Scalar::exact(excess);
    out.mu = Scalar::exact(f * (1 - pow(q, static_cast<unsigned long>(spec.s))) + excess);
    return out;
  }
  const double x = p.value();
  const double excess = static_cast<double>(choose) * std::pow(x, t + r - 1) *
                        std::pow(1 - x, r + 1) * std::pow(x, spec.s);
  const double f = frankl_measure(p, t, r).value();
  out.excess = Scalar::approx(excess);
  out.mu = Scalar::approx(f * (1 - std::pow(1 - x, spec.s)) + excess);
  return out;
}

FranklDistance distance_to_frankl(const SetFamily& family, int t, int r_max) {
  const int n = family.n();
  if (t < 1 || r_max < 0) throw InputError("distance_to_frankl: need t >= 1, r_max >= 0");
  if (t + 2 * r_max > n)
    throw InputError("distance_to_frankl: t+2*r_max = " + std::to_string(t + 2 * r_max) +
                     " exceeds n = " + std::to_string(n));
  const std::vector<Subset> members = family.members();
  FranklDistance out;
  bool found = false;
  for (int r = 0; r <= r_max; ++r) {
    const int need = t + r;
    for (Subset base : layer_lex(n, t + 2 * r)) {
      std::uint64_t miss = 0;
      for (Subset a : members)
        if (cardinality(a & base) < need) ++miss;
      if (!found || miss < out.distance) {
        found = true;
        out.distance = miss;
        out.best = FranklSpec{n, t, r, base, family.layer()};
      }
    }
  }
  return out;
}

}  // namespace setfam
