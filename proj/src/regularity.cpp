#include "setfam/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "setfam/errors.hpp"

namespace setfam {

namespace {

int layer_or_throw(const SetFamily& family, const char* op) {
  if (!family.is_uniform())
    throw InputError(std::string(op) + ": family must be tagged with a layer");
  return family.k();
}

// Neumaier summation in long double.
struct CompensatedSum {
  long double sum = 0;
  long double carry = 0;
  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  [[nodiscard]] long double value() const { return sum + carry; }
};

std::uint64_t count_up_to(int n, int h) {
  std::uint64_t total = 0;
  for (int i = 0; i <= std::min(h, n); ++i) total += binomial(n, i);
  return total;
}

void check_budget(int n, int h, std::uint64_t budget, const char* op) {
  const std::uint64_t need = count_up_to(n, h);
  if (need > budget)
    throw ResourceError(std::string(op) + ": " + std::to_string(need) +
                        " sets J to scan, budget " + std::to_string(budget));
}

long double potential_from_counts(int n, int k, Subset J, const std::vector<std::uint64_t>& counts) {
  const long double total = static_cast<long double>(binomial(n, k));
  const int nj = n - cardinality(J);
  CompensatedSum sum;
  for (std::size_t idx = 0; idx < counts.size(); ++idx) {
    if (counts[idx] == 0) continue;
    const int b = cardinality(static_cast<Subset>(idx));
    const long double c = static_cast<long double>(counts[idx]);
    const long double layer = static_cast<long double>(binomial(nj, k - b));
    sum.add(c / total * std::log(c / layer));
  }
  return sum.value();
}

// Least positive Pr[A cap J' = B'] over |J'| <= h, for a uniform k-subset A of [n].
double least_slice_probability(int n, int k, int h) {
  const long double total = static_cast<long double>(binomial(n, k));
  long double least = 1;
  for (int j = 0; j <= std::min(h, n); ++j)
    for (int b = 0; b <= j; ++b) {
      const std::uint64_t c = binomial(n - j, k - b);
      if (c != 0) least = std::min(least, static_cast<long double>(c) / total);
    }
  return static_cast<double>(least);
}

}  // namespace

Rational SliceDistribution::min_positive() const {
  Rational best = 0;
  bool found = false;
  for (const Rational& q : table)
    if (q > 0 && (!found || q < best)) {
      best = q;
      found = true;
    }
  return best;
}

SliceDistribution slice_distribution(int n, int k, Subset J) {
  if (k < 0 || k > n) throw InputError("slice_distribution: needs 0 <= k <= n");
  if ((J & ~full_set(n)) != 0) throw InputError("slice_distribution: J is not a subset of [n]");
  SliceDistribution out;
  out.n = n;
  out.k = k;
  out.J = J;
  const int j = cardinality(J);
  const BigInt total(std::to_string(binomial(n, k)), 10);
  out.table.resize(std::size_t{1} << j);
  for (std::size_t idx = 0; idx < out.table.size(); ++idx) {
    const int b = cardinality(static_cast<Subset>(idx));
    const BigInt c(std::to_string(binomial(n - j, k - b)), 10);
    out.table[idx] = Rational(c, total);
    out.table[idx].canonicalize();
  }
  return out;
}

double potential(const SetFamily& family, Subset J) {
  const int k = layer_or_throw(family, "potential");
  if ((J & ~family.ground()) != 0) throw InputError("potential: J is not a subset of [n]");
  return static_cast<double>(potential_from_counts(family.n(), k, J, slice_counts(family, J)));
}

StabilityCheck is_potentially_stable(const SetFamily& family, double eta, int h,
                                     std::uint64_t budget) {
  const int k = layer_or_throw(family, "is_potentially_stable");
  if (h < 0) throw InputError("is_potentially_stable: h must be >= 0");
  const int n = family.n();
  check_budget(n, h, budget, "is_potentially_stable");
  StabilityCheck out;
  const long double base = potential_from_counts(n, k, 0, slice_counts(family, 0));
  out.base = static_cast<double>(base);
  for (Subset J : subsets_up_to(n, std::min(h, n))) {
    if (J == 0) continue;
    const long double value = potential_from_counts(n, k, J, slice_counts(family, J));
    if (value >= base + eta) {
      out.holds = false;
      out.witness = J;
      out.witness_value = static_cast<double>(value);
      return out;
    }
  }
  return out;
}

QuasirandomCheck is_slice_quasirandom(const SetFamily& family, double delta, int h,
                                      std::uint64_t budget) {
  const int k = layer_or_throw(family, "is_slice_quasirandom");
  if (h < 0) throw InputError("is_slice_quasirandom: h must be >= 0");
  const int n = family.n();
  check_budget(n, h, budget, "is_slice_quasirandom");
  QuasirandomCheck out;
  const long double mu = static_cast<long double>(family.size()) /
                         static_cast<long double>(binomial(n, k));
  for (Subset J : subsets_up_to(n, std::min(h, n))) {
    const auto counts = slice_counts(family, J);
    const int nj = n - cardinality(J);
    bool bad = false;
    long double worst = -1;
    Subset worst_b = 0;
    for (std::size_t idx = 0; idx < counts.size(); ++idx) {
      const int kb = k - cardinality(static_cast<Subset>(idx));
      if (kb < 0 || kb > nj) continue;
      const long double density =
          static_cast<long double>(counts[idx]) / static_cast<long double>(binomial(nj, kb));
      const long double dev = std::fabs(density - mu);
      out.max_deviation = std::max(out.max_deviation, static_cast<double>(dev));
      if (dev >= delta) bad = true;
      const Subset B = expand_bits(static_cast<Subset>(idx), J);
      if (dev > worst || (dev == worst && lex_less(B, worst_b))) {
        worst = dev;
        worst_b = B;
      }
    }
    if (bad) {
      out.holds = false;
      out.witness = SlicePointer{J, worst_b};
      return out;
    }
  }
  return out;
}

double eta_for(double lambda, double delta, double weight) {
  if (!(lambda > 0 && lambda <= 1)) throw InputError("eta_for: lambda must lie in (0,1]");
  if (!(delta > 0)) throw InputError("eta_for: delta must be > 0");
  if (!(weight > 0)) throw InputError("eta_for: C must be > 0");
  const double first = lambda * delta * delta / (2 * weight);
  if (lambda >= 1) return first;
  const double second =
      lambda * lambda * lambda * delta * delta / (2 * (1 - lambda) * (1 - lambda) * weight);
  return std::min(first, second);
}

double xlogx(double x) { return x == 0 ? 0.0 : x * std::log(x); }

namespace {

void check_distribution(const std::vector<double>& probs, const std::vector<double>& x,
                        const char* op) {
  if (probs.size() != x.size() || probs.empty())
    throw InputError(std::string(op) + ": probabilities and values differ in length");
  long double total = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0)) throw InputError(std::string(op) + ": negative probability");
    if (!(x[i] >= 0)) throw InputError(std::string(op) + ": X must be non-negative");
    total += probs[i];
  }
  if (std::fabs(static_cast<double>(total) - 1.0) > 1e-9)
    throw InputError(std::string(op) + ": probabilities do not sum to 1");
}

}  // namespace

FoxGap fox_gap_check(const std::vector<double>& probs, const std::vector<double>& x, double beta,
                     double tol) {
  check_distribution(probs, x, "fox_gap_check");
  if (!(beta >= 0 && beta <= 1)) throw InputError("fox_gap_check: beta must lie in [0,1]");
  CompensatedSum mean, lhs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean.add(static_cast<long double>(probs[i]) * x[i]);
    lhs.add(static_cast<long double>(probs[i]) * xlogx(x[i]));
  }
  const double ex = static_cast<double>(mean.value());
  long double low = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] <= beta * ex) low += probs[i];
  FoxGap out;
  out.lhs = static_cast<double>(lhs.value());
  out.rhs = xlogx(ex) + (1 - beta + xlogx(beta)) * static_cast<double>(low) * ex;
  out.holds = out.lhs >= out.rhs - tol;
  return out;
}

JensenConcentration jensen_concentration(const std::vector<double>& probs,
                                         const std::vector<double>& x, double delta,
                                         double weight) {
  check_distribution(probs, x, "jensen_concentration");
  JensenConcentration out;
  CompensatedSum mean, ef;
  out.lambda = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (probs[i] > 0) out.lambda = std::min(out.lambda, probs[i]);
    mean.add(static_cast<long double>(probs[i]) * x[i]);
    ef.add(static_cast<long double>(probs[i]) * xlogx(x[i]));
  }
  const double ex = static_cast<double>(mean.value());
  if (ex > weight) throw InputError("jensen_concentration: EX exceeds C");
  out.eta = eta_for(out.lambda, delta, weight);
  out.gap = static_cast<double>(ef.value()) - xlogx(ex);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (probs[i] > 0) out.deviation = std::max(out.deviation, std::fabs(x[i] - ex));
  out.premise = out.gap < out.eta;
  out.conclusion = out.deviation < delta;
  return out;
}

std::string to_string(SliceClass c) {
  switch (c) {
    case SliceClass::good: return "good";
    case SliceClass::bad: return "bad";
    case SliceClass::exceptional: return "exceptional";
  }
  return "?";
}

DecompositionResult regularity_decompose(const SetFamily& family, double zeta, double delta,
                                         int h, double eps, const DecompositionOptions& options) {
  const int k = layer_or_throw(family, "regularity_decompose");
  const int n = family.n();
  if (!(zeta > 0 && zeta < 0.5)) throw InputError("regularity_decompose: zeta must lie in (0,1/2)");
  if (!(delta > 0)) throw InputError("regularity_decompose: delta must be > 0");
  if (h < 0) throw InputError("regularity_decompose: h must be >= 0");
  if (!(eps > 0 && eps < 1)) throw InputError("regularity_decompose: eps must lie in (0,1)");
  if (!(zeta * n < k && k < (1 - zeta) * n))
    throw ContractError("regularity_decompose: needs zeta n < k < (1 - zeta) n");

  const Rational total(BigInt(std::to_string(binomial(n, k)), 10));
  const double lambda_floor = std::pow(zeta / 2, h);
  DecompositionResult out;
  out.eta = 1;
  Subset J = 0;
  for (;;) {
    const int nj = n - cardinality(J);
    const Subset rest = family.ground() & ~J;
    const auto counts = slice_counts(family, J);

    double lambda = lambda_floor;
    for (std::size_t idx = 0; idx < counts.size(); ++idx) {
      const int kb = k - cardinality(static_cast<Subset>(idx));
      if (kb >= 0 && kb <= nj) lambda = std::min(lambda, least_slice_probability(nj, kb, h));
    }
    out.eta = std::min(out.eta, eta_for(lambda, delta, 1));

    out.slices.clear();
    out.good.clear();
    Rational outside = 0;
    Subset next = J;
    for (Subset B : subsets_of_size_then_lex(J)) {
      const int kb = k - cardinality(B);
      if (kb < 0 || kb > nj) continue;
      const std::uint64_t count = counts[compress_bits(B, J)];
      const std::uint64_t layer = binomial(nj, kb);
      SliceDiagnostic diag;
      diag.B = B;
      diag.weight = static_cast<double>(layer) / total.get_d();
      diag.density = static_cast<double>(count) / static_cast<double>(layer);
      if (diag.density > eps / 2) {
        const SetFamily sl = slice(family, SlicePointer{J, B});
        const auto stable = is_potentially_stable(sl, out.eta, h, options.scan_budget);
        diag.margin = delta - is_slice_quasirandom(sl, delta, h, options.scan_budget).max_deviation;
        if (stable) {
          diag.cls = SliceClass::good;
          out.good.push_back(B);
        } else {
          diag.cls = SliceClass::bad;
          diag.witness = expand_bits(*stable.witness, rest);
          next |= *diag.witness;
        }
      }
      if (diag.cls != SliceClass::good)
        outside += Rational(BigInt(std::to_string(count), 10)) / total;
      out.slices.push_back(diag);
    }
    out.outside = outside;
    const double phi = potential(family, J);
    out.log.push_back({J, phi, out.eta, lambda, outside.get_d()});
    out.J = J;
    if (outside < Rational(eps)) return out;

    const double cap = 2 / (std::exp(1.0) * out.eta * eps);
    if (out.iterations + 1 > cap || next == J) {
      std::ostringstream msg;
      msg << "regularity_decompose: exceeded " << static_cast<long long>(cap)
          << " refinements; phi log:";
      for (const auto& round : out.log) msg << ' ' << to_string(round.J) << '=' << round.phi;
      throw ResourceError(msg.str());
    }
    ++out.iterations;
    J = next;
  }
}

std::string render_decomposition(const DecompositionResult& result) {
  std::ostringstream os;
  for (std::size_t m = 0; m < result.log.size(); ++m) {
    const auto& r = result.log[m];
    os << "round " << m << " J=" << to_string(r.J) << " phi=" << to_decimal_string(r.phi)
       << " eta=" << to_decimal_string(r.eta) << " lambda=" << to_decimal_string(r.lambda)
       << " outside=" << to_decimal_string(r.outside) << '\n';
  }
  for (const auto& s : result.slices) {
    os << "slice B=" << to_string(s.B) << " class=" << to_string(s.cls)
       << " weight=" << to_decimal_string(s.weight) << " density=" << to_decimal_string(s.density);
    if (s.cls != SliceClass::exceptional) os << " margin=" << to_decimal_string(s.margin);
    if (s.witness) os << " witness=" << to_string(*s.witness);
    os << '\n';
  }
  os << "J=" << to_string(result.J) << " good=" << result.good.size()
     << " outside=" << to_fraction_string(result.outside) << " eta=" << to_decimal_string(result.eta)
     << " iterations=" << result.iterations << '\n';
  return os.str();
}

std::optional<WitnessPair> intersection_witness(const SetFamily& a, const SetFamily& b, int t) {
  if (a.n() != b.n()) throw InputError("intersection_witness: families over different ground sets");
  if (t < 1) throw InputError("intersection_witness: t must be >= 1");
  const auto bs = b.members_lex();
  for (Subset x : a.members_lex())
    for (Subset y : bs)
      if (cardinality(x & y) == t - 1) return WitnessPair{x, y};
  return std::nullopt;
}

SetFamily gen_paired_random(int n, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0 || n > kMaxLayerN)
    throw InputError("gen_paired_random: n must be even and in 2.." + std::to_string(kMaxLayerN));
  const int k = n / 2;
  std::mt19937_64 rng(seed);
  FamilyBuilder builder(n, Storage::layer, k);
  const Subset ground = full_set(n);
  // Gosper's hack walks the k-sets in increasing word order.
  for (std::uint64_t s = full_set(k); s <= ground;) {
    const Subset set = static_cast<Subset>(s);
    if (set & 1U) builder.add((rng() & 1U) ? set : (ground & ~set));
    const std::uint64_t c = s & (~s + 1);
    const std::uint64_t r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return std::move(builder).build();
}

}  // namespace setfam
