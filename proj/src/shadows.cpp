#include "setfam/shadows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "setfam/errors.hpp"
#include "setfam/measures.hpp"

namespace setfam {

namespace {

int layer_or_throw(const SetFamily& family, const char* op) {
  if (!family.is_uniform())
    throw InputError(std::string(op) + ": family must be tagged with a layer");
  return family.k();
}

double as_double(std::uint64_t x) { return static_cast<double>(x); }

bool close(double a, double b) { return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(b)); }

}  // namespace

SetFamily lower_shadow(const SetFamily& family) {
  const int k = layer_or_throw(family, "lower_shadow");
  if (k == 0) throw InputError("lower_shadow: layer 0 has no shadow");
  FamilyBuilder builder(family.n(), family.storage(), k - 1);
  family.for_each([&](Subset s) {
    for (Subset rest = s; rest != 0; rest &= rest - 1) builder.add(s & ~(rest & (~rest + 1)));
  });
  return std::move(builder).build();
}

SetFamily iterated_shadow(const SetFamily& family, int steps) {
  const int k = layer_or_throw(family, "iterated_shadow");
  if (steps < 0 || steps > k)
    throw InputError("iterated_shadow: steps = " + std::to_string(steps) + " exceeds k = " +
                     std::to_string(k));
  SetFamily out = family;
  for (int i = 0; i < steps; ++i) out = lower_shadow(out);
  return out;
}

SetFamily lex_segment(int n, int k, std::uint64_t m) {
  if (m > binomial(n, k))
    throw InputError("lex_segment: m = " + std::to_string(m) + " exceeds C(n,k) = " +
                     std::to_string(binomial(n, k)));
  std::vector<Subset> layer = layer_lex(n, k);
  layer.resize(m);
  return SetFamily::from_members(n, Storage::layer, std::move(layer), k);
}

SetFamily lex_compress(const SetFamily& family) {
  const int k = layer_or_throw(family, "lex_compress");
  return lex_segment(family.n(), k, family.size()).with_storage(family.storage());
}

bool is_lex_segment(const SetFamily& family) { return lex_compress(family) == family; }

SetFamily colex_segment(int n, int k, std::uint64_t m) {
  if (m > binomial(n, k))
    throw InputError("colex_segment: m = " + std::to_string(m) + " exceeds C(n,k) = " +
                     std::to_string(binomial(n, k)));
  std::vector<Subset> members;
  members.reserve(m);
  if (m > 0) {
    // Gosper's hack walks k-sets in increasing word order, which is colex.
    std::uint64_t s = (std::uint64_t{1} << k) - 1;
    for (std::uint64_t i = 0; i < m; ++i) {
      members.push_back(static_cast<Subset>(s));
      if (s == 0) break;
      const std::uint64_t c = s & (~s + 1);
      const std::uint64_t r = s + c;
      s = (((r ^ s) >> 2) / c) | r;
    }
  }
  return SetFamily::from_members(n, Storage::layer, std::move(members), k);
}

std::uint64_t kk_shadow_minimum(int n, int k, std::uint64_t m) {
  if (k == 0) return 0;
  return lower_shadow(colex_segment(n, k, m)).size();
}

IntersectionCheck cross_intersecting(const SetFamily& a, const SetFamily& b) {
  IntersectionCheck out;
  const auto as = a.members_lex();
  const auto bs = b.members_lex();
  for (Subset x : as)
    for (Subset y : bs)
      if ((x & y) == 0) {
        out.holds = false;
        out.witness = WitnessPair{x, y};
        return out;
      }
  return out;
}

SetFamily max_cross_partner(const SetFamily& a, std::optional<int> l) {
  const int n = a.n();
  const auto members = a.members();
  auto keep = [&](Subset s) {
    for (Subset x : members)
      if ((x & s) == 0) return false;
    return true;
  };
  if (l) {
    FamilyBuilder builder(n, Storage::layer, l);
    for (Subset s : layer_lex(n, *l))
      if (keep(s)) builder.add(s);
    return std::move(builder).build();
  }
  FamilyBuilder builder(n, Storage::power_set);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
    if (keep(static_cast<Subset>(s))) builder.add(static_cast<Subset>(s));
  return std::move(builder).build();
}

KKCrossReport kk_cross_bound_audit(const SetFamily& a, const SetFamily& b, int r) {
  const int k = layer_or_throw(a, "kk_cross_bound_audit");
  const int l = layer_or_throw(b, "kk_cross_bound_audit");
  const int n = a.n();
  if (b.n() != n) throw InputError("kk_cross_bound_audit: families over different ground sets");
  if (r < 0) throw InputError("kk_cross_bound_audit: r must be >= 0");
  if (n < k + l) throw ContractError("kk_cross_bound_audit: needs n >= k + l");
  if (a.size() < binomial(n, k) - binomial(n - r, k))
    throw ContractError("kk_cross_bound_audit: |A| < C(n,k) - C(n-r,k)");
  if (!cross_intersecting(a, b))
    throw ContractError("kk_cross_bound_audit: A and B are not cross-intersecting");

  KKCrossReport out;
  out.size_b = b.size();
  out.bound = binomial(n - r, l - r);
  out.holds = out.size_b <= out.bound;

  FamilyBuilder comp(n, Storage::layer, n - k);
  a.for_each([&](Subset s) { comp.add(a.ground() & ~s); });
  const SetFamily shadow = iterated_shadow(std::move(comp).build(), n - k - l);
  out.shadow_size = shadow.size();
  out.shadow_bound = binomial(n, l) - binomial(n - r, l - r);
  out.chain_holds = out.shadow_size >= out.shadow_bound;
  out.shadow_disjoint = family_intersection(b, shadow).empty();
  return out;
}

int sufficient_c0(double eta, double weight) {
  if (!(eta > 0)) throw InputError("sufficient_c0: eta must be > 0");
  if (weight < 0) throw InputError("sufficient_c0: weight must be >= 0");
  if (2 * weight <= 1) return 3;
  return 3 + static_cast<int>(std::ceil(std::log(2 * weight) / std::log1p(eta)));
}

WeightedCrossReport weighted_cross_bound_audit(const SetFamily& a, const SetFamily& b,
                                               double weight, int d, double eta, int c0) {
  const int l = layer_or_throw(a, "weighted_cross_bound_audit");
  const int k = layer_or_throw(b, "weighted_cross_bound_audit");
  const int n = a.n();
  if (b.n() != n) throw InputError("weighted_cross_bound_audit: different ground sets");
  if (d < 0 || d > n) throw InputError("weighted_cross_bound_audit: d outside 0..n");
  if (weight < 0) throw InputError("weighted_cross_bound_audit: weight must be >= 0");
  const std::uint64_t cap = binomial(n, l) - binomial(n - d, l);
  if (a.size() > cap) throw ContractError("weighted_cross_bound_audit: |A| > C(n,l) - C(n-d,l)");
  if (!cross_intersecting(a, b))
    throw ContractError("weighted_cross_bound_audit: A and B are not cross-intersecting");

  WeightedCrossReport out;
  out.admissible = n >= (1 + eta) * l + k + c0 && l >= k + c0 - 1;
  out.lhs = as_double(a.size()) + weight * as_double(b.size());
  out.rhs = as_double(cap) + weight * as_double(binomial(n - d, k - d));
  out.holds = out.lhs <= out.rhs || close(out.lhs, out.rhs);
  out.equality = close(out.lhs, out.rhs);
  return out;
}

WeightedCrossReport slice_cross_bound_audit(const SetFamily& f, const SetFamily& g, double weight,
                                            int c, int d, double zeta) {
  const int k1 = layer_or_throw(f, "slice_cross_bound_audit");
  const int k2 = layer_or_throw(g, "slice_cross_bound_audit");
  const int n = f.n();
  if (g.n() != n) throw InputError("slice_cross_bound_audit: different ground sets");
  if (c < 0 || d < c || d > k2) throw InputError("slice_cross_bound_audit: needs c <= d <= k2");
  if (g.size() < binomial(n - d, k2 - d) || g.size() > binomial(n - c, k2 - c))
    throw ContractError("slice_cross_bound_audit: |G| outside [C(n-d,k2-d), C(n-c,k2-c)]");
  if (!cross_intersecting(f, g))
    throw ContractError("slice_cross_bound_audit: F and G are not cross-intersecting");

  WeightedCrossReport out;
  const int c0 = sufficient_c0(zeta, weight);
  const int j = std::abs(k1 - k2);
  const double nd = n;
  out.admissible = zeta * nd <= k1 && zeta * nd <= k2 && k1 <= (0.5 - zeta) * nd &&
                   k2 <= (0.5 - zeta) * nd && c >= c0 + j &&
                   n - c >= (1 + zeta) * k1 + (k2 - c) + c0 && k1 >= (k2 - c) + c0 - 1;
  out.lhs = as_double(f.size()) + weight * as_double(g.size());
  out.rhs = as_double(binomial(n, k1) - binomial(n - d, k1)) +
            weight * as_double(binomial(n - d, k2 - d));
  out.holds = out.lhs <= out.rhs || close(out.lhs, out.rhs);
  out.equality = close(out.lhs, out.rhs);
  return out;
}

BiasedCrossReport biased_cross_bounds_audit(const SetFamily& f, const SetFamily& g,
                                            const Bias& p, double tol) {
  if (f.n() != g.n()) throw InputError("biased_cross_bounds_audit: different ground sets");
  if (p.value() > 0.5) throw InputError("biased_cross_bounds_audit: p must be <= 1/2");
  if (!cross_intersecting(f, g))
    throw ContractError("biased_cross_bounds_audit: F and G are not cross-intersecting");
  BiasedCrossReport out;
  const long double pv = p.value();
  const long double mf = mu_biased(f, p).value();
  const long double rest = 1.0L - static_cast<long double>(mu_biased(g, p).value());
  const long double expo = std::log(pv) / std::log1p(-pv);
  const long double rhs = rest <= 0 ? 0.0L : std::exp(std::log(rest) * expo);
  out.mu_f = static_cast<double>(mf);
  out.power_rhs = static_cast<double>(rhs);
  out.power_holds = mf <= rhs + tol;
  out.power_equality = std::fabs(mf - rhs) <= tol;

  const Bias half(Rational(1, 2));
  out.half_sum = mu_biased(f, half).rational() + mu_biased(g, half).rational();
  out.half_holds = out.half_sum <= 1;
  return out;
}

}  // namespace setfam
