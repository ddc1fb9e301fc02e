#pragma once

// Shadows, lexicographic segments and the cross-intersecting inequalities.

#include <cstdint>
#include <optional>

#include "setfam/family.hpp"
#include "setfam/rational.hpp"

namespace setfam {

/// Lower shadow of a layer-k family: all (k-1)-sets inside some member.
[[nodiscard]] SetFamily lower_shadow(const SetFamily& family);
/// `steps` applications of lower_shadow; throws InputError when steps > k.
[[nodiscard]] SetFamily iterated_shadow(const SetFamily& family, int steps);

/// First m k-subsets of [n] in lex order; throws InputError when m > C(n,k).
[[nodiscard]] SetFamily lex_segment(int n, int k, std::uint64_t m);
/// L(F): the lex segment of the same size and layer.
[[nodiscard]] SetFamily lex_compress(const SetFamily& family);
[[nodiscard]] bool is_lex_segment(const SetFamily& family);
/// First m k-subsets of [n] in colex order (compare largest differing elements).
[[nodiscard]] SetFamily colex_segment(int n, int k, std::uint64_t m);
/// Smallest possible |shadow| of m k-sets: the shadow of the colex segment (Kruskal-Katona).
/// Lex segments do not attain it in general, e.g. {12,13,14} against {12,13,23}.
[[nodiscard]] std::uint64_t kk_shadow_minimum(int n, int k, std::uint64_t m);

/// A cap B != {} for every A in a, B in b; the witness is the lexicographically first
/// disjoint pair (first by A, then by B).
[[nodiscard]] IntersectionCheck cross_intersecting(const SetFamily& a, const SetFamily& b);

/// The largest family in layer l (or the whole cube when l is empty) cross-intersecting `a`.
[[nodiscard]] SetFamily max_cross_partner(const SetFamily& a, std::optional<int> l);

struct KKCrossReport {
  std::uint64_t size_b = 0;
  std::uint64_t bound = 0;         // C(n-r, l-r)
  std::uint64_t shadow_size = 0;   // |shadow^{n-k-l} of the complements of A|
  std::uint64_t shadow_bound = 0;  // C(n,l) - C(n-r,l-r)
  bool shadow_disjoint = false;    // B misses that shadow
  bool holds = false;              // size_b <= bound
  bool chain_holds = false;        // shadow_size >= shadow_bound
};

/// If A (layer k) and B (layer l) cross-intersect, n >= k+l and |A| >= C(n,k) - C(n-r,k),
/// then |B| <= C(n-r,l-r). Throws ContractError naming the failed hypothesis.
[[nodiscard]] KKCrossReport kk_cross_bound_audit(const SetFamily& a, const SetFamily& b, int r);

/// Smallest c0 the inequality chain of the weighted bound provably works with:
/// 3 + ceil(log(2C) / log(1+eta)), and at least 3.
[[nodiscard]] int sufficient_c0(double eta, double weight);

struct WeightedCrossReport {
  double lhs = 0;  // |A| + C|B|
  double rhs = 0;  // C(n,l) - C(n-d,l) + C * C(n-d,k-d)
  bool admissible = false;  // size hypotheses on n, l, k, c0
  bool holds = false;
  bool equality = false;
};

/// |A| + C|B| <= C(n,l) - C(n-d,l) + C C(n-d,k-d) for cross-intersecting A (layer l),
/// B (layer k) with |A| <= C(n,l) - C(n-d,l). Throws ContractError when A, B do not
/// cross-intersect or the size hypothesis on A fails; `admissible` reports the n, l, k
/// conditions for the supplied c0.
[[nodiscard]] WeightedCrossReport weighted_cross_bound_audit(const SetFamily& a,
                                                             const SetFamily& b, double weight,
                                                             int d, double eta, int c0);

/// |F| + M|G| <= C(n,k1) - C(n-d,k1) + M C(n-d,k2-d) for cross-intersecting F (layer k1),
/// G (layer k2) with C(n-d,k2-d) <= |G| <= C(n-c,k2-c), c <= d <= k2. `admissible` checks
/// zeta n <= k1, k2 <= (1/2 - zeta) n, c >= c0 + |k1 - k2| and the reduced instance's
/// hypotheses with c0 = sufficient_c0(zeta, M).
[[nodiscard]] WeightedCrossReport slice_cross_bound_audit(const SetFamily& f, const SetFamily& g,
                                                          double weight, int c, int d,
                                                          double zeta);

struct BiasedCrossReport {
  double mu_f = 0;
  double power_rhs = 0;  // (1 - mu_p(G))^{log_{1-p} p}
  bool power_holds = false;
  bool power_equality = false;
  Rational half_sum;  // mu_{1/2}(F) + mu_{1/2}(G)
  bool half_holds = false;
};

/// Evaluates mu_p(F) <= (1 - mu_p(G))^{log_{1-p} p} (tolerance `tol`) and
/// mu_{1/2}(F) + mu_{1/2}(G) <= 1 (exact). Throws ContractError unless F, G cross-intersect.
[[nodiscard]] BiasedCrossReport biased_cross_bounds_audit(const SetFamily& f, const SetFamily& g,
                                                          const Bias& p, double tol = 1e-12);

}  // namespace setfam
