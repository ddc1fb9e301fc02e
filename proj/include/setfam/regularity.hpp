#pragma once

// Slice distributions, the entropy-style potential phi, quasirandomness
// testers and the weak regularity decomposition of a uniform family.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "setfam/family.hpp"
#include "setfam/rational.hpp"

namespace setfam {

/// Pr[A cap J = B] for a uniform k-subset A of [n]; entry index is compress_bits(B, J).
struct SliceDistribution {
  int n = 0;
  int k = 0;
  Subset J = 0;
  std::vector<Rational> table;

  [[nodiscard]] const Rational& at(Subset B) const { return table[compress_bits(B, J)]; }
  /// Smallest nonzero entry.
  [[nodiscard]] Rational min_positive() const;
};

[[nodiscard]] SliceDistribution slice_distribution(int n, int k, Subset J);

/// phi(F, J) = E_B alpha_B log alpha_B with alpha_B = mu(F_J^B); zero-probability B skipped.
[[nodiscard]] double potential(const SetFamily& family, Subset J);

/// Largest number of sets J a tester may scan before raising ResourceError.
inline constexpr std::uint64_t kDefaultScanBudget = 5'000'000;

struct StabilityCheck {
  bool holds = true;
  std::optional<Subset> witness;  // first J (size, then lex) with phi(F,J) >= phi(F,{}) + eta
  double base = 0;                // phi(F, {})
  double witness_value = 0;
  explicit operator bool() const noexcept { return holds; }
};

/// phi(F,J) < phi(F,{}) + eta for every |J| <= h.
[[nodiscard]] StabilityCheck is_potentially_stable(const SetFamily& family, double eta, int h,
                                                   std::uint64_t budget = kDefaultScanBudget);

struct QuasirandomCheck {
  bool holds = true;
  std::optional<SlicePointer> witness;  // first bad J; its B with the largest deviation
  double max_deviation = 0;             // over all scanned (J, B)
  explicit operator bool() const noexcept { return holds; }
};

/// |mu(F_J^B) - mu(F)| < delta for every |J| <= h and every B subset of J with a nonempty layer.
[[nodiscard]] QuasirandomCheck is_slice_quasirandom(const SetFamily& family, double delta, int h,
                                                    std::uint64_t budget = kDefaultScanBudget);

/// min{lambda delta^2 / 2C, lambda^3 delta^2 / (2 (1-lambda)^2 C)}.
[[nodiscard]] double eta_for(double lambda, double delta, double weight);

/// f(x) = x log x, f(0) = 0.
[[nodiscard]] double xlogx(double x);

struct FoxGap {
  double lhs = 0;  // E f(X)
  double rhs = 0;  // f(EX) + (1 - beta + f(beta)) Pr[X <= beta EX] EX
  bool holds = false;
};

/// Checks E f(X) >= f(EX) + (1 - beta + f(beta)) Pr[X <= beta EX] EX within tol.
[[nodiscard]] FoxGap fox_gap_check(const std::vector<double>& probs, const std::vector<double>& x,
                                   double beta, double tol = 1e-12);

struct JensenConcentration {
  double lambda = 0;     // smallest probability
  double eta = 0;        // eta_for(lambda, delta, weight)
  double gap = 0;        // E f(X) - f(EX)
  double deviation = 0;  // max |X - EX|
  bool premise = false;  // gap < eta
  bool conclusion = false;  // deviation < delta
  [[nodiscard]] bool holds() const { return !premise || conclusion; }
};

/// The concentration statement behind eta_for: a small Jensen gap forces |X - EX| < delta.
[[nodiscard]] JensenConcentration jensen_concentration(const std::vector<double>& probs,
                                                       const std::vector<double>& x, double delta,
                                                       double weight);

enum class SliceClass { good, bad, exceptional };

[[nodiscard]] std::string to_string(SliceClass c);

struct SliceDiagnostic {
  Subset B = 0;
  SliceClass cls = SliceClass::exceptional;
  double weight = 0;   // Pr[A cap J = B]
  double density = 0;  // mu(F_J^B)
  double margin = 0;   // delta minus the slice's largest deviation (good and bad slices)
  std::optional<Subset> witness;  // S_B in [n] coordinates, bad slices only
};

struct DecompositionRound {
  Subset J = 0;
  double phi = 0;
  double eta = 0;
  double lambda = 0;
  double outside = 0;  // mu(F \ <G_J>)
};

struct DecompositionResult {
  Subset J = 0;
  std::vector<Subset> good;
  std::vector<SliceDiagnostic> slices;
  std::vector<DecompositionRound> log;
  Rational outside;  // mu(F \ <G>) exactly
  double eta = 0;
  int iterations = 0;
};

struct DecompositionOptions {
  std::uint64_t scan_budget = kDefaultScanBudget;
};

/// The good/bad/exceptional iteration. eta is eta_for(lambda, delta, 1) where lambda is the
/// smaller of (zeta/2)^h and the least positive slice probability any good slice can meet.
/// Throws ContractError unless zeta n < k < (1 - zeta) n, and ResourceError when more than
/// 2/(e eta eps) rounds are needed.
[[nodiscard]] DecompositionResult regularity_decompose(const SetFamily& family, double zeta,
                                                       double delta, int h, double eps,
                                                       const DecompositionOptions& options = {});

/// Structured report: one line per slice, then a summary.
[[nodiscard]] std::string render_decomposition(const DecompositionResult& result);

/// Lexicographically first A in a, B in b with |A cap B| = t - 1.
[[nodiscard]] std::optional<WitnessPair> intersection_witness(const SetFamily& a,
                                                              const SetFamily& b, int t);

/// One of each complementary pair of n/2-sets, chosen by a seeded coin. Layer n/2.
[[nodiscard]] SetFamily gen_paired_random(int n, std::uint64_t seed);

}  // namespace setfam
