#pragma once

// Uniform and p-biased measures, influences and the degree-1 Fourier level.
//
// Everything is computed from size profiles, so the cost is one pass over the
// members per quantity. Values are exact whenever the bias is exact.

#include <cstdint>
#include <vector>

#include "setfam/family.hpp"
#include "setfam/rational.hpp"

namespace setfam {

/// |F| / C(n,k) for a layer-tagged family.
[[nodiscard]] Rational mu_uniform(const SetFamily& family);

/// sum_j profile[j] p^j (1-p)^(n-j).
[[nodiscard]] Scalar weigh_profile(const std::vector<std::uint64_t>& profile, int n,
                                   const Bias& p);

/// mu_p(F) = sum over A in F of p^|A| (1-p)^(n-|A|).
[[nodiscard]] Scalar mu_biased(const SetFamily& family, const Bias& p);
[[nodiscard]] double mu_biased(const SetFamily& family, double p);

/// I_i^p(F): the mu_p measure of the points where flipping i changes membership.
[[nodiscard]] Scalar influence(const SetFamily& family, int i, const Bias& p);
/// All n influences, coordinate i at index i - 1.
[[nodiscard]] std::vector<Scalar> influences(const SetFamily& family, const Bias& p);
[[nodiscard]] Scalar total_influence(const SetFamily& family, const Bias& p);

/// Central difference (mu_{p+h} - mu_{p-h}) / 2h. Error is O(h^2).
[[nodiscard]] double derivative_mu(const SetFamily& family, double p, double step = 1e-4);

/// f^({i}) against the orthonormal characters (x_i - p)/sqrt(p(1-p)), index i - 1.
[[nodiscard]] std::vector<double> fourier_level1(const SetFamily& family, const Bias& p);

struct MeasureReport {
  Scalar mu;
  std::vector<Scalar> influences;
  Scalar total;
};

[[nodiscard]] MeasureReport measure_report(const SetFamily& family, const Bias& p);

struct IsoperimetryReport {
  double lhs = 0;  // p I^p(F)
  double rhs = 0;  // mu log_p mu
  bool holds = false;
  bool equality = false;
  bool exact = false;  // verdict certified (exact bias)
};

/// Compares p I^p(F) with mu_p(F) log_p mu_p(F). With an exact bias the verdict
/// is certified; otherwise `tol` is used. Throws ContractError unless F is
/// increasing, nonempty and proper.
[[nodiscard]] IsoperimetryReport isoperimetry_check(const SetFamily& family, const Bias& p,
                                                    double tol = 1e-12);

}  // namespace setfam
