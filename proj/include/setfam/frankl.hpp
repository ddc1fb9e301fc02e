#pragma once

// Frankl families F_{n,k,t,r}, the tightness families H and H~, and the
// closed forms for f(n,k,t) and f(n,p,t).

#include <cstdint>
#include <optional>
#include <vector>

#include "setfam/family.hpp"
#include "setfam/rational.hpp"

namespace setfam {

struct FranklSpec {
  int n = 0;
  int t = 1;
  int r = 0;
  Subset base = 0;  // 0 means [t+2r]
  std::optional<int> k;
};

/// The base set actually used: `spec.base` or [t+2r]. Throws InputError on invalid specs.
[[nodiscard]] Subset frankl_base(const FranklSpec& spec);

/// {S : |S cap base| >= t+r}, restricted to layer k when given (layer storage),
/// otherwise over the whole cube (power-set storage).
[[nodiscard]] SetFamily frankl_family(const FranklSpec& spec);

/// |F_{n,k,t,r}| = sum_{i>=t+r} C(t+2r,i) C(n-t-2r,k-i).
[[nodiscard]] std::uint64_t frankl_size(int n, int k, int t, int r);

struct UniformOptimum {
  std::uint64_t value = 0;
  std::vector<int> argmax;
};

/// max_r |F_{n,k,t,r}| over 0 <= r <= k-t with t+2r <= n.
[[nodiscard]] UniformOptimum f_uniform(int n, int k, int t);

/// mu_p(F_{n,t,r}) = sum_{i=t+r}^{t+2r} C(t+2r,i) p^i (1-p)^(t+2r-i), independent of n.
[[nodiscard]] Scalar frankl_measure(const Bias& p, int t, int r);

/// Smallest r with r/(t+2r-1) > p: past it the closed form only decreases.
[[nodiscard]] int default_r_max(const Bias& p, int t);

struct BiasedOptimum {
  Scalar value;
  std::vector<int> argmax;       // all maximizers (exact ties, or within tol for floats)
  std::vector<int> near_window;  // floats only: r within 10 * tol of the maximum
  int r_max = 0;                 // last r scanned
};

/// max of the closed form over 0 <= r <= r_max with t+2r <= n. Throws InputError for p >= 1/2.
[[nodiscard]] BiasedOptimum f_biased(int n, const Bias& p, int t,
                                     std::optional<int> r_max = std::nullopt,
                                     double tol = 1e-12);

struct RStar {
  int r = 0;
  bool singular = false;
  std::vector<int> near_window;
};

/// The maximizing r of the closed form at p = beta (smallest one when singular).
[[nodiscard]] RStar r_star(const Bias& beta, int t, double tol = 1e-12);

struct TightnessSpec {
  int n = 0;
  int t = 1;
  int r = 0;
  int s = 0;  // called d for the uniform family
  std::optional<int> k;
};

/// H_{n,k,t,r,d} (with k) or H~_{n,t,r,s} (without): sets with |A cap [t+2r]| >= t+r meeting
/// {t+2r+1..t+2r+s}, plus sets with |A cap [t+2r]| = t+r-1 containing that block.
[[nodiscard]] SetFamily tightness_family(const TightnessSpec& spec);

struct TightnessForms {
  Scalar mu;      // mu_p(H~)
  Scalar excess;  // mu_p(H~ \ F_{n,t,r})
};

/// The closed forms for mu_p(H~) and mu_p(H~ \ F_{n,t,r}); the former uses mu_p(F_{n,t,r})
/// for the given r.
[[nodiscard]] TightnessForms tightness_closed_forms(const TightnessSpec& spec, const Bias& p);

struct FranklDistance {
  std::uint64_t distance = 0;
  FranklSpec best;
};

/// min |F \ G| over copies G of F_{n,k,t,r}, r <= r_max; ties keep the smallest r, then the
/// lexicographically first base.
[[nodiscard]] FranklDistance distance_to_frankl(const SetFamily& family, int t, int r_max);

}  // namespace setfam
