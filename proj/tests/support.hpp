#pragma once

// Independent oracles and random generators shared by the tests. The oracles
// work from definitions (whole-cube scans, pairwise checks) and never call the
// library routine they are compared against.

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "setfam/family.hpp"
#include "setfam/rational.hpp"

namespace oracle {

using setfam::Rational;
using setfam::SetFamily;
using setfam::Subset;

inline Rational frac(std::uint64_t a, std::uint64_t b) {
  Rational q(static_cast<unsigned long>(a), static_cast<unsigned long>(b));
  q.canonicalize();
  return q;
}

inline Rational rpow(const Rational& q, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= q;
  return out;
}

inline Rational weight(Subset s, int n, const Rational& p) {
  const int a = setfam::cardinality(s);
  return rpow(p, a) * rpow(1 - p, n - a);
}

inline double weight(Subset s, int n, double p) {
  const int a = setfam::cardinality(s);
  double w = 1;
  for (int i = 0; i < a; ++i) w *= p;
  for (int i = a; i < n; ++i) w *= 1 - p;
  return w;
}

template <class P>
P mu(const SetFamily& f, const P& p) {
  P total = 0;
  for (Subset s : f.members()) total += weight(s, f.n(), p);
  return total;
}

template <class P>
P influence(const SetFamily& f, int i, const P& p) {
  P total = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << f.n()); ++s) {
    const auto S = static_cast<Subset>(s);
    if (f.contains(S) != f.contains(S ^ setfam::element_bit(i))) total += weight(S, f.n(), p);
  }
  return total;
}

inline bool t_intersecting(const SetFamily& f, int t) {
  const auto m = f.members();
  for (Subset a : m)
    for (Subset b : m)
      if (setfam::cardinality(a & b) < t) return false;
  return true;
}

inline bool increasing(const SetFamily& f) {
  for (Subset a : f.members())
    for (int e = 1; e <= f.n(); ++e)
      if (!f.contains(a | setfam::element_bit(e))) return false;
  return true;
}

inline SetFamily from_mask(int n, std::uint64_t mask) {
  std::vector<Subset> members;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
    if ((mask >> s) & 1U) members.push_back(static_cast<Subset>(s));
  return SetFamily::from_members(n, setfam::Storage::power_set, members);
}

// Every increasing family on [n], n <= 5, as a 2^n-bit mask. F is increasing iff the
// parts without and with n are increasing and nested.
inline std::vector<std::uint64_t> monotone_masks(int n) {
  if (n == 0) return {0, 1};
  const auto lower = monotone_masks(n - 1);
  const int half = 1 << (n - 1);
  std::vector<std::uint64_t> out;
  for (auto f0 : lower)
    for (auto f1 : lower)
      if ((f0 & ~f1) == 0) out.push_back(f0 | (f1 << half));
  return out;
}

inline Subset random_subset(int n, std::mt19937_64& rng, double q) {
  std::bernoulli_distribution coin(q);
  Subset s = 0;
  for (int e = 1; e <= n; ++e)
    if (coin(rng)) s |= setfam::element_bit(e);
  return s;
}

inline SetFamily random_family(int n, std::mt19937_64& rng, double density) {
  std::bernoulli_distribution coin(density);
  std::vector<Subset> members;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
    if (coin(rng)) members.push_back(static_cast<Subset>(s));
  return SetFamily::from_members(n, setfam::Storage::power_set, members);
}

inline SetFamily random_layer(int n, int k, std::mt19937_64& rng, double density) {
  std::bernoulli_distribution coin(density);
  std::vector<Subset> members;
  for (Subset s : setfam::layer_lex(n, k))
    if (coin(rng)) members.push_back(s);
  return SetFamily::from_members(n, setfam::Storage::layer, members, k);
}

// Up-closure of a few random generators; never empty.
inline SetFamily random_increasing(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_real_distribution<double> q(0.2, 0.7);
  std::vector<Subset> gens;
  const int m = count(rng);
  for (int i = 0; i < m; ++i) gens.push_back(random_subset(n, rng, q(rng)));
  return setfam::up_closure(SetFamily::from_members(n, setfam::Storage::power_set, gens));
}

// Up-closure of random pairwise t-intersecting generators; never empty.
inline SetFamily random_t_intersecting(int n, int t, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> tries(1, 8);
  std::uniform_real_distribution<double> q(0.4, 0.9);
  std::vector<Subset> gens;
  const int m = tries(rng);
  for (int i = 0; i < m; ++i) {
    const Subset s = random_subset(n, rng, q(rng));
    bool ok = setfam::cardinality(s) >= t;
    for (Subset g : gens) ok = ok && setfam::cardinality(s & g) >= t;
    if (ok) gens.push_back(s);
  }
  if (gens.empty()) gens.push_back(setfam::full_set(n));
  return setfam::up_closure(SetFamily::from_members(n, setfam::Storage::power_set, gens));
}

// phi(F, J) for a layer-k family, counting each slice by scanning the members.
inline double potential(const SetFamily& f, Subset J) {
  const int n = f.n();
  const int k = f.k();
  const int j = setfam::cardinality(J);
  const double total = static_cast<double>(setfam::binomial(n, k));
  std::vector<double> count(std::size_t{1} << j, 0.0);
  for (Subset a : f.members()) count[setfam::compress_bits(a & J, J)] += 1;
  double phi = 0;
  for (std::size_t idx = 0; idx < count.size(); ++idx) {
    const int b = setfam::cardinality(static_cast<Subset>(idx));
    if (k - b < 0 || k - b > n - j) continue;
    const double layer = static_cast<double>(setfam::binomial(n - j, k - b));
    const double alpha = count[idx] / layer;
    if (alpha > 0) phi += layer / total * alpha * std::log(alpha);
  }
  return phi;
}

// max |mu(F_J^B) - mu(F)| over |J| <= h and B subset of J with a nonempty layer.
inline double quasirandom_deviation(const SetFamily& f, int h) {
  const int n = f.n();
  const int k = f.k();
  const double mu = static_cast<double>(f.size()) / static_cast<double>(setfam::binomial(n, k));
  const auto members = f.members();
  double worst = 0;
  for (std::uint64_t jm = 0; jm < (std::uint64_t{1} << n); ++jm) {
    const auto J = static_cast<Subset>(jm);
    const int j = setfam::cardinality(J);
    if (j > h) continue;
    std::vector<double> count(std::size_t{1} << j, 0.0);
    for (Subset a : members) count[setfam::compress_bits(a & J, J)] += 1;
    for (std::size_t idx = 0; idx < count.size(); ++idx) {
      const int b = setfam::cardinality(static_cast<Subset>(idx));
      if (k - b < 0 || k - b > n - j) continue;
      const double layer = static_cast<double>(setfam::binomial(n - j, k - b));
      worst = std::max(worst, std::fabs(count[idx] / layer - mu));
    }
  }
  return worst;
}

}  // namespace oracle
