#pragma once

// Subsets of a small ground set [n] = {1, ..., n}, encoded as n-bit words.
// Element i lives in bit (i - 1).

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace setfam {

using Subset = std::uint32_t;

/// Largest ground set for which the dense (power-set) representation is allowed.
inline constexpr int kMaxPowerSetN = 24;
/// Largest ground set for the sparse (layer) representation.
inline constexpr int kMaxLayerN = 30;

[[nodiscard]] constexpr Subset element_bit(int element) noexcept {
  return Subset{1} << (element - 1);
}

[[nodiscard]] constexpr bool has_element(Subset s, int element) noexcept {
  return (s >> (element - 1)) & 1U;
}

[[nodiscard]] constexpr int cardinality(Subset s) noexcept { return std::popcount(s); }

/// The full set [n].
[[nodiscard]] constexpr Subset full_set(int n) noexcept {
  return n >= 32 ? ~Subset{0} : (Subset{1} << n) - 1;
}

/// {1, ..., m} as a word.
[[nodiscard]] constexpr Subset prefix_set(int m) noexcept { return full_set(m); }

/// {lo, ..., hi}; empty when hi < lo.
[[nodiscard]] constexpr Subset range_set(int lo, int hi) noexcept {
  return hi < lo ? Subset{0} : full_set(hi) & ~full_set(lo - 1);
}

/// Smallest element, or 0 for the empty set.
[[nodiscard]] constexpr int min_element(Subset s) noexcept {
  return s == 0 ? 0 : std::countr_zero(s) + 1;
}

/// Largest element, or 0 for the empty set.
[[nodiscard]] constexpr int max_element(Subset s) noexcept {
  return s == 0 ? 0 : 32 - std::countl_zero(s);
}

/// Strict lexicographic order on ascending element lists (a proper prefix is smaller).
[[nodiscard]] constexpr bool lex_less(Subset a, Subset b) noexcept {
  const Subset diff = a ^ b;
  if (diff == 0) return false;
  const Subset low = diff & (~diff + 1);  // smallest element where the lists diverge
  const Subset above = ~((low << 1) - 1);
  if (a & low) {
    // a continues with the smaller element; b is smaller only if it stops here.
    return (b & above) != 0;
  }
  return (a & above) == 0;
}

struct LexLess {
  constexpr bool operator()(Subset a, Subset b) const noexcept { return lex_less(a, b); }
};

[[nodiscard]] Subset subset_of(std::span<const int> elements);
[[nodiscard]] Subset subset_of(std::initializer_list<int> elements);
[[nodiscard]] std::vector<int> elements_of(Subset s);
/// "{1,3,4}" style rendering.
[[nodiscard]] std::string to_string(Subset s);

/// Packs the bits of `s` selected by `mask` into the low bits, order-preserving.
[[nodiscard]] Subset compress_bits(Subset s, Subset mask) noexcept;
/// Inverse of compress_bits: spreads the low bits of `packed` over `mask`.
[[nodiscard]] Subset expand_bits(Subset packed, Subset mask) noexcept;

/// All k-subsets of [n] in lexicographic order.
[[nodiscard]] std::vector<Subset> layer_lex(int n, int k);
/// All subsets of [n] with at most h elements, ordered by size then lex.
[[nodiscard]] std::vector<Subset> subsets_up_to(int n, int h);
/// All subsets of `mask` ordered by size then lex.
[[nodiscard]] std::vector<Subset> subsets_of_size_then_lex(Subset mask);

/// Exact binomial coefficient; zero outside 0 <= k <= n.
[[nodiscard]] std::uint64_t binomial(int n, int k) noexcept;

}  // namespace setfam
