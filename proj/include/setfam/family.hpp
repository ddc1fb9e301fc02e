#pragma once

// Set families over a ground set [n], the value every other module works on.
//
// A family is stored either densely (one bit per subset of [n], n <= 24) or
// sparsely (sorted vector of member words, n <= 30). The storage is part of
// the value and only changes through with_storage(). Families may carry a
// layer tag k, in which case every member has exactly k elements and
// layer-relative notions (slices, juntas, mu) are used.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "setfam/subset.hpp"

namespace setfam {

enum class Storage { power_set, layer };

class SetFamily {
 public:
  /// The empty family over [n].
  SetFamily(int n, Storage storage, std::optional<int> k = std::nullopt);

  /// Deduplicates and validates `members`; throws InputError on out-of-range words
  /// or (when k is given) members of the wrong size.
  static SetFamily from_members(int n, Storage storage, std::vector<Subset> members,
                                std::optional<int> k = std::nullopt);

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] Storage storage() const noexcept { return storage_; }
  [[nodiscard]] std::optional<int> layer() const noexcept { return k_; }
  [[nodiscard]] bool is_uniform() const noexcept { return k_.has_value(); }
  /// The layer index; throws InputError for untagged families.
  [[nodiscard]] int k() const;
  [[nodiscard]] Subset ground() const noexcept { return full_set(n_); }

  [[nodiscard]] std::size_t size() const noexcept { return count_; }
  [[nodiscard]] bool empty() const noexcept { return count_ == 0; }
  [[nodiscard]] bool contains(Subset s) const noexcept;

  /// Members in increasing word order.
  [[nodiscard]] std::vector<Subset> members() const;
  /// Members in lexicographic order of their element lists.
  [[nodiscard]] std::vector<Subset> members_lex() const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    if (storage_ == Storage::layer) {
      for (Subset s : sorted_) fn(s);
      return;
    }
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t word = bits_[w];
      while (word != 0) {
        const int b = std::countr_zero(word);
        fn(static_cast<Subset>(w * 64 + static_cast<std::size_t>(b)));
        word &= word - 1;
      }
    }
  }

  /// Same members, other storage. Throws ResourceError when n > 24 for power_set.
  [[nodiscard]] SetFamily with_storage(Storage storage) const;
  /// Same members tagged with layer k; throws InputError if some member has another size.
  [[nodiscard]] SetFamily with_layer(int k) const;
  /// Same members with the layer tag removed.
  [[nodiscard]] SetFamily untagged() const;

  /// Equal ground set, layer tag and members. Storage is not compared.
  friend bool operator==(const SetFamily& a, const SetFamily& b);

 private:
  friend class FamilyBuilder;

  int n_;
  Storage storage_;
  std::optional<int> k_;
  std::vector<std::uint64_t> bits_;
  std::vector<Subset> sorted_;
  std::size_t count_ = 0;
};

/// Accumulates members and produces an immutable family.
class FamilyBuilder {
 public:
  FamilyBuilder(int n, Storage storage, std::optional<int> k = std::nullopt);
  void add(Subset s);
  void add_all(std::span<const Subset> members);
  [[nodiscard]] SetFamily build() &&;

 private:
  SetFamily family_;
};

/// Storage used when the caller does not choose: dense when n allows it.
[[nodiscard]] Storage default_storage(int n) noexcept;

/// Builds a family from 1-based element lists; throws InputError on elements outside 1..n.
[[nodiscard]] SetFamily make_family(int n, const std::vector<std::vector<int>>& sets);
[[nodiscard]] SetFamily make_family(int n, const std::vector<std::vector<int>>& sets,
                                    Storage storage);
/// As make_family, tagged with layer k (layer storage).
[[nodiscard]] SetFamily make_uniform_family(int n, int k,
                                            const std::vector<std::vector<int>>& sets);

[[nodiscard]] SetFamily power_set_family(int n);
[[nodiscard]] SetFamily full_layer(int n, int k, Storage storage = Storage::layer);
/// D_i = {S : i in S}.
[[nodiscard]] SetFamily dictatorship(int n, int i);
/// AND_B = {S : B subset of S}; with k, restricted to the k-th layer.
[[nodiscard]] SetFamily and_family(int n, Subset base, std::optional<int> k = std::nullopt);
/// OR_B = {S : S meets B}; with k, restricted to the k-th layer.
[[nodiscard]] SetFamily or_family(int n, Subset base, std::optional<int> k = std::nullopt);

struct WitnessPair {
  Subset first = 0;
  Subset second = 0;
  friend bool operator==(const WitnessPair&, const WitnessPair&) = default;
};

struct IntersectionCheck {
  bool holds = true;
  std::optional<WitnessPair> witness;  // lexicographically minimal violating pair
  explicit operator bool() const noexcept { return holds; }
};

/// |A cap B| >= t for every A, B in F (A = B included).
[[nodiscard]] IntersectionCheck is_t_intersecting(const SetFamily& family, int t);

/// A pair A, B in F with |A cap B| = t - 1, lexicographically minimal; none if F avoids it.
[[nodiscard]] std::optional<WitnessPair> forbidden_intersection_witness(const SetFamily& family,
                                                                        int t);

/// A subset B of A in F implies A in F (cube order; the layer tag is ignored).
[[nodiscard]] bool is_increasing(const SetFamily& family);

/// Minimal increasing family containing F. Dense result; needs n <= 24.
[[nodiscard]] SetFamily up_closure(const SetFamily& family);

/// F* = {S : [n] \ S not in F}. Dense result; needs n <= 24.
[[nodiscard]] SetFamily dual(const SetFamily& family);

/// P([n]) \ F, or the layer complement for tagged families.
[[nodiscard]] SetFamily complement(const SetFamily& family);

[[nodiscard]] SetFamily family_union(const SetFamily& a, const SetFamily& b);
[[nodiscard]] SetFamily family_intersection(const SetFamily& a, const SetFamily& b);
[[nodiscard]] SetFamily family_difference(const SetFamily& a, const SetFamily& b);
/// F^(k): members of size k, tagged with layer k.
[[nodiscard]] SetFamily layer_of(const SetFamily& family, int k);
/// Number of members of each size 0..n.
[[nodiscard]] std::vector<std::uint64_t> size_profile(const SetFamily& family);

struct SlicePointer {
  Subset J = 0;
  Subset B = 0;
};

/// F_J^B = {S \ B : S in F, S cap J = B}, re-indexed onto [n - |J|] preserving order.
/// Tagged families yield a family tagged with k - |B|.
[[nodiscard]] SetFamily slice(const SetFamily& family, SlicePointer ptr);

/// Number of members S with S cap J = B for every B subset of J; entry index is
/// compress_bits(B, J).
[[nodiscard]] std::vector<std::uint64_t> slice_counts(const SetFamily& family, Subset J);

/// The J-junta <G>: all S (of size k, if given) with S cap J in G.
[[nodiscard]] SetFamily junta_generate(int n, std::optional<int> k, Subset J,
                                       std::span<const Subset> generators);
[[nodiscard]] SetFamily junta_generate(int n, std::optional<int> k, Subset J,
                                       std::span<const Subset> generators, Storage storage);

/// Membership depends only on S cap J (within the layer for tagged families).
[[nodiscard]] bool is_junta(const SetFamily& family, Subset J);

/// Coordinates i with some A in F such that A xor {i} is not in F (cube sense).
[[nodiscard]] Subset live_coordinates(const SetFamily& family);

/// {sigma(S) : S in F}; sigma[i - 1] is the image of i. Throws InputError unless a bijection.
[[nodiscard]] SetFamily apply_permutation(const SetFamily& family, std::span<const int> sigma);
[[nodiscard]] Subset permute(Subset s, std::span<const int> sigma) noexcept;
[[nodiscard]] std::vector<int> inverse_permutation(std::span<const int> sigma);

}  // namespace setfam
