#include "setfam/family.hpp"

#include <algorithm>
#include <string>

#include "setfam/errors.hpp"

namespace setfam {

namespace {

void check_ground(int n) {
  if (n < 0 || n > kMaxLayerN)
    throw InputError("ground set size " + std::to_string(n) + " outside 0.." +
                     std::to_string(kMaxLayerN));
}

void check_dense(int n) {
  if (n > kMaxPowerSetN)
    throw ResourceError("power-set storage needs n <= " + std::to_string(kMaxPowerSetN) +
                        ", got n = " + std::to_string(n));
}

std::size_t word_count(int n) {
  return n <= 6 ? 1 : (std::size_t{1} << (n - 6));
}

// For bit b < 6, the positions of a 64-bit word whose index lacks bit b.
constexpr std::uint64_t kLowHalf[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

std::vector<std::uint64_t> dense_bits(const SetFamily& family) {
  check_dense(family.n());
  std::vector<std::uint64_t> bits(word_count(family.n()), 0);
  family.for_each([&](Subset s) { bits[s >> 6] |= std::uint64_t{1} << (s & 63); });
  return bits;
}

SetFamily from_bits(int n, const std::vector<std::uint64_t>& bits, Storage storage,
                    std::optional<int> k) {
  FamilyBuilder builder(n, storage, k);
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::size_t w = 0; w < bits.size(); ++w) {
    std::uint64_t word = bits[w];
    while (word != 0) {
      const std::uint64_t s = w * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
      if (s < limit) builder.add(static_cast<Subset>(s));
      word &= word - 1;
    }
  }
  return std::move(builder).build();
}

void require_same_ground(const SetFamily& a, const SetFamily& b) {
  if (a.n() != b.n())
    throw InputError("families over different ground sets: " + std::to_string(a.n()) + " vs " +
                     std::to_string(b.n()));
}

template <class Pred>
std::optional<WitnessPair> first_pair(const SetFamily& family, Pred&& bad) {
  const std::vector<Subset> members = family.members_lex();
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i; j < members.size(); ++j)
      if (bad(members[i], members[j])) return WitnessPair{members[i], members[j]};
  return std::nullopt;
}

}  // namespace

SetFamily::SetFamily(int n, Storage storage, std::optional<int> k)
    : n_(n), storage_(storage), k_(k) {
  check_ground(n);
  if (k && (*k < 0 || *k > n))
    throw InputError("layer " + std::to_string(*k) + " outside 0.." + std::to_string(n));
  if (storage == Storage::power_set) {
    check_dense(n);
    bits_.assign(word_count(n), 0);
  }
}

SetFamily SetFamily::from_members(int n, Storage storage, std::vector<Subset> members,
                                  std::optional<int> k) {
  FamilyBuilder builder(n, storage, k);
  builder.add_all(members);
  return std::move(builder).build();
}

int SetFamily::k() const {
  if (!k_) throw InputError("family is not tagged with a layer");
  return *k_;
}

bool SetFamily::contains(Subset s) const noexcept {
  if ((s & ~ground()) != 0) return false;
  if (storage_ == Storage::power_set) return (bits_[s >> 6] >> (s & 63)) & 1U;
  return std::binary_search(sorted_.begin(), sorted_.end(), s);
}

std::vector<Subset> SetFamily::members() const {
  std::vector<Subset> out;
  out.reserve(count_);
  for_each([&](Subset s) { out.push_back(s); });
  return out;
}

std::vector<Subset> SetFamily::members_lex() const {
  std::vector<Subset> out = members();
  std::sort(out.begin(), out.end(), LexLess{});
  return out;
}

SetFamily SetFamily::with_storage(Storage storage) const {
  if (storage == storage_) return *this;
  SetFamily out(n_, storage, k_);
  if (storage == Storage::layer) {
    out.sorted_ = members();
  } else {
    for_each([&](Subset s) { out.bits_[s >> 6] |= std::uint64_t{1} << (s & 63); });
  }
  out.count_ = count_;
  return out;
}

SetFamily SetFamily::with_layer(int k) const {
  if (k < 0 || k > n_) throw InputError("layer " + std::to_string(k) + " outside 0..n");
  for_each([&](Subset s) {
    if (cardinality(s) != k)
      throw InputError("member " + to_string(s) + " is not in layer " + std::to_string(k));
  });
  SetFamily out = *this;
  out.k_ = k;
  return out;
}

SetFamily SetFamily::untagged() const {
  SetFamily out = *this;
  out.k_.reset();
  return out;
}

bool operator==(const SetFamily& a, const SetFamily& b) {
  if (a.n_ != b.n_ || a.k_ != b.k_ || a.count_ != b.count_) return false;
  if (a.storage_ == Storage::layer && b.storage_ == Storage::layer) return a.sorted_ == b.sorted_;
  if (a.storage_ == Storage::power_set && b.storage_ == Storage::power_set)
    return a.bits_ == b.bits_;
  return a.members() == b.members();
}

FamilyBuilder::FamilyBuilder(int n, Storage storage, std::optional<int> k)
    : family_(n, storage, k) {}

void FamilyBuilder::add(Subset s) {
  if ((s & ~family_.ground()) != 0)
    throw InputError("set " + to_string(s) + " is not a subset of [" + std::to_string(family_.n_) +
                     "]");
  if (family_.k_ && cardinality(s) != *family_.k_)
    throw InputError("set " + to_string(s) + " is not in layer " + std::to_string(*family_.k_));
  if (family_.storage_ == Storage::layer) {
    family_.sorted_.push_back(s);
    return;
  }
  std::uint64_t& word = family_.bits_[s >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (s & 63);
  if ((word & bit) == 0) {
    word |= bit;
    ++family_.count_;
  }
}

void FamilyBuilder::add_all(std::span<const Subset> members) {
  for (Subset s : members) add(s);
}

SetFamily FamilyBuilder::build() && {
  if (family_.storage_ == Storage::layer) {
    auto& v = family_.sorted_;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    v.shrink_to_fit();
    family_.count_ = v.size();
  }
  return std::move(family_);
}

Storage default_storage(int n) noexcept {
  return n <= kMaxPowerSetN ? Storage::power_set : Storage::layer;
}

SetFamily make_family(int n, const std::vector<std::vector<int>>& sets) {
  check_ground(n);
  return make_family(n, sets, default_storage(n));
}

SetFamily make_family(int n, const std::vector<std::vector<int>>& sets, Storage storage) {
  FamilyBuilder builder(n, storage);
  for (const auto& elements : sets) {
    for (int e : elements)
      if (e < 1 || e > n)
        throw InputError("element " + std::to_string(e) + " outside 1.." + std::to_string(n));
    builder.add(subset_of(elements));
  }
  return std::move(builder).build();
}

SetFamily make_uniform_family(int n, int k, const std::vector<std::vector<int>>& sets) {
  return make_family(n, sets, Storage::layer).with_layer(k);
}

SetFamily power_set_family(int n) {
  SetFamily empty(n, Storage::power_set);
  return complement(empty);
}

SetFamily full_layer(int n, int k, Storage storage) {
  FamilyBuilder builder(n, storage, k);
  builder.add_all(layer_lex(n, k));
  return std::move(builder).build();
}

SetFamily dictatorship(int n, int i) {
  if (i < 1 || i > n) throw InputError("coordinate " + std::to_string(i) + " outside 1..n");
  const Subset J = element_bit(i);
  return junta_generate(n, std::nullopt, J, std::vector<Subset>{J});
}

SetFamily and_family(int n, Subset base, std::optional<int> k) {
  return junta_generate(n, k, base, std::vector<Subset>{base});
}

SetFamily or_family(int n, Subset base, std::optional<int> k) {
  std::vector<Subset> gens;
  for (Subset b = base; b != 0; b = (b - 1) & base) gens.push_back(b);
  return junta_generate(n, k, base, gens);
}

IntersectionCheck is_t_intersecting(const SetFamily& family, int t) {
  IntersectionCheck out;
  out.witness = first_pair(family, [t](Subset a, Subset b) { return cardinality(a & b) < t; });
  out.holds = !out.witness.has_value();
  return out;
}

std::optional<WitnessPair> forbidden_intersection_witness(const SetFamily& family, int t) {
  return first_pair(family, [t](Subset a, Subset b) { return cardinality(a & b) == t - 1; });
}

bool is_increasing(const SetFamily& family) {
  const Subset ground = family.ground();
  bool ok = true;
  family.for_each([&](Subset s) {
    if (!ok) return;
    for (Subset rest = ground & ~s; rest != 0; rest &= rest - 1) {
      if (!family.contains(s | (rest & (~rest + 1)))) {
        ok = false;
        return;
      }
    }
  });
  return ok;
}

SetFamily up_closure(const SetFamily& family) {
  const int n = family.n();
  std::vector<std::uint64_t> bits = dense_bits(family);
  for (int b = 0; b < std::min(n, 6); ++b) {
    const int shift = 1 << b;
    for (auto& word : bits) word |= (word & kLowHalf[b]) << shift;
  }
  for (int b = 6; b < n; ++b) {
    const std::size_t stride = std::size_t{1} << (b - 6);
    for (std::size_t w = 0; w < bits.size(); ++w)
      if ((w & stride) == 0) bits[w | stride] |= bits[w];
  }
  return from_bits(n, bits, Storage::power_set, std::nullopt);
}

SetFamily dual(const SetFamily& family) {
  const int n = family.n();
  check_dense(n);
  const Subset full = full_set(n);
  FamilyBuilder builder(n, Storage::power_set);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    const auto set = static_cast<Subset>(s);
    if (!family.contains(full ^ set)) builder.add(set);
  }
  return std::move(builder).build();
}

SetFamily complement(const SetFamily& family) {
  const int n = family.n();
  if (family.is_uniform()) {
    FamilyBuilder builder(n, family.storage(), family.layer());
    for (Subset s : layer_lex(n, family.k()))
      if (!family.contains(s)) builder.add(s);
    return std::move(builder).build();
  }
  std::vector<std::uint64_t> bits = dense_bits(family);
  for (auto& word : bits) word = ~word;
  if (n < 6) bits[0] &= (std::uint64_t{1} << (1U << n)) - 1;
  return from_bits(n, bits, family.storage(), std::nullopt);
}

SetFamily family_union(const SetFamily& a, const SetFamily& b) {
  require_same_ground(a, b);
  const std::optional<int> k = a.layer() == b.layer() ? a.layer() : std::nullopt;
  FamilyBuilder builder(a.n(), a.storage(), k);
  a.for_each([&](Subset s) { builder.add(s); });
  b.for_each([&](Subset s) { builder.add(s); });
  return std::move(builder).build();
}

SetFamily family_intersection(const SetFamily& a, const SetFamily& b) {
  require_same_ground(a, b);
  const std::optional<int> k = a.layer() ? a.layer() : b.layer();
  FamilyBuilder builder(a.n(), a.storage(), k);
  a.for_each([&](Subset s) {
    if (b.contains(s)) builder.add(s);
  });
  return std::move(builder).build();
}

SetFamily family_difference(const SetFamily& a, const SetFamily& b) {
  require_same_ground(a, b);
  FamilyBuilder builder(a.n(), a.storage(), a.layer());
  a.for_each([&](Subset s) {
    if (!b.contains(s)) builder.add(s);
  });
  return std::move(builder).build();
}

SetFamily layer_of(const SetFamily& family, int k) {
  FamilyBuilder builder(family.n(), family.storage(), k);
  family.for_each([&](Subset s) {
    if (cardinality(s) == k) builder.add(s);
  });
  return std::move(builder).build();
}

std::vector<std::uint64_t> size_profile(const SetFamily& family) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(family.n()) + 1, 0);
  family.for_each([&](Subset s) { ++out[static_cast<std::size_t>(cardinality(s))]; });
  return out;
}

namespace {

void check_pointer(const SetFamily& family, SlicePointer ptr) {
  if ((ptr.J & ~family.ground()) != 0) throw InputError("slice set J is not inside [n]");
  if ((ptr.B & ~ptr.J) != 0) throw InputError("slice key B is not inside J");
}

}  // namespace

SetFamily slice(const SetFamily& family, SlicePointer ptr) {
  check_pointer(family, ptr);
  const int m = family.n() - cardinality(ptr.J);
  const Subset rest = family.ground() & ~ptr.J;
  std::optional<int> k;
  if (family.is_uniform()) {
    const int kk = family.k() - cardinality(ptr.B);
    if (kk >= 0 && kk <= m) k = kk;
  }
  FamilyBuilder builder(m, family.storage(), k);
  family.for_each([&](Subset s) {
    if ((s & ptr.J) == ptr.B) builder.add(compress_bits(s, rest));
  });
  return std::move(builder).build();
}

std::vector<std::uint64_t> slice_counts(const SetFamily& family, Subset J) {
  if ((J & ~family.ground()) != 0) throw InputError("slice set J is not inside [n]");
  std::vector<std::uint64_t> out(std::size_t{1} << cardinality(J), 0);
  family.for_each([&](Subset s) { ++out[compress_bits(s & J, J)]; });
  return out;
}

SetFamily junta_generate(int n, std::optional<int> k, Subset J,
                         std::span<const Subset> generators) {
  return junta_generate(n, k, J, generators, k ? Storage::layer : Storage::power_set);
}

SetFamily junta_generate(int n, std::optional<int> k, Subset J,
                         std::span<const Subset> generators, Storage storage) {
  check_ground(n);
  if ((J & ~full_set(n)) != 0) throw InputError("junta set J is not inside [n]");
  const Subset rest = full_set(n) & ~J;
  const int m = cardinality(rest);
  FamilyBuilder builder(n, storage, k);
  for (Subset g : generators) {
    if ((g & ~J) != 0) throw InputError("generator " + to_string(g) + " is not inside J");
    if (k) {
      for (Subset packed : layer_lex(m, *k - cardinality(g)))
        builder.add(g | expand_bits(packed, rest));
    } else {
      if (m > kMaxPowerSetN) check_dense(m);
      Subset sub = 0;
      do {
        builder.add(g | sub);
        sub = (sub - rest) & rest;
      } while (sub != 0);
    }
  }
  return std::move(builder).build();
}

bool is_junta(const SetFamily& family, Subset J) {
  const auto counts = slice_counts(family, J);
  const int m = family.n() - cardinality(J);
  for (std::size_t idx = 0; idx < counts.size(); ++idx) {
    std::uint64_t full;
    if (family.is_uniform()) {
      full = binomial(m, family.k() - std::popcount(idx));
    } else {
      full = std::uint64_t{1} << m;
    }
    if (counts[idx] != 0 && counts[idx] != full) return false;
  }
  return true;
}

Subset live_coordinates(const SetFamily& family) {
  const Subset ground = family.ground();
  Subset live = 0;
  family.for_each([&](Subset s) {
    for (Subset rest = ground & ~live; rest != 0; rest &= rest - 1) {
      const Subset bit = rest & (~rest + 1);
      if (!family.contains(s ^ bit)) live |= bit;
    }
  });
  return live;
}

Subset permute(Subset s, std::span<const int> sigma) noexcept {
  Subset out = 0;
  while (s != 0) {
    out |= element_bit(sigma[static_cast<std::size_t>(std::countr_zero(s))]);
    s &= s - 1;
  }
  return out;
}

std::vector<int> inverse_permutation(std::span<const int> sigma) {
  const int n = static_cast<int>(sigma.size());
  std::vector<int> inv(sigma.size(), 0);
  for (int i = 1; i <= n; ++i) {
    const int image = sigma[static_cast<std::size_t>(i - 1)];
    if (image < 1 || image > n || inv[static_cast<std::size_t>(image - 1)] != 0)
      throw InputError("not a permutation of [" + std::to_string(n) + "]");
    inv[static_cast<std::size_t>(image - 1)] = i;
  }
  return inv;
}

SetFamily apply_permutation(const SetFamily& family, std::span<const int> sigma) {
  if (static_cast<int>(sigma.size()) != family.n())
    throw InputError("permutation has " + std::to_string(sigma.size()) + " entries, expected " +
                     std::to_string(family.n()));
  (void)inverse_permutation(sigma);  // validates
  FamilyBuilder builder(family.n(), family.storage(), family.layer());
  family.for_each([&](Subset s) { builder.add(permute(s, sigma)); });
  return std::move(builder).build();
}

}  // namespace setfam
