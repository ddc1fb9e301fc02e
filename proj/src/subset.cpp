#include "setfam/subset.hpp"

#include <algorithm>

#include "setfam/errors.hpp"

namespace setfam {

Subset subset_of(std::span<const int> elements) {
  Subset s = 0;
  for (int e : elements) {
    if (e < 1 || e > kMaxLayerN) throw InputError("element out of range: " + std::to_string(e));
    s |= element_bit(e);
  }
  return s;
}

Subset subset_of(std::initializer_list<int> elements) {
  return subset_of(std::span<const int>(elements.begin(), elements.size()));
}

std::vector<int> elements_of(Subset s) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(cardinality(s)));
  while (s != 0) {
    out.push_back(std::countr_zero(s) + 1);
    s &= s - 1;
  }
  return out;
}

std::string to_string(Subset s) {
  std::string out = "{";
  bool first = true;
  for (int e : elements_of(s)) {
    if (!first) out += ',';
    out += std::to_string(e);
    first = false;
  }
  out += '}';
  return out;
}

Subset compress_bits(Subset s, Subset mask) noexcept {
  Subset out = 0;
  Subset bit = 1;
  while (mask != 0) {
    const Subset low = mask & (~mask + 1);
    if (s & low) out |= bit;
    bit <<= 1;
    mask &= mask - 1;
  }
  return out;
}

Subset expand_bits(Subset packed, Subset mask) noexcept {
  Subset out = 0;
  while (mask != 0 && packed != 0) {
    const Subset low = mask & (~mask + 1);
    if (packed & 1U) out |= low;
    packed >>= 1;
    mask &= mask - 1;
  }
  return out;
}

std::vector<Subset> layer_lex(int n, int k) {
  std::vector<Subset> out;
  if (k < 0 || k > n) return out;
  out.reserve(binomial(n, k));
  std::vector<int> combo(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) combo[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    out.push_back(subset_of(combo));
    int i = k - 1;
    while (i >= 0 && combo[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
    if (i < 0) break;
    ++combo[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::vector<Subset> subsets_up_to(int n, int h) {
  std::vector<Subset> out;
  for (int size = 0; size <= std::min(h, n); ++size) {
    auto layer = layer_lex(n, size);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

std::vector<Subset> subsets_of_size_then_lex(Subset mask) {
  const int m = cardinality(mask);
  std::vector<Subset> out;
  out.reserve(std::size_t{1} << m);
  for (Subset packed : subsets_up_to(m, m)) out.push_back(expand_bits(packed, mask));
  return out;
}

std::uint64_t binomial(int n, int k) noexcept {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

}  // namespace setfam
