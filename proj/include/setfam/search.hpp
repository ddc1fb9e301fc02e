#pragma once

// Exact maximisation over uniform families, and the two junta audits.

#include <cstdint>
#include <string>
#include <vector>

#include "setfam/family.hpp"
#include "setfam/rational.hpp"

namespace setfam {

struct SearchOptions {
  /// Restrict to shifted families. Valid for t-intersection, and for the
  /// forbidden-intersection problem only when t = 1.
  bool shifted = false;
  std::uint64_t node_budget = 2'000'000'000;
  double time_budget_secs = 600;
};

struct SearchResult {
  std::uint64_t optimum = 0;
  SetFamily family{0, Storage::layer, 0};  // lex-minimal optimal family in the searched class
  std::uint64_t nodes = 0;
  double seconds = 0;
};

/// Largest t-intersecting F inside the k-th layer of [n]. Throws InputError unless
/// 1 <= t <= k <= n, ResourceError (with the bounds reached) when a budget runs out.
[[nodiscard]] SearchResult max_t_intersecting(int n, int k, int t, const SearchOptions& options = {});

/// Largest F inside the k-th layer with no |A cap B| = t - 1.
/// Throws InputError if options.shifted is set with t > 1.
[[nodiscard]] SearchResult max_forbidden(int n, int k, int t, const SearchOptions& options = {});

/// "value", the witness in family-file form, then a stats block.
[[nodiscard]] std::string render_search(const SearchResult& result);

struct JuntaApprox {
  std::vector<Subset> generators;  // best t-intersecting G inside P(J), lex order
  std::uint64_t missed = 0;        // |F \ <G>|
  std::uint64_t extra = 0;         // |<G> \ F|
  Rational epsilon;                // missed / C(n,k)
};

/// Best t-intersecting G over J for approximating F; |J| <= 6. Throws ContractError
/// when F has a pair meeting in t - 1 elements.
[[nodiscard]] JuntaApprox junta_approx_audit(const SetFamily& family, int t, Subset J);

struct LocalExtremality {
  Rational mu_f;
  Rational mu_g;       // mu(<G>)
  bool holds = false;  // mu_f <= mu_g
  bool equality = false;  // F = <G>
  double delta = 0;    // max over B not in G of mu(F_J^B)
  double epsilon = 0;  // max over B in G of 1 - mu(F_J^B)
};

/// Checks mu(F) <= mu(<G>) with equality only for F = <G>. Throws ContractError when F
/// has a forbidden pair, G is not a maximal t-intersecting family over J, or some
/// B in G has mu(F_J^B) <= 1 - eps0 (the message names B).
[[nodiscard]] LocalExtremality local_extremality_audit(const SetFamily& family, int t, Subset J,
                                                       const std::vector<Subset>& generators,
                                                       double eps0);

}  // namespace setfam
