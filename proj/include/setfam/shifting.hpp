#pragma once

// Shifting S_ij, n-compression, the two measure-increase steps and the
// pipeline that turns an increasing t-intersecting family into a junta by
// small modifications.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "setfam/family.hpp"
#include "setfam/rational.hpp"

namespace setfam {

/// S_ij(F): A -> A \ {i} u {j} when i in A, j not in A and the image is not already in F.
[[nodiscard]] SetFamily shift(const SetFamily& family, int i, int j);

/// S_{coord,j}(F) = F for all j < coord.
[[nodiscard]] bool is_n_compressed(const SetFamily& family, int coord);
/// S_ij(F) = F for all j < i.
[[nodiscard]] bool is_shifted(const SetFamily& family);

struct CompressionStep {
  int j = 0;            // the shift applied was S_{coord,j}
  Scalar removed;       // mu_p(F_{i-1} \ F_i)
  Scalar influence;     // I_coord(F_i)
};

struct CompressionTrace {
  int coord = 0;
  Scalar mu;                      // constant along the trace
  Scalar delta;                   // I_coord of the input, the bound on every step
  std::vector<CompressionStep> steps;
  std::vector<SetFamily> states;  // states[0] is the input, states.back() the result
};

/// Repeatedly applies S_{coord,j} with the smallest j that changes the family.
/// Throws ContractError unless F is increasing and t-intersecting.
[[nodiscard]] CompressionTrace compress_to(const SetFamily& family, int coord, const Bias& p,
                                           int t);

/// (I_n cap F)^(a): members of size a containing n whose removal of n leaves F.
[[nodiscard]] SetFamily boundary_layer(const SetFamily& family, int a);

struct OffDiagonalResult {
  SetFamily g1;
  SetFamily g2;
  Scalar mu1;
  Scalar mu2;
  int chosen = 1;  // 1 or 2; ties pick 1
  [[nodiscard]] const SetFamily& best() const { return chosen == 1 ? g1 : g2; }
  [[nodiscard]] const Scalar& best_mu() const { return chosen == 1 ? mu1 : mu2; }
};

/// G1 = (F \ (I_n cap F)^(a)) u (I_n \ F)^(b-1) and G2 with a, b swapped, n = F.n().
/// Throws InputError unless a != b and a+b = n+t; ContractError unless F is increasing,
/// t-intersecting and n-compressed.
[[nodiscard]] OffDiagonalResult increase_offdiagonal(const SetFamily& family, int t, int a, int b,
                                                     const Bias& p);

struct DiagonalResult {
  std::vector<SetFamily> candidates;  // G_i at index i - 1, i in [n-1]
  std::vector<Scalar> mus;
  int best = 1;  // maximizer, smallest i on ties
  [[nodiscard]] const SetFamily& best_family() const { return candidates[best - 1]; }
  [[nodiscard]] const Scalar& best_mu() const { return mus[best - 1]; }
};

/// G_i = (F \ (F cap I_n cap D_i)^(a)) u (I_n \ (F u D_i))^(a-1), a = (n+t)/2.
/// Throws ContractError naming the failed precondition (parity, I_n(F) = 0, empty slice, ...).
[[nodiscard]] DiagonalResult increase_diagonal(const SetFamily& family, int t, const Bias& p);

/// A, B in F with |A cap B| = t and n in A cap B but |A|+|B| != n+t or A u B != [n].
/// Meaningful for n-compressed t-intersecting F, where none exists.
[[nodiscard]] std::optional<WitnessPair> exact_t_violation(const SetFamily& family, int t);

enum class StepKind { compress, increase_offdiag, increase_diag, up_close };

[[nodiscard]] std::string to_string(StepKind kind);

struct PipelineStep {
  StepKind kind = StepKind::compress;
  std::vector<int> coords;  // original labels: (coord, j), (coord), (coord, i) or empty
  int a = 0;                // sizes for increase steps
  int b = 0;
  Scalar mu_before;
  Scalar mu_after;
  Scalar modification;  // mu_p(F_{i-1} \ F_i)
  Scalar bound;         // declared bound on the modification
};

struct PipelineOptions {
  std::optional<double> zeta;        // default 1/2 - p
  int coord_threshold = 0;           // stands in for t+2r; default t
  std::uint64_t max_iterations = 100000;
};

struct PipelineTrace {
  std::vector<PipelineStep> steps;
  SetFamily final_family{0, Storage::power_set};
  Subset final_coordinates = 0;  // live coordinates of the final family
  int iterations = 0;
  std::string stop_reason;
};

/// Compress / increase / up-close on the least influential live coordinate until the family
/// depends on few coordinates or every live influence is at least c/2. Throws ContractError
/// on bad input and ResourceError when the iteration guard trips.
[[nodiscard]] PipelineTrace stability_pipeline(const SetFamily& family, const Bias& p, int t,
                                               double c, const PipelineOptions& options = {});

/// One line per step: tag, coordinates, measures.
[[nodiscard]] std::string render_trace(const PipelineTrace& trace);

}  // namespace setfam
