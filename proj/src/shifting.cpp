#include "setfam/shifting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "setfam/errors.hpp"
#include "setfam/measures.hpp"

namespace setfam {

namespace {

void check_pair(const SetFamily& family, int i, int j) {
  const int n = family.n();
  if (i < 1 || i > n || j < 1 || j > n)
    throw InputError("shift coordinates must lie in 1.." + std::to_string(n));
  if (i == j) throw InputError("shift needs i != j");
}

void require_increasing_t_intersecting(const SetFamily& family, int t, const char* op) {
  if (t < 1) throw InputError(std::string(op) + ": t must be >= 1");
  if (!is_increasing(family)) throw ContractError(std::string(op) + ": family is not increasing");
  if (!is_t_intersecting(family, t))
    throw ContractError(std::string(op) + ": family is not " + std::to_string(t) + "-intersecting");
}

// Smallest j < coord such that S_{coord,j} moves some member, or 0.
int first_active_shift(const SetFamily& family, int coord) {
  const Subset top = element_bit(coord);
  int best = 0;
  family.for_each([&](Subset s) {
    if ((s & top) == 0) return;
    const int limit = best == 0 ? coord : best;
    for (int j = 1; j < limit; ++j) {
      const Subset bit = element_bit(j);
      if ((s & bit) == 0 && !family.contains((s & ~top) | bit)) {
        best = j;
        break;
      }
    }
  });
  return best;
}

Scalar zero(const Bias& p) { return p.is_exact() ? Scalar::exact(0) : Scalar::approx(0.0); }

Scalar mu_of_difference(const SetFamily& a, const SetFamily& b, const Bias& p) {
  return mu_biased(family_difference(a, b), p);
}

// {A \ {n} : A in layer}.
std::vector<Subset> drop_top(const SetFamily& layer, int n) {
  std::vector<Subset> out;
  layer.for_each([&](Subset s) { out.push_back(s & ~element_bit(n)); });
  return out;
}

SetFamily replace(const SetFamily& family, const SetFamily& removed,
                  const std::vector<Subset>& added) {
  FamilyBuilder builder(family.n(), family.storage());
  family.for_each([&](Subset s) {
    if (!removed.contains(s)) builder.add(s);
  });
  builder.add_all(added);
  return std::move(builder).build();
}

void require_compressed_input(const SetFamily& family, int t, const char* op) {
  require_increasing_t_intersecting(family, t, op);
  if (!is_n_compressed(family, family.n()))
    throw ContractError(std::string(op) + ": family is not n-compressed");
}

}  // namespace

SetFamily shift(const SetFamily& family, int i, int j) {
  check_pair(family, i, j);
  const Subset from = element_bit(i);
  const Subset to = element_bit(j);
  FamilyBuilder builder(family.n(), family.storage(), family.layer());
  family.for_each([&](Subset s) {
    if ((s & from) != 0 && (s & to) == 0) {
      const Subset image = (s & ~from) | to;
      builder.add(family.contains(image) ? s : image);
    } else {
      builder.add(s);
    }
  });
  return std::move(builder).build();
}

bool is_n_compressed(const SetFamily& family, int coord) {
  if (coord < 1 || coord > family.n()) throw InputError("coordinate outside 1..n");
  return first_active_shift(family, coord) == 0;
}

bool is_shifted(const SetFamily& family) {
  for (int i = 2; i <= family.n(); ++i)
    if (first_active_shift(family, i) != 0) return false;
  return true;
}

CompressionTrace compress_to(const SetFamily& family, int coord, const Bias& p, int t) {
  if (coord < 1 || coord > family.n()) throw InputError("compress_to: coordinate outside 1..n");
  require_increasing_t_intersecting(family, t, "compress_to");
  CompressionTrace trace;
  trace.coord = coord;
  trace.mu = mu_biased(family, p);
  trace.delta = influence(family, coord, p);
  trace.states.push_back(family);
  while (true) {
    const SetFamily& current = trace.states.back();
    const int j = first_active_shift(current, coord);
    if (j == 0) break;
    SetFamily next = shift(current, coord, j);
    CompressionStep step;
    step.j = j;
    step.removed = mu_of_difference(current, next, p);
    step.influence = influence(next, coord, p);
    trace.steps.push_back(std::move(step));
    trace.states.push_back(std::move(next));
  }
  return trace;
}

SetFamily boundary_layer(const SetFamily& family, int a) {
  const int n = family.n();
  const Subset top = element_bit(n);
  FamilyBuilder builder(n, family.storage(), a >= 0 && a <= n ? std::optional<int>(a)
                                                               : std::nullopt);
  family.for_each([&](Subset s) {
    if ((s & top) != 0 && cardinality(s) == a && !family.contains(s & ~top)) builder.add(s);
  });
  return std::move(builder).build();
}

OffDiagonalResult increase_offdiagonal(const SetFamily& family, int t, int a, int b,
                                       const Bias& p) {
  const int n = family.n();
  if (a == b) throw InputError("increase_offdiagonal: a must differ from b");
  if (a + b != n + t)
    throw InputError("increase_offdiagonal: a+b = " + std::to_string(a + b) + " but n+t = " +
                     std::to_string(n + t));
  if (a < 1 || b < 1 || a > n || b > n) throw InputError("increase_offdiagonal: a, b outside [n]");
  require_compressed_input(family, t, "increase_offdiagonal");
  const SetFamily xa = boundary_layer(family, a);
  const SetFamily xb = boundary_layer(family, b);
  OffDiagonalResult out{replace(family, xa, drop_top(xb, n)), replace(family, xb, drop_top(xa, n)),
                        Scalar{}, Scalar{}, 1};
  out.mu1 = mu_biased(out.g1, p);
  out.mu2 = mu_biased(out.g2, p);
  out.chosen = compare(out.mu2, out.mu1) > 0 ? 2 : 1;
  return out;
}

DiagonalResult increase_diagonal(const SetFamily& family, int t, const Bias& p) {
  const int n = family.n();
  if (t < 1) throw InputError("increase_diagonal: t must be >= 1");
  if ((n + t) % 2 != 0) throw ContractError("increase_diagonal: n+t is odd");
  if (n < 2) throw ContractError("increase_diagonal: needs n >= 2");
  require_compressed_input(family, t, "increase_diagonal");
  if (influence(family, n, p).value() == 0)
    throw ContractError("increase_diagonal: I_n(F) = 0");
  const int a = (n + t) / 2;
  const SetFamily xa = boundary_layer(family, a);
  if (xa.empty()) throw ContractError("increase_diagonal: (I_n cap F)^(a) is empty");
  DiagonalResult out;
  for (int i = 1; i < n; ++i) {
    const Subset bit = element_bit(i);
    FamilyBuilder removed(n, family.storage());
    std::vector<Subset> added;
    xa.for_each([&](Subset s) {
      if ((s & bit) != 0) {
        removed.add(s);
      } else {
        added.push_back(s & ~element_bit(n));
      }
    });
    out.candidates.push_back(replace(family, std::move(removed).build(), added));
    out.mus.push_back(mu_biased(out.candidates.back(), p));
  }
  for (int i = 2; i < n; ++i)
    if (compare(out.mus[static_cast<std::size_t>(i - 1)],
                out.mus[static_cast<std::size_t>(out.best - 1)]) > 0)
      out.best = i;
  return out;
}

std::optional<WitnessPair> exact_t_violation(const SetFamily& family, int t) {
  const int n = family.n();
  const Subset top = element_bit(n);
  const Subset full = family.ground();
  const auto members = family.members_lex();
  for (std::size_t i = 0; i < members.size(); ++i) {
    if ((members[i] & top) == 0) continue;
    for (std::size_t j = i; j < members.size(); ++j) {
      const Subset a = members[i];
      const Subset b = members[j];
      if ((b & top) == 0 || cardinality(a & b) != t) continue;
      if (cardinality(a) + cardinality(b) != n + t || (a | b) != full) return WitnessPair{a, b};
    }
  }
  return std::nullopt;
}

std::string to_string(StepKind kind) {
  switch (kind) {
    case StepKind::compress: return "compress";
    case StepKind::increase_offdiag: return "increase-offdiag";
    case StepKind::increase_diag: return "increase-diag";
    case StepKind::up_close: return "up-close";
  }
  return "?";
}

namespace {

// Relabels a subset of the live coordinates onto [m] following `order` (order[q-1] -> q).
Subset project(Subset s, const std::vector<int>& order) {
  Subset out = 0;
  for (std::size_t q = 0; q < order.size(); ++q)
    if (has_element(s, order[q])) out |= element_bit(static_cast<int>(q) + 1);
  return out;
}

Subset lift(Subset s, const std::vector<int>& order) {
  Subset out = 0;
  for (int q : elements_of(s)) out |= element_bit(order[static_cast<std::size_t>(q - 1)]);
  return out;
}

}  // namespace

PipelineTrace stability_pipeline(const SetFamily& family, const Bias& p, int t, double c,
                                 const PipelineOptions& options) {
  if (!(p.value() < 0.5)) throw InputError("stability_pipeline: p must be < 1/2");
  if (!(c > 0)) throw InputError("stability_pipeline: c must be > 0");
  require_increasing_t_intersecting(family, t, "stability_pipeline");
  const double zeta = options.zeta.value_or(0.5 - p.value());
  if (!(zeta > 0) || p.value() > 0.5 - zeta + 1e-15)
    throw InputError("stability_pipeline: need 0 < zeta and p <= 1/2 - zeta");
  const double threshold =
      std::max(static_cast<double>(options.coord_threshold > 0 ? options.coord_threshold : t),
               t / (2 * zeta));

  const int n = family.n();
  PipelineTrace trace;
  SetFamily current = family.untagged().with_storage(Storage::power_set);
  while (true) {
    const Subset live = live_coordinates(current);
    const int m = cardinality(live);
    if (m <= threshold) {
      trace.stop_reason = "depends on " + std::to_string(m) + " coordinates";
      break;
    }
    int chosen = 0;
    Scalar least;
    for (int i : elements_of(live)) {
      Scalar inf = influence(current, i, p);
      if (chosen == 0 || compare(inf, least) <= 0) {  // ties go to the larger label
        chosen = i;
        least = inf;
      }
    }
    if (least.value() >= c / 2) {
      trace.stop_reason = "all live influences >= c/2";
      break;
    }
    if (static_cast<std::uint64_t>(trace.iterations) >= options.max_iterations)
      throw ResourceError("stability_pipeline: iteration guard of " +
                          std::to_string(options.max_iterations) + " reached");
    ++trace.iterations;

    std::vector<int> order;
    for (int i : elements_of(live))
      if (i != chosen) order.push_back(i);
    order.push_back(chosen);

    FamilyBuilder proj_builder(m, Storage::power_set);
    current.for_each([&](Subset s) {
      if ((s & ~live) == 0) proj_builder.add(project(s, order));
    });
    const SetFamily projected = std::move(proj_builder).build();

    CompressionTrace ct = compress_to(projected, m, p, t);
    for (std::size_t k = 0; k < ct.steps.size(); ++k) {
      PipelineStep step;
      step.kind = StepKind::compress;
      step.coords = {chosen, order[static_cast<std::size_t>(ct.steps[k].j - 1)]};
      step.mu_before = ct.mu;
      step.mu_after = mu_biased(ct.states[k + 1], p);
      step.modification = ct.steps[k].removed;
      step.bound = ct.delta;
      trace.steps.push_back(std::move(step));
    }
    SetFamily g = ct.states.back();
    const Scalar im = influence(g, m, p);
    if (im.value() > 0) {
      const Scalar mu_g = mu_biased(g, p);
      PipelineStep step;
      step.mu_before = mu_g;
      step.bound = im;
      SetFamily next{m, Storage::power_set};
      const int half = (m + t) / 2;
      if ((m + t) % 2 == 0 && !boundary_layer(g, half).empty()) {
        DiagonalResult dr = increase_diagonal(g, t, p);
        step.kind = StepKind::increase_diag;
        step.coords = {chosen, order[static_cast<std::size_t>(dr.best - 1)]};
        step.a = step.b = half;
        next = dr.best_family();
      } else {
        bool have = false;
        Scalar best_mu;
        for (int a = t; a <= m; ++a) {
          const int b = m + t - a;
          if (b <= a || b > m) continue;
          if (boundary_layer(g, a).empty() && boundary_layer(g, b).empty()) continue;
          OffDiagonalResult od = increase_offdiagonal(g, t, a, b, p);
          if (!have || compare(od.best_mu(), best_mu) > 0) {
            have = true;
            best_mu = od.best_mu();
            next = od.best();
            step.a = od.chosen == 1 ? a : b;
            step.b = od.chosen == 1 ? b : a;
          }
        }
        if (!have) throw ContractError("stability_pipeline: no increase step applies");
        step.kind = StepKind::increase_offdiag;
        step.coords = {chosen};
      }
      step.mu_after = mu_biased(next, p);
      step.modification = mu_of_difference(g, next, p);
      if (compare(step.mu_after, mu_g) <= 0)
        throw ContractError("stability_pipeline: increase step did not raise the measure");
      trace.steps.push_back(step);

      SetFamily closed = up_closure(next);
      PipelineStep up;
      up.kind = StepKind::up_close;
      up.mu_before = step.mu_after;
      up.mu_after = mu_biased(closed, p);
      up.modification = zero(p);
      up.bound = zero(p);
      trace.steps.push_back(std::move(up));
      g = std::move(closed);
    }

    std::vector<Subset> gens;
    g.for_each([&](Subset s) { gens.push_back(lift(s, order)); });
    current = junta_generate(n, std::nullopt, live, gens);
  }
  trace.final_coordinates = live_coordinates(current);
  trace.final_family = std::move(current);
  return trace;
}

std::string render_trace(const PipelineTrace& trace) {
  std::ostringstream out;
  for (const PipelineStep& s : trace.steps) {
    out << to_string(s.kind) << " coords=";
    for (std::size_t i = 0; i < s.coords.size(); ++i) out << (i ? "," : "") << s.coords[i];
    if (s.kind == StepKind::increase_offdiag || s.kind == StepKind::increase_diag)
      out << " a=" << s.a << " b=" << s.b;
    out << " before=" << s.mu_before.to_string() << " after=" << s.mu_after.to_string()
        << " modification=" << s.modification.to_string() << " bound=" << s.bound.to_string()
        << '\n';
  }
  return out.str();
}

}  // namespace setfam
