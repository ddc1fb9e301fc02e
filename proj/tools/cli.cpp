#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "setfam/errors.hpp"
#include "setfam/family.hpp"
#include "setfam/frankl.hpp"
#include "setfam/io.hpp"
#include "setfam/measures.hpp"
#include "setfam/regularity.hpp"
#include "setfam/search.hpp"
#include "setfam/shadows.hpp"
#include "setfam/shifting.hpp"

namespace setfam::cli {

namespace {

struct Flags {
  int n = 0;
  std::optional<int> k;
  int t = 1;
  int r = 0;
  int s = 0;
  int d = 0;
  int h = 1;
  int i = 0;
  int j = 0;
  int steps = 1;
  std::string p;
  double c = 1;
  double zeta = 0.25;
  double delta = 0.2;
  double eps = 0.1;
  std::vector<std::string> families;
  std::string out;
  std::string J;
  std::string kind = "paired";
  std::uint64_t seed = 0;
  int threads = 1;
  bool exact = false;
  bool no_shift = false;
  std::uint64_t budget_nodes = SearchOptions{}.node_budget;
  double budget_secs = SearchOptions{}.time_budget_secs;
};

Bias bias(const Flags& f) {
  if (f.p.empty()) throw InputError("--p is required");
  return Bias::parse(f.p, f.exact);
}

SetFamily family_arg(const Flags& f, std::size_t index = 0) {
  if (f.families.size() <= index)
    throw InputError(index == 0 ? "--family is required" : "a second --family is required");
  return read_family_file(f.families[index]);
}

Subset set_arg(const std::string& text, int n) {
  Subset s = 0;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    std::istringstream words(token);
    std::string w;
    while (words >> w) {
      int e = 0;
      try {
        e = std::stoi(w);
      } catch (const std::exception&) {
        throw InputError("not an element: '" + w + "'");
      }
      if (e < 1 || e > n) throw InputError("element " + w + " outside 1.." + std::to_string(n));
      s |= element_bit(e);
    }
  }
  return s;
}

// Families go to --out when given, otherwise they follow the report on stdout.
void emit_family(const Flags& f, const SetFamily& family, std::ostream& out) {
  if (f.out.empty()) {
    out << render_family(family);
    return;
  }
  write_family_file(f.out, family);
}

void emit_text(const Flags& f, const std::string& text, std::ostream& out) {
  if (f.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(f.out, std::ios::binary);
  if (!file) throw InputError("cannot write '" + f.out + "'");
  file << text;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

SearchOptions search_options(const Flags& f, bool shifted_default) {
  SearchOptions o;
  o.shifted = shifted_default && !f.no_shift;
  o.node_budget = f.budget_nodes;
  o.time_budget_secs = f.budget_secs;
  return o;
}

SetFamily random_family(const Flags& f) {
  const double p = f.p.empty() ? 0.5 : Bias::parse(f.p, false).value();
  std::mt19937_64 rng(f.seed);
  auto coin = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; };
  if (f.k) {
    FamilyBuilder builder(f.n, Storage::layer, f.k);
    for (Subset s : layer_lex(f.n, *f.k))
      if (coin()) builder.add(s);
    return std::move(builder).build();
  }
  if (f.n > kMaxPowerSetN) throw InputError("gen: untagged random families need n <= 24");
  FamilyBuilder builder(f.n, Storage::power_set);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << f.n); ++s)
    if (coin()) builder.add(static_cast<Subset>(s));
  return std::move(builder).build();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"setfam: intersecting families, shifting and regularity tools"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  Flags f;
  if (const char* env = std::getenv("SETFAM_THREADS")) f.threads = std::atoi(env);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", f.out, "write the result here instead of stdout");
    cmd->add_option("--threads", f.threads, "worker threads (accepted; commands run serially)");
    cmd->add_option("--seed", f.seed, "random seed");
  };
  auto add_family = [&](CLI::App* cmd, bool required, std::size_t count = 1) {
    auto* opt = cmd->add_option("--family", f.families, "family file")->expected(1);
    opt->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    if (required) opt->required();
    if (count > 1) opt->description("family file (give twice)");
  };
  auto add_p = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--p", f.p, "bias, \"a/b\" for exact arithmetic or a decimal");
    if (required) opt->required();
    cmd->add_flag("--exact", f.exact, "read --p as an exact rational");
  };
  std::function<void()> action;

  auto* measure = app.add_subcommand("measure", "mu_p(F), or |F|/C(n,k) without --p");
  add_family(measure, true);
  add_p(measure, false);
  add_common(measure);
  measure->callback([&] {
    action = [&] {
      const SetFamily fam = family_arg(f);
      if (f.p.empty()) {
        emit_text(f, to_fraction_string(mu_uniform(fam)) + '\n', out);
        return;
      }
      emit_text(f, mu_biased(fam, bias(f)).to_string() + '\n', out);
    };
  });

  auto* infl = app.add_subcommand("influence", "influences and total influence");
  add_family(infl, true);
  add_p(infl, true);
  infl->add_option("--i", f.i, "a single coordinate");
  add_common(infl);
  infl->callback([&] {
    action = [&] {
      const SetFamily fam = family_arg(f);
      const Bias p = bias(f);
      std::ostringstream os;
      if (f.i != 0) {
        os << "influence " << f.i << ' ' << influence(fam, f.i, p).to_string() << '\n';
      } else {
        const MeasureReport rep = measure_report(fam, p);
        os << "mu " << rep.mu.to_string() << '\n';
        for (std::size_t i = 0; i < rep.influences.size(); ++i)
          os << "influence " << i + 1 << ' ' << rep.influences[i].to_string() << '\n';
        os << "total " << rep.total.to_string() << '\n';
      }
      emit_text(f, os.str(), out);
    };
  });

  auto* frankl = app.add_subcommand("frankl", "the Frankl family F_{n,k,t,r} (dense without --k)");
  frankl->add_option("--n", f.n)->required();
  frankl->add_option("--k", f.k);
  frankl->add_option("--t", f.t)->required();
  frankl->add_option("--r", f.r);
  frankl->add_option("--s", f.s, "with s > 0, the tightness family for (t, r, s)");
  add_common(frankl);
  frankl->callback([&] {
    action = [&] {
      if (f.s > 0) {
        emit_family(f, tightness_family(TightnessSpec{f.n, f.t, f.r, f.s, f.k}), out);
        return;
      }
      emit_family(f, frankl_family(FranklSpec{f.n, f.t, f.r, 0, f.k}), out);
    };
  });

  auto add_search = [&](CLI::App* cmd) {
    cmd->add_option("--n", f.n)->required();
    cmd->add_option("--k", f.k)->required();
    cmd->add_option("--t", f.t)->required();
    cmd->add_option("--budget-nodes", f.budget_nodes);
    cmd->add_option("--budget-secs", f.budget_secs);
    cmd->add_flag("--no-shift", f.no_shift, "search all families, not just shifted ones");
    add_common(cmd);
  };
  auto* fmax = app.add_subcommand("fmax", "largest t-intersecting k-uniform family");
  add_search(fmax);
  fmax->callback([&] {
    action = [&] {
      emit_text(f, render_search(max_t_intersecting(f.n, *f.k, f.t, search_options(f, true))), out);
    };
  });
  auto* gmax = app.add_subcommand("gmax", "largest family with no intersection of size t-1");
  add_search(gmax);
  gmax->callback([&] {
    action = [&] {
      emit_text(f, render_search(max_forbidden(f.n, *f.k, f.t, search_options(f, f.t == 1))), out);
    };
  });

  auto* sh = app.add_subcommand("shift", "the shift S_{i,j}");
  add_family(sh, true);
  sh->add_option("--i", f.i)->required();
  sh->add_option("--j", f.j)->required();
  add_common(sh);
  sh->callback([&] { action = [&] { emit_family(f, shift(family_arg(f), f.i, f.j), out); }; });

  auto* pipe = app.add_subcommand("pipeline", "the compress/increase stability pipeline");
  add_family(pipe, true);
  add_p(pipe, true);
  pipe->add_option("--t", f.t)->required();
  pipe->add_option("--c", f.c, "stop once every live influence is >= c/2");
  std::optional<double> pipe_zeta;
  pipe->add_option("--zeta", pipe_zeta);
  add_common(pipe);
  pipe->callback([&] {
    action = [&] {
      PipelineOptions o;
      o.zeta = pipe_zeta;
      const PipelineTrace trace = stability_pipeline(family_arg(f), bias(f), f.t, f.c, o);
      out << render_trace(trace);
      emit_family(f, trace.final_family, out);
    };
  });

  auto* shadow = app.add_subcommand("shadow", "iterated lower shadow of a uniform family");
  add_family(shadow, true);
  shadow->add_option("--steps", f.steps);
  add_common(shadow);
  shadow->callback(
      [&] { action = [&] { emit_family(f, iterated_shadow(family_arg(f), f.steps), out); }; });

  auto* cross = app.add_subcommand("cross-audit", "cross-intersecting bounds for two families");
  add_family(cross, true, 2);
  add_p(cross, false);
  std::optional<int> cross_r;
  cross->add_option("--r", cross_r, "also run the shadow bound with this r");
  add_common(cross);
  cross->callback([&] {
    action = [&] {
      const SetFamily a = family_arg(f, 0);
      const SetFamily b = family_arg(f, 1);
      std::ostringstream os;
      const IntersectionCheck check = cross_intersecting(a, b);
      os << "cross_intersecting " << yes_no(check.holds) << '\n';
      if (check.witness)
        os << "witness " << to_string(check.witness->first) << ' '
           << to_string(check.witness->second) << '\n';
      if (check.holds) {
        const Bias p = f.p.empty() ? Bias(Rational(1, 2)) : bias(f);
        const BiasedCrossReport rep = biased_cross_bounds_audit(a, b, p);
        os << "mu_f " << to_decimal_string(rep.mu_f) << '\n'
           << "power_rhs " << to_decimal_string(rep.power_rhs) << '\n'
           << "power_holds " << yes_no(rep.power_holds) << '\n'
           << "power_equality " << yes_no(rep.power_equality) << '\n'
           << "half_sum " << to_fraction_string(rep.half_sum) << '\n'
           << "half_holds " << yes_no(rep.half_holds) << '\n';
        if (cross_r) {
          const KKCrossReport kk = kk_cross_bound_audit(a, b, *cross_r);
          os << "size_b " << kk.size_b << '\n'
             << "bound " << kk.bound << '\n'
             << "holds " << yes_no(kk.holds) << '\n';
        }
      }
      emit_text(f, os.str(), out);
    };
  });

  auto* pot = app.add_subcommand("potential", "phi(F,J) and the stability testers");
  add_family(pot, true);
  pot->add_option("--J", f.J, "coordinates, e.g. \"1,3\"");
  pot->add_option("--h", f.h);
  pot->add_option("--delta", f.delta);
  std::optional<double> pot_eta;
  pot->add_option("--eta", pot_eta, "also test (eta,h)-potential stability");
  add_common(pot);
  pot->callback([&] {
    action = [&] {
      const SetFamily fam = family_arg(f);
      std::ostringstream os;
      os << "phi " << to_decimal_string(potential(fam, set_arg(f.J, fam.n()))) << '\n';
      const QuasirandomCheck q = is_slice_quasirandom(fam, f.delta, f.h);
      os << "quasirandom " << yes_no(q.holds) << '\n';
      if (q.witness) os << "slice " << to_string(q.witness->J) << ' ' << to_string(q.witness->B) << '\n';
      os << "max_deviation " << to_decimal_string(q.max_deviation) << '\n';
      if (pot_eta) {
        const StabilityCheck st = is_potentially_stable(fam, *pot_eta, f.h);
        os << "stable " << yes_no(st.holds) << '\n';
        if (st.witness) os << "increment " << to_string(*st.witness) << '\n';
      }
      emit_text(f, os.str(), out);
    };
  });

  auto* dec = app.add_subcommand("decompose", "weak regularity decomposition");
  add_family(dec, true);
  dec->add_option("--zeta", f.zeta);
  dec->add_option("--delta", f.delta);
  dec->add_option("--h", f.h);
  dec->add_option("--eps", f.eps);
  add_common(dec);
  dec->callback([&] {
    action = [&] {
      emit_text(f, render_decomposition(regularity_decompose(family_arg(f), f.zeta, f.delta, f.h, f.eps)),
                out);
    };
  });

  auto* wit = app.add_subcommand("witness", "first pair A, B with |A cap B| = t-1");
  add_family(wit, true, 2);
  wit->add_option("--t", f.t)->required();
  add_common(wit);
  wit->callback([&] {
    action = [&] {
      const auto w = intersection_witness(family_arg(f, 0), family_arg(f, 1), f.t);
      emit_text(f, w ? to_string(w->first) + ' ' + to_string(w->second) + '\n' : "none\n", out);
    };
  });

  auto* gen = app.add_subcommand("gen", "seeded families: paired (n/2-layer) or random");
  gen->add_option("--kind", f.kind)->check(CLI::IsMember({"paired", "random"}));
  gen->add_option("--n", f.n)->required();
  gen->add_option("--k", f.k);
  gen->add_option("--p", f.p, "inclusion probability for random families");
  add_common(gen);
  gen->callback([&] {
    action = [&] {
      emit_family(f, f.kind == "paired" ? gen_paired_random(f.n, f.seed) : random_family(f), out);
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  try {
    if (action) action();
    return 0;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 1;
  } catch (const ContractError& e) {
    err << "contract error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace setfam::cli
