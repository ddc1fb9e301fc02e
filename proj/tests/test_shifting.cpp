#include <doctest.h>

#include <algorithm>
#include <random>

#include "setfam/errors.hpp"
#include "setfam/frankl.hpp"
#include "setfam/measures.hpp"
#include "setfam/shifting.hpp"
#include "support.hpp"

using namespace setfam;

namespace {

const Rational kThird(1, 3);

// S_{coord,j}(F) = F for every j < coord, straight from the definition.
bool compressed_oracle(const SetFamily& f, int coord) {
  for (Subset a : f.members()) {
    if (!has_element(a, coord)) continue;
    for (int j = 1; j < coord; ++j)
      if (!has_element(a, j) && !f.contains((a & ~element_bit(coord)) | element_bit(j)))
        return false;
  }
  return true;
}

Rational mu(const SetFamily& f, const Rational& p) { return oracle::mu(f, p); }

SetFamily compressed(const SetFamily& f, int t) {
  return compress_to(f, f.n(), Bias(kThird), t).states.back();
}

}  // namespace

TEST_CASE("shift examples") {
  CHECK(shift(make_family(2, {{2}}), 2, 1) == make_family(2, {{1}}));
  const SetFamily both = make_family(2, {{1}, {2}});
  CHECK(shift(both, 2, 1) == both);
  CHECK(shift(make_family(3, {{2, 3}}), 3, 1) == make_family(3, {{1, 2}}));
  CHECK_THROWS_AS((void)shift(both, 1, 1), InputError);
  CHECK_THROWS_AS((void)shift(both, 3, 1), InputError);
  CHECK(is_shifted(frankl_family(FranklSpec{6, 2, 1})));
  CHECK_FALSE(is_shifted(dictatorship(3, 2)));
  CHECK(is_n_compressed(dictatorship(3, 1), 3));
  CHECK_FALSE(is_n_compressed(dictatorship(3, 3), 3));
}

TEST_CASE("shifting an increasing t-intersecting family") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const int t = 1 + static_cast<int>(rng() % 2);
    const SetFamily f = oracle::random_t_intersecting(n, t, rng);
    const int i = 2 + static_cast<int>(rng() % (n - 1));
    const int j = 1 + static_cast<int>(rng() % (i - 1));
    const SetFamily s = shift(f, i, j);
    const Rational inf = oracle::influence(f, i, kThird);
    CHECK(mu(s, kThird) == mu(f, kThird));
    CHECK(mu(family_difference(f, s), kThird) <= inf);
    const Rational after = oracle::influence(s, i, kThird);
    CHECK(after <= inf);
    CHECK((after == inf) == (s == f));
    CHECK(oracle::increasing(s));
    CHECK(oracle::t_intersecting(s, t));
  }
}

TEST_CASE("compress_to examples") {
  const SetFamily star = dictatorship(4, 1);
  const auto done = compress_to(star, 4, Bias(kThird), 1);
  CHECK(done.steps.empty());
  CHECK(done.states.size() == 1);

  const SetFamily f = make_family(2, {{2}, {1, 2}});
  const auto tr = compress_to(f, 2, Bias(kThird), 1);
  REQUIRE(tr.steps.size() == 1);
  CHECK(tr.steps[0].j == 1);
  CHECK(tr.states.back() == make_family(2, {{1}, {1, 2}}));
  CHECK(tr.delta.rational() == 1);
  CHECK(tr.steps[0].removed.rational() == Rational(2, 9));

  CHECK_THROWS_AS((void)compress_to(make_family(3, {{1}}), 3, Bias(kThird), 1), ContractError);
  CHECK_THROWS_AS((void)compress_to(make_family(3, {{1}, {2}, {1, 2}}).with_storage(Storage::power_set),
                                    3, Bias(kThird), 1),
                  ContractError);
  CHECK_THROWS_AS((void)compress_to(star, 5, Bias(kThird), 1), InputError);
}

TEST_CASE("compression traces") {
  std::mt19937_64 rng(22);
  int nontrivial = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const int t = 1 + static_cast<int>(rng() % 2);
    const SetFamily f = oracle::random_t_intersecting(n, t, rng);
    const auto tr = compress_to(f, n, Bias(kThird), t);
    const Rational delta = oracle::influence(f, n, kThird);
    CHECK(tr.delta.rational() == delta);
    CHECK(tr.states.size() == tr.steps.size() + 1);
    if (!tr.steps.empty()) ++nontrivial;
    for (std::size_t k = 0; k < tr.steps.size(); ++k) {
      const SetFamily& prev = tr.states[k];
      const SetFamily& next = tr.states[k + 1];
      CHECK(mu(next, kThird) == mu(f, kThird));
      CHECK(oracle::increasing(next));
      CHECK(oracle::t_intersecting(next, t));
      CHECK(mu(family_difference(prev, next), kThird) <= delta);
      CHECK(tr.steps[k].removed.rational() == mu(family_difference(prev, next), kThird));
      CHECK(oracle::influence(next, n, kThird) < delta);
      CHECK(tr.steps[k].influence.rational() == oracle::influence(next, n, kThird));
      // the smallest j that moves something
      const int j = tr.steps[k].j;
      CHECK(next == shift(prev, n, j));
      for (int q = 1; q < j; ++q) CHECK(shift(prev, n, q) == prev);
    }
    CHECK(compressed_oracle(tr.states.back(), n));
    CHECK(is_n_compressed(tr.states.back(), n));
  }
  CHECK(nontrivial > 20);
}

TEST_CASE("n-compression agrees with the definition") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const SetFamily f = oracle::random_family(n, rng, 0.4);
    for (int c = 1; c <= n; ++c) CHECK(is_n_compressed(f, c) == compressed_oracle(f, c));
    bool shifted = true;
    for (int c = 2; c <= n; ++c) shifted = shifted && compressed_oracle(f, c);
    CHECK(is_shifted(f) == shifted);
  }
}

TEST_CASE("exact t-intersections in n-compressed families") {
  // A non-compressed pair is reported.
  const SetFamily f = make_family(4, {{1, 4}, {2, 4}});
  const auto w = exact_t_violation(f, 1);
  REQUIRE(w);
  CHECK(*w == WitnessPair{subset_of({1, 4}), subset_of({2, 4})});

  // Any n-compressed family holding A and B also holds A - n + j for each j outside A,
  // so it is enough to rule out every pair together with those images.
  for (int n = 1; n <= 6; ++n) {
    const Subset top = element_bit(n);
    const Subset full = full_set(n);
    for (int t = 1; t <= n; ++t)
      for (Subset a = 0; a <= full; ++a)
        for (Subset b = 0; b <= full; ++b) {
          if ((a & b & top) == 0 || cardinality(a & b) != t) continue;
          std::vector<Subset> closure{a, b};
          for (Subset s : {a, b})
            for (int j = 1; j < n; ++j)
              if (!has_element(s, j)) closure.push_back((s & ~top) | element_bit(j));
          const SetFamily g = SetFamily::from_members(n, Storage::power_set, closure);
          if (!oracle::t_intersecting(g, t)) continue;
          CHECK(compressed_oracle(g, n));
          CHECK((a | b) == full);
          CHECK(cardinality(a) + cardinality(b) == n + t);
        }
  }

  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const int t = 1 + static_cast<int>(rng() % std::min(3, n));
    const SetFamily g = compressed(oracle::random_t_intersecting(n, t, rng), t);
    CHECK_FALSE(exact_t_violation(g, t));
  }
}

TEST_CASE("boundary layers") {
  const SetFamily f = up_closure(make_family(3, {{1, 3}, {1, 2}}));
  CHECK(boundary_layer(f, 2) == make_uniform_family(3, 2, {{1, 3}}));
  CHECK(boundary_layer(f, 3).empty());
  CHECK(boundary_layer(dictatorship(3, 3), 1) == make_uniform_family(3, 1, {{3}}));
}

TEST_CASE("off-diagonal increase, exhaustive on n <= 5") {
  const Bias p(kThird);
  int instances = 0;
  for (int n = 2; n <= 5; ++n)
    for (auto mask : oracle::monotone_masks(n)) {
      const SetFamily f = oracle::from_mask(n, mask);
      if (f.empty()) continue;
      for (int t = 1; t <= 2; ++t) {
        if (!oracle::t_intersecting(f, t) || !compressed_oracle(f, n)) continue;
        const Rational base = mu(f, kThird);
        const Rational inf = oracle::influence(f, n, kThird);
        for (int a = 1; a <= n; ++a) {
          const int b = n + t - a;
          if (b == a || b < 1 || b > n) continue;
          ++instances;
          const auto r = increase_offdiagonal(f, t, a, b, p);
          CHECK(oracle::t_intersecting(r.g1, t));
          CHECK(oracle::t_intersecting(r.g2, t));
          CHECK(r.mu1.rational() == mu(r.g1, kThird));
          CHECK(r.mu2.rational() == mu(r.g2, kThird));
          const Rational best = std::max(r.mu1.rational(), r.mu2.rational());
          CHECK(best >= base);
          if (best == base) CHECK((r.g1 == f && r.g2 == f));
          CHECK(r.best_mu().rational() == best);
          CHECK(mu(family_difference(f, r.best()), kThird) <= inf);
        }
      }
    }
  CHECK(instances > 100);

  const SetFamily star = dictatorship(4, 1);
  CHECK_THROWS_AS((void)increase_offdiagonal(star, 1, 2, 2, p), InputError);
  CHECK_THROWS_AS((void)increase_offdiagonal(star, 1, 2, 4, p), InputError);
  CHECK_THROWS_AS((void)increase_offdiagonal(dictatorship(4, 4), 1, 2, 3, p), ContractError);
}

TEST_CASE("diagonal increase, exhaustive on n <= 5") {
  int instances = 0;
  for (int n = 2; n <= 5; ++n)
    for (auto mask : oracle::monotone_masks(n)) {
      const SetFamily f = oracle::from_mask(n, mask);
      if (f.empty()) continue;
      for (int t = 1; t <= 3; ++t) {
        if ((n + t) % 2 != 0 || t >= n) continue;
        if (!oracle::t_intersecting(f, t) || !compressed_oracle(f, n)) continue;
        // any p with p < 1/2 - t/(2n)
        const Rational pr = oracle::frac(n - t, 4 * n);
        const Rational inf = oracle::influence(f, n, pr);
        const int a = (n + t) / 2;
        const SetFamily xa = boundary_layer(f, a);
        if (inf == 0 || xa.empty()) {
          CHECK_THROWS_AS((void)increase_diagonal(f, t, Bias(pr)), ContractError);
          continue;
        }
        ++instances;
        const auto r = increase_diagonal(f, t, Bias(pr));
        REQUIRE(r.candidates.size() == static_cast<std::size_t>(n - 1));
        const Rational base = mu(f, pr);
        const Rational xmu = mu(xa, pr);
        for (int i = 1; i < n; ++i) {
          const SetFamily& g = r.candidates[i - 1];
          CHECK(oracle::t_intersecting(g, t));
          CHECK(r.mus[i - 1].rational() == mu(g, pr));
          std::vector<Subset> k;
          for (Subset s : xa.members())
            if (!has_element(s, i)) k.push_back(s);
          const Rational kmu = mu(SetFamily::from_members(n, Storage::power_set, k), pr);
          CHECK(mu(g, pr) == base - xmu + kmu / pr);
          CHECK(r.best_mu().rational() >= r.mus[i - 1].rational());
        }
        CHECK(r.best_mu().rational() > base);
      }
    }
  CHECK(instances > 5);
  CHECK_THROWS_AS((void)increase_diagonal(dictatorship(4, 1), 1, Bias(kThird)), ContractError);
}

TEST_CASE("pipeline") {
  const Bias p(Rational(3, 10));
  const SetFamily star = dictatorship(6, 1);
  const auto idle = stability_pipeline(star, p, 1, 1.0);
  CHECK(idle.steps.empty());
  CHECK(idle.final_family == star);
  CHECK(idle.final_coordinates == subset_of({1}));

  const SetFamily h = up_closure(tightness_family(TightnessSpec{8, 1, 0, 2}));
  const auto tr = stability_pipeline(h, p, 1, 1.0);
  CHECK(tr.iterations > 0);
  CHECK(cardinality(tr.final_coordinates) < cardinality(live_coordinates(h)));
  CHECK(is_junta(tr.final_family, tr.final_coordinates));
  CHECK(oracle::t_intersecting(tr.final_family, 1));
  CHECK(mu(tr.final_family, p.rational()) >= mu(h, p.rational()));
  for (const auto& s : tr.steps) {
    CHECK(compare(s.modification, s.bound) <= 0);
    CHECK(compare(s.mu_after, s.mu_before) >= 0);
  }
  CHECK_FALSE(render_trace(tr).empty());

  CHECK_THROWS_AS((void)stability_pipeline(h, Bias(0.5), 1, 1.0), InputError);
  CHECK_THROWS_AS((void)stability_pipeline(h, p, 1, 0.0), InputError);
  CHECK_THROWS_AS((void)stability_pipeline(make_family(4, {{1}, {2}}), p, 1, 1.0), ContractError);

  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 5);
    const int t = 1 + static_cast<int>(rng() % 2);
    const SetFamily f = oracle::random_t_intersecting(n, t, rng);
    const auto r = stability_pipeline(f, p, t, 1.0);
    CHECK(is_junta(r.final_family, r.final_coordinates));
    CHECK(oracle::t_intersecting(r.final_family, t));
    CHECK(mu(r.final_family, p.rational()) >= mu(f, p.rational()));
    for (const auto& s : r.steps) CHECK(compare(s.modification, s.bound) <= 0);
  }
}
