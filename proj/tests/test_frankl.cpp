#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "setfam/errors.hpp"
#include "setfam/frankl.hpp"
#include "setfam/measures.hpp"
#include "support.hpp"

using namespace setfam;

namespace {

// sum_{i=t+r}^{t+2r} C(t+2r,i) p^i (1-p)^{t+2r-i}, straight from the definition.
Rational eq1(const Rational& p, int t, int r) {
  Rational total = 0;
  const int w = t + 2 * r;
  for (int i = t + r; i <= w; ++i)
    total += Rational(static_cast<long>(binomial(w, i))) * oracle::rpow(p, i) * oracle::rpow(1 - p, w - i);
  return total;
}

std::uint64_t count_members(int n, int k, Subset base, int need) {
  std::uint64_t c = 0;
  for (Subset s : layer_lex(n, k))
    if (cardinality(s & base) >= need) ++c;
  return c;
}

}  // namespace

TEST_CASE("Frankl families") {
  const SetFamily umv = frankl_family(FranklSpec{6, 2, 0, 0, 3});
  CHECK(umv == and_family(6, subset_of({1, 2}), 3));
  const SetFamily f = frankl_family(FranklSpec{6, 2, 1, 0, 3});
  CHECK(f == make_uniform_family(6, 3, {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}));
  CHECK_THROWS_AS((void)frankl_family(FranklSpec{4, 2, 2}), InputError);
  CHECK_THROWS_AS((void)frankl_family(FranklSpec{6, 1, 1, subset_of({1, 2})}), InputError);

  for (int n = 3; n <= 8; ++n)
    for (int t = 1; t <= 3; ++t)
      for (int r = 0; t + 2 * r <= n; ++r) {
        const FranklSpec dense{n, t, r};
        const SetFamily g = frankl_family(dense);
        CHECK(oracle::t_intersecting(g, t));
        CHECK(is_junta(g, frankl_base(dense)));
        for (int k = t; k <= n; ++k) {
          CHECK(frankl_size(n, k, t, r) == count_members(n, k, prefix_set(t + 2 * r), t + r));
          CHECK(frankl_family(FranklSpec{n, t, r, 0, k}).size() == frankl_size(n, k, t, r));
        }
      }
}

TEST_CASE("f_uniform") {
  CHECK(f_uniform(6, 3, 2).value == 4);
  for (int t = 1; t <= 3; ++t)
    for (int k = t; k <= 6; ++k) {
      const int n = (t + 1) * (k - t + 1);
      if (n > 20) continue;
      const auto opt = f_uniform(n, k, t);
      CHECK(opt.value == binomial(n - t, k - t));
      CHECK(std::find(opt.argmax.begin(), opt.argmax.end(), 0) != opt.argmax.end());
    }
  for (int n = 3; n <= 14; ++n)
    for (int k = 1; 2 * k < n; ++k) CHECK(f_uniform(n, k, 1).value == binomial(n - 1, k - 1));
  CHECK_THROWS_AS((void)f_uniform(4, 2, 3), InputError);
}

TEST_CASE("closed form for the biased Frankl measure") {
  for (const Rational& p : {Rational(1, 3), Rational(2, 5), Rational(1, 7)})
    for (int t = 1; t <= 3; ++t)
      for (int r = 0; r <= 2; ++r) {
        const Rational expect = eq1(p, t, r);
        CHECK(frankl_measure(Bias(p), t, r).rational() == expect);
        for (int n = t + 2 * r; n <= t + 2 * r + 3; ++n)
          CHECK(mu_biased(frankl_family(FranklSpec{n, t, r}), Bias(p)).rational() == expect);
      }
}

TEST_CASE("f_biased") {
  const auto a = f_biased(10, Bias(0.3), 1);
  CHECK(a.value.value() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(a.argmax == std::vector<int>{0});

  const auto b = f_biased(10, Bias(Rational(2, 5)), 2);
  CHECK(b.value.rational() == Rational(112, 625));
  CHECK(b.argmax == std::vector<int>{1, 2});
  const auto bf = f_biased(10, Bias(0.4), 2);
  CHECK(bf.value.value() == doctest::Approx(0.1792).epsilon(1e-12));
  CHECK(bf.argmax == std::vector<int>{1, 2});

  const auto c = f_biased(10, Bias(0.2), 2);
  CHECK(c.value.value() == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(c.argmax == std::vector<int>{0});

  CHECK_THROWS_AS((void)f_biased(10, Bias(0.5), 1), InputError);
  CHECK_THROWS_AS((void)f_biased(10, Bias(0.7), 1), InputError);

  // The default cut-off never hides the maximum of a long scan.
  for (const Rational& p : {Rational(1, 3), Rational(2, 5), Rational(9, 20), Rational(3, 7)})
    for (int t = 1; t <= 3; ++t) {
      Rational best = 0;
      for (int r = 0; r <= 25; ++r) best = std::max(best, eq1(p, t, r));
      CHECK(f_biased(100, Bias(p), t).value.rational() == best);
    }
}

TEST_CASE("r_star") {
  const auto a = r_star(Bias(0.2), 2);
  CHECK(a.r == 0);
  CHECK_FALSE(a.singular);
  const auto b = r_star(Bias(Rational(2, 5)), 2);
  CHECK(b.r == 1);
  CHECK(b.singular);
  const auto bf = r_star(Bias(0.4), 2);
  CHECK(bf.r == 1);
  CHECK(bf.singular);

  const Rational beta(9, 20);
  int best = 0;
  for (int r = 1; r <= 20; ++r)
    if (eq1(beta, 1, r) > eq1(beta, 1, best)) best = r;
  CHECK(r_star(Bias(beta), 1).r == best);
  CHECK(r_star(Bias(0.45), 1).r == best);
  CHECK_THROWS_AS((void)r_star(Bias(0.5), 1), InputError);
}

TEST_CASE("tightness families and their closed forms") {
  const Rational third(1, 3);
  const TightnessSpec spec{10, 2, 0, 2};
  const SetFamily h = tightness_family(spec);
  const auto forms = tightness_closed_forms(spec, Bias(third));
  CHECK(forms.mu.rational() == oracle::mu(h, third));

  for (const Rational& p : {Rational(1, 3), Rational(2, 5)})
    for (int t = 1; t <= 3; ++t)
      for (int r = 0; r <= 2; ++r)
        for (int s = 0; s <= 4; ++s) {
          const int n = t + 2 * r + s;
          if (n > 14) continue;
          const TightnessSpec ts{n, t, r, s};
          const SetFamily ht = tightness_family(ts);
          const SetFamily fr = frankl_family(FranklSpec{n, t, r});
          const auto cf = tightness_closed_forms(ts, Bias(p));
          CHECK(cf.mu.rational() == oracle::mu(ht, p));
          CHECK(cf.excess.rational() == oracle::mu(family_difference(ht, fr), p));
          if (r == 0)
            CHECK(cf.excess.rational() ==
                  Rational(t) * oracle::rpow(p, t - 1) * (1 - p) * oracle::rpow(p, s));
          if (s >= 2 || (t == 1 && s >= 1)) {
            INFO("t=" << t << " r=" << r << " s=" << s);
            CHECK(oracle::t_intersecting(ht, t));
          }
        }
}

TEST_CASE("distance to Frankl families") {
  const SetFamily f = frankl_family(FranklSpec{8, 2, 1, 0, 4});
  CHECK(distance_to_frankl(f, 2, 2).distance == 0);
  const std::vector<int> sigma{5, 3, 8, 1, 2, 7, 6, 4};
  CHECK(distance_to_frankl(apply_permutation(f, sigma), 2, 2).distance == 0);

  const SetFamily h = tightness_family(TightnessSpec{8, 1, 0, 2, 3});
  const auto d0 = distance_to_frankl(h, 1, 0);
  CHECK(d0.distance == 5);  // {2,3,x} for x in 4..8 against the star at 1
  CHECK(distance_to_frankl(h, 1, 1).distance == 0);
  CHECK_THROWS_AS((void)distance_to_frankl(h, 1, 4), InputError);

  // Against every relabelling at n = 6: base sets are enough.
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 6, k = 3, t = 1;
    const SetFamily g = oracle::random_layer(n, k, rng, 0.5);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::uint64_t best = g.size();
    for (int r = 0; t + 2 * r <= n && r <= 1; ++r) {
      const SetFamily base = frankl_family(FranklSpec{n, t, r, 0, k});
      do {
        best = std::min<std::uint64_t>(best, family_difference(g, apply_permutation(base, perm)).size());
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    const auto d = distance_to_frankl(g, t, 1);
    CHECK(d.distance == best);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(distance_to_frankl(apply_permutation(g, perm), t, 1).distance == d.distance);
  }
}
