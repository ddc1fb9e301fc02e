#include "setfam/search.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <sstream>

#include "setfam/errors.hpp"
#include "setfam/io.hpp"

namespace setfam {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kMaxVertices = 20000;

class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t words) : w_(words, 0) {}
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  [[nodiscard]] bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1U; }
  [[nodiscard]] bool none() const {
    for (auto x : w_)
      if (x) return false;
    return true;
  }
  [[nodiscard]] std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }
  // Lowest set index; call only when !none().
  [[nodiscard]] std::size_t first() const {
    for (std::size_t i = 0;; ++i)
      if (w_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(w_[i]));
  }
  Bits& operator&=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  void and_not(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      for (std::uint64_t x = w_[i]; x; x &= x - 1)
        fn(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
  }

 private:
  std::vector<std::uint64_t> w_;
};

// Maximum clique over the k-sets of [n] (lex order) in a compatibility graph,
// branching include-first on the lowest candidate so the first optimum met is
// the lex-minimal one.
class CliqueSearch {
 public:
  CliqueSearch(int n, int k, const std::function<bool(Subset, Subset)>& compatible,
               const SearchOptions& options)
      : n_(n), k_(k), options_(options), start_(Clock::now()) {
    verts_ = layer_lex(n, k);
    const std::size_t N = verts_.size();
    const std::size_t words = (N + 63) / 64;
    adj_.assign(N, Bits(words));
    nonadj_.assign(N, Bits(words));
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        if (i == j) continue;
        if (compatible(verts_[i], verts_[j]))
          adj_[i].set(j);
        else
          nonadj_[i].set(j);
      }
    if (options.shifted) {
      std::vector<std::size_t> index(std::size_t{1} << n, 0);
      for (std::size_t i = 0; i < N; ++i) index[verts_[i]] = i;
      preds_.resize(N);
      for (std::size_t i = 0; i < N; ++i) {
        const Subset s = verts_[i];
        for (int e = 2; e <= n; ++e)
          if (has_element(s, e) && !has_element(s, e - 1))
            preds_[i].push_back(index[(s & ~element_bit(e)) | element_bit(e - 1)]);
      }
    }
  }

  SearchResult run() {
    const std::size_t N = verts_.size();
    SearchResult out;
    in_cur_.assign(N, false);
    // Every nonempty family is isomorphic to one holding [k]; shifted ones hold it anyway.
    cur_.push_back(0);
    in_cur_[0] = true;
    best_ = cur_;
    Bits root = adj_[0];
    close(root);
    upper_ = 1 + color_bound(root, N);
    expand(root);
    out.optimum = best_.size();
    FamilyBuilder builder(n_, Storage::layer, k_);
    for (std::size_t v : best_) builder.add(verts_[v]);
    out.family = std::move(builder).build();
    out.nodes = nodes_;
    out.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return out;
  }

 private:
  // Shifted mode: drop candidates with a predecessor neither chosen nor still available.
  void close(Bits& p) const {
    if (!options_.shifted) return;
    p.for_each([&](std::size_t u) {
      for (std::size_t q : preds_[u])
        if (!in_cur_[q] && !p.test(q)) {
          p.reset(u);
          return;
        }
    });
  }

  // Greedy colouring of the candidate set, stopping once it exceeds `cap`.
  std::size_t color_bound(Bits q, std::size_t cap) const {
    std::size_t colors = 0;
    while (!q.none()) {
      if (++colors > cap) return colors;
      Bits r = q;
      while (!r.none()) {
        const std::size_t u = r.first();
        q.reset(u);
        r.reset(u);
        r &= nonadj_[u];
      }
    }
    return colors;
  }

  void check_budget() {
    ++nodes_;
    if (nodes_ > options_.node_budget || ((nodes_ & 1023) == 0 && elapsed() > options_.time_budget_secs))
      throw ResourceError("search budget exhausted after " + std::to_string(nodes_) +
                          " nodes: best found " + std::to_string(best_.size()) +
                          ", upper bound " + std::to_string(upper_));
  }

  [[nodiscard]] double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

  void expand(Bits p) {
    for (;;) {
      check_budget();
      if (p.none()) {
        if (cur_.size() > best_.size()) best_ = cur_;
        return;
      }
      const std::size_t room = best_.size() - cur_.size();
      if (best_.size() >= cur_.size() && color_bound(p, room) <= room) return;
      const std::size_t v = p.first();
      if (options_.shifted) {
        bool ready = true;
        for (std::size_t q : preds_[v]) ready = ready && in_cur_[q];
        if (!ready) {
          p.reset(v);
          close(p);
          continue;
        }
      }
      Bits inc = p;
      inc &= adj_[v];
      cur_.push_back(v);
      in_cur_[v] = true;
      close(inc);
      expand(std::move(inc));
      cur_.pop_back();
      in_cur_[v] = false;
      p.reset(v);
      close(p);
    }
  }

  int n_;
  int k_;
  SearchOptions options_;
  Clock::time_point start_;
  std::vector<Subset> verts_;
  std::vector<Bits> adj_;
  std::vector<Bits> nonadj_;
  std::vector<std::vector<std::size_t>> preds_;
  std::vector<std::size_t> cur_;
  std::vector<bool> in_cur_;
  std::vector<std::size_t> best_;
  std::size_t upper_ = 0;
  std::uint64_t nodes_ = 0;
};

void check_instance(int n, int k, int t, const char* op) {
  if (!(1 <= t && t <= k && k <= n))
    throw InputError(std::string(op) + ": needs 1 <= t <= k <= n");
  if (n > kMaxLayerN) throw InputError(std::string(op) + ": n exceeds " + std::to_string(kMaxLayerN));
  if (binomial(n, k) > kMaxVertices)
    throw ResourceError(std::string(op) + ": C(n,k) = " + std::to_string(binomial(n, k)) +
                        " candidate sets exceed " + std::to_string(kMaxVertices));
}

}  // namespace

SearchResult max_t_intersecting(int n, int k, int t, const SearchOptions& options) {
  check_instance(n, k, t, "max_t_intersecting");
  CliqueSearch search(
      n, k, [t](Subset a, Subset b) { return cardinality(a & b) >= t; }, options);
  return search.run();
}

SearchResult max_forbidden(int n, int k, int t, const SearchOptions& options) {
  check_instance(n, k, t, "max_forbidden");
  if (options.shifted && t > 1)
    throw InputError("max_forbidden: shifting does not preserve the constraint for t > 1");
  CliqueSearch search(
      n, k, [t](Subset a, Subset b) { return cardinality(a & b) != t - 1; }, options);
  return search.run();
}

std::string render_search(const SearchResult& result) {
  std::ostringstream os;
  os << result.optimum << '\n'
     << render_family(result.family) << "nodes " << result.nodes << '\n'
     << "seconds " << to_decimal_string(result.seconds) << '\n';
  return os.str();
}

namespace {

void require_forbidden_free(const SetFamily& family, int t, const char* op) {
  if (t < 1) throw InputError(std::string(op) + ": t must be >= 1");
  if (auto w = forbidden_intersection_witness(family, t))
    throw ContractError(std::string(op) + ": " + to_string(w->first) + " and " +
                        to_string(w->second) + " meet in t - 1 elements");
}

Rational ratio(std::uint64_t a, std::uint64_t b) {
  Rational q(BigInt(std::to_string(a), 10), BigInt(std::to_string(b), 10));
  q.canonicalize();
  return q;
}

}  // namespace

JuntaApprox junta_approx_audit(const SetFamily& family, int t, Subset J) {
  if (!family.is_uniform()) throw InputError("junta_approx_audit: family must be tagged with a layer");
  if ((J & ~family.ground()) != 0) throw InputError("junta_approx_audit: J is not a subset of [n]");
  if (cardinality(J) > 6)
    throw ResourceError("junta_approx_audit: |J| = " + std::to_string(cardinality(J)) +
                        " exceeds 6");
  require_forbidden_free(family, t, "junta_approx_audit");
  const int n = family.n();
  const int k = family.k();
  const auto counts = slice_counts(family, J);

  // Weighted max clique over B subset of J with |B cap B'| >= t, weight |F_J^B|.
  std::vector<Subset> verts;
  for (Subset B : subsets_of_size_then_lex(J))
    if (cardinality(B) >= t) verts.push_back(B);
  std::sort(verts.begin(), verts.end(), LexLess{});
  const std::size_t N = verts.size();
  std::vector<std::uint64_t> weight(N);
  std::vector<std::uint64_t> adj(N, 0);
  for (std::size_t i = 0; i < N; ++i) {
    weight[i] = counts[compress_bits(verts[i], J)];
    for (std::size_t j = 0; j < N; ++j)
      if (i != j && cardinality(verts[i] & verts[j]) >= t) adj[i] |= std::uint64_t{1} << j;
  }
  std::uint64_t best_w = 0, best_set = 0;
  std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)> grow =
      [&](std::uint64_t chosen, std::uint64_t cand, std::uint64_t w) {
        if (w > best_w) {
          best_w = w;
          best_set = chosen;
        }
        std::uint64_t room = 0;
        for (std::uint64_t c = cand; c; c &= c - 1) room += weight[std::countr_zero(c)];
        if (w + room <= best_w) return;
        for (std::uint64_t c = cand; c; c &= c - 1) {
          const int v = std::countr_zero(c);
          const std::uint64_t later = c & ~((std::uint64_t{2} << v) - 1);
          grow(chosen | (std::uint64_t{1} << v), later & adj[v], w + weight[v]);
        }
      };
  grow(0, N == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << N) - 1, 0);

  JuntaApprox out;
  for (std::uint64_t c = best_set; c; c &= c - 1) out.generators.push_back(verts[std::countr_zero(c)]);
  out.missed = family.size() - best_w;
  const SetFamily junta = junta_generate(n, k, J, out.generators);
  out.extra = junta.size() - best_w;
  out.epsilon = ratio(out.missed, binomial(n, k));
  return out;
}

LocalExtremality local_extremality_audit(const SetFamily& family, int t, Subset J,
                                         const std::vector<Subset>& generators, double eps0) {
  if (!family.is_uniform())
    throw InputError("local_extremality_audit: family must be tagged with a layer");
  if ((J & ~family.ground()) != 0) throw InputError("local_extremality_audit: J is not a subset of [n]");
  require_forbidden_free(family, t, "local_extremality_audit");
  const int n = family.n();
  const int k = family.k();
  std::vector<bool> in_g(std::size_t{1} << cardinality(J), false);
  for (Subset B : generators) {
    if ((B & ~J) != 0) throw InputError("local_extremality_audit: generator outside J");
    in_g[compress_bits(B, J)] = true;
  }
  for (Subset a : generators)
    for (Subset b : generators)
      if (cardinality(a & b) < t)
        throw ContractError("local_extremality_audit: G is not t-intersecting at " + to_string(a) +
                            ", " + to_string(b));
  for (Subset B : subsets_of_size_then_lex(J)) {
    if (in_g[compress_bits(B, J)]) continue;
    bool fits = true;
    for (Subset a : generators) fits = fits && cardinality(a & B) >= t;
    if (fits)
      throw ContractError("local_extremality_audit: G is not maximal, " + to_string(B) +
                          " can be added");
  }

  const auto counts = slice_counts(family, J);
  const int nj = n - cardinality(J);
  LocalExtremality out;
  for (Subset B : subsets_of_size_then_lex(J)) {
    const int kb = k - cardinality(B);
    if (kb < 0 || kb > nj) continue;
    const double density = static_cast<double>(counts[compress_bits(B, J)]) /
                           static_cast<double>(binomial(nj, kb));
    if (in_g[compress_bits(B, J)]) {
      if (density <= 1 - eps0)
        throw ContractError("local_extremality_audit: slice " + to_string(B) + " has density " +
                            to_decimal_string(density) + " <= 1 - eps0");
      out.epsilon = std::max(out.epsilon, 1 - density);
    } else {
      out.delta = std::max(out.delta, density);
    }
  }
  const SetFamily junta = junta_generate(n, k, J, generators);
  out.mu_f = ratio(family.size(), binomial(n, k));
  out.mu_g = ratio(junta.size(), binomial(n, k));
  out.holds = out.mu_f <= out.mu_g;
  out.equality = family == junta;
  return out;
}

}  // namespace setfam
