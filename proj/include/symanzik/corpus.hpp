#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "symanzik/multigraph.hpp"
#include "symanzik/rational.hpp"

namespace symanzik {

/// Canonical corpus of connected multigraphs (parallel edges and loops
/// included). Strata are the (n, m) cells; a cell is enumerated exhaustively
/// while the raw multiset count stays under enumerate_threshold and sampled
/// with the seeded generator otherwise, so the corpus is deterministic for a
/// fixed seed and set of caps.
struct CorpusOptions {
  int min_n = 2;
  int max_n = 6;
  int max_m = 10;
  std::uint64_t seed = 20160702;
  long enumerate_threshold = 600;
  int sample_per_stratum = 100;
  int top_n_sample_per_stratum = 40;  // used for the largest vertex count
};

namespace detail {

// Edge kinds for n vertices: all unordered pairs u <= v (loops included),
// listed in lexicographic order.
inline std::vector<std::pair<int, int>> edge_kinds(int n) {
  std::vector<std::pair<int, int>> kinds;
  for (int u = 0; u < n; ++u)
    for (int v = u; v < n; ++v) kinds.emplace_back(u, v);
  return kinds;
}

inline long multiset_count(long kinds, long m) {
  // C(kinds + m - 1, m), saturating to avoid overflow for the comparisons.
  long double acc = 1;
  for (long i = 0; i < m; ++i) acc = acc * static_cast<long double>(kinds + i) / static_cast<long double>(i + 1);
  return acc > 1e17L ? static_cast<long>(1e17) : static_cast<long>(acc + 0.5L);
}

}  // namespace detail

inline std::vector<Multigraph> generate_corpus(const CorpusOptions& opt = {}) {
  std::vector<Multigraph> out;
  std::set<std::string> seen;
  Rng rng(opt.seed);

  auto add = [&](int n, const std::vector<int>& pick, const std::vector<std::pair<int, int>>& kinds) {
    std::vector<std::pair<int, int>> endpoints;
    endpoints.reserve(pick.size());
    for (int k : pick) endpoints.push_back(kinds[k]);
    Multigraph g(n, std::move(endpoints));
    if (!g.is_connected()) return;
    if (seen.insert(g.key()).second) out.push_back(std::move(g));
  };

  for (int n = opt.min_n; n <= opt.max_n; ++n) {
    std::vector<std::pair<int, int>> kinds = detail::edge_kinds(n);
    int nkinds = static_cast<int>(kinds.size());
    for (int m = std::max(1, n - 1); m <= opt.max_m; ++m) {
      long raw = detail::multiset_count(nkinds, m);
      if (raw <= opt.enumerate_threshold) {
        // every multiset c0 <= c1 <= ... <= c_{m-1} of kind indices
        std::vector<int> pick(m, 0);
        while (true) {
          add(n, pick, kinds);
          int i = m - 1;
          while (i >= 0 && pick[i] == nkinds - 1) --i;
          if (i < 0) break;
          int v = pick[i] + 1;
          for (int j = i; j < m; ++j) pick[j] = v;
        }
      } else {
        int want = (n == opt.max_n) ? opt.top_n_sample_per_stratum : opt.sample_per_stratum;
        Rng stratum = rng.fork();
        int produced = 0;
        for (int attempt = 0; attempt < want * 20 && produced < want; ++attempt) {
          std::vector<int> pick(m);
          for (int j = 0; j < m; ++j) pick[j] = static_cast<int>(stratum.below(nkinds));
          std::sort(pick.begin(), pick.end());
          size_t before = out.size();
          add(n, pick, kinds);
          if (out.size() > before) ++produced;
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Multigraph& a, const Multigraph& b) {
    if (a.n() != b.n()) return a.n() < b.n();
    if (a.m() != b.m()) return a.m() < b.m();
    return a.key() < b.key();
  });
  return out;
}

/// The handful of named graphs the documentation and tests lean on.
namespace graphs {

inline Multigraph k2() { return Multigraph(2, {{0, 1}}); }
inline Multigraph banana(int k) {
  std::vector<std::pair<int, int>> e(k, {0, 1});
  return Multigraph(2, std::move(e));
}
inline Multigraph cycle(int n) {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < n; ++v) e.push_back({v, (v + 1) % n});
  return Multigraph(n, std::move(e));
}
inline Multigraph path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return Multigraph(n, std::move(e));
}
/// e0=(0,1), e1=(1,2), e2=(0,1): a parallel pair plus a pendant edge.
inline Multigraph parallel_pair_path() { return Multigraph(3, {{0, 1}, {1, 2}, {0, 1}}); }

}  // namespace graphs

}  // namespace symanzik
