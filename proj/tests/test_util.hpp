#pragma once
// shared brute-force oracles for the test suites -- written independently of
// the library internals on purpose (different algorithms, same answers)
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "hardcore/graph.hpp"

namespace testutil {

// every graph on (n, d): all d-tuples of permutations
inline std::vector<hardcore::BipartiteMultigraph> all_graphs(int n, int d) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  std::vector<hardcore::BipartiteMultigraph> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  for (;;) {
    hardcore::BipartiteMultigraph g;
    g.n = n;
    g.d = d;
    for (int k = 0; k < d; ++k) g.matchings.push_back(perms[idx[static_cast<std::size_t>(k)]]);
    out.push_back(g);
    int k = d - 1;
    while (k >= 0) {
      if (++idx[static_cast<std::size_t>(k)] < perms.size()) break;
      idx[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

// W[a][b] = lambda^(a+b) * #independent sets with a on V1 and b on V2,
// by checking all 2^n x 2^n subset pairs.  n <= 12 or so.
inline std::vector<std::vector<double>> brute_profile(const hardcore::BipartiteMultigraph& g,
                                                      double lambda) {
  const int n = g.n;
  std::vector<std::uint32_t> nbr(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < g.d; ++k)
    for (int u = 0; u < n; ++u)
      nbr[static_cast<std::size_t>(u)] |= 1u << g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)];
  std::vector<std::vector<double>> w(static_cast<std::size_t>(n) + 1,
                                     std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
  for (std::uint32_t s1 = 0; s1 < (1u << n); ++s1) {
    std::uint32_t blocked = 0;
    for (int u = 0; u < n; ++u)
      if (s1 & (1u << u)) blocked |= nbr[static_cast<std::size_t>(u)];
    const int a = __builtin_popcount(s1);
    for (std::uint32_t s2 = 0; s2 < (1u << n); ++s2) {
      if (s2 & blocked) continue;
      const int b = __builtin_popcount(s2);
      w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +=
          std::pow(lambda, a + b);
    }
  }
  return w;
}

// cycle counts by brute force over subsets of edge instances.  An i-cycle is
// an i-subset of edge instances touching exactly i vertices, every touched
// vertex having degree 2, connected.  Edge instance = (u, k).
inline std::map<int, std::int64_t> brute_cycles(const hardcore::BipartiteMultigraph& g,
                                                int i_max) {
  const int n = g.n, d = g.d, m = n * d;
  std::vector<std::pair<int, int>> ends;  // (u, n + v)
  for (int k = 0; k < d; ++k)
    for (int u = 0; u < n; ++u)
      ends.push_back({u, n + g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)]});

  std::map<int, std::int64_t> counts;
  for (int i = 2; i <= std::min(i_max, 2 * n); i += 2) counts[i] = 0;

  std::vector<int> comb;
  // iterate i-subsets of {0..m-1}
  for (int i = 2; i <= std::min(i_max, 2 * n); i += 2) {
    comb.assign(static_cast<std::size_t>(i), 0);
    std::iota(comb.begin(), comb.end(), 0);
    if (i > m) continue;
    for (;;) {
      std::vector<int> deg(static_cast<std::size_t>(2 * n), 0);
      for (int e : comb) {
        ++deg[static_cast<std::size_t>(ends[static_cast<std::size_t>(e)].first)];
        ++deg[static_cast<std::size_t>(ends[static_cast<std::size_t>(e)].second)];
      }
      int touched = 0;
      bool ok = true;
      for (int v = 0; v < 2 * n; ++v) {
        if (deg[static_cast<std::size_t>(v)] == 0) continue;
        if (deg[static_cast<std::size_t>(v)] != 2) { ok = false; break; }
        ++touched;
      }
      if (ok && touched == i) {
        // connectivity: walk edges from the first one
        std::vector<char> used(static_cast<std::size_t>(i), 0);
        std::vector<int> stack = {ends[static_cast<std::size_t>(comb[0])].first};
        std::vector<char> seen(static_cast<std::size_t>(2 * n), 0);
        seen[static_cast<std::size_t>(stack[0])] = 1;
        int nseen = 1;
        while (!stack.empty()) {
          const int v = stack.back();
          stack.pop_back();
          for (std::size_t j = 0; j < comb.size(); ++j) {
            if (used[j]) continue;
            const auto [x, y] = ends[static_cast<std::size_t>(comb[j])];
            int other = -1;
            if (x == v) other = y;
            else if (y == v) other = x;
            if (other < 0) continue;
            used[j] = 1;
            if (!seen[static_cast<std::size_t>(other)]) {
              seen[static_cast<std::size_t>(other)] = 1;
              ++nseen;
              stack.push_back(other);
            }
          }
        }
        if (nseen == i) ++counts[i];
      }
      // next combination
      int j = i - 1;
      while (j >= 0 && comb[static_cast<std::size_t>(j)] == m - i + j) --j;
      if (j < 0) break;
      ++comb[static_cast<std::size_t>(j)];
      for (int l = j + 1; l < i; ++l)
        comb[static_cast<std::size_t>(l)] = comb[static_cast<std::size_t>(l - 1)] + 1;
    }
  }
  return counts;
}

// two-sample Kolmogorov-Smirnov statistic
inline double ks_statistic(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double dmax = 0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] <= y[j])
      ++i;
    else
      ++j;
    const double fx = static_cast<double>(i) / static_cast<double>(x.size());
    const double fy = static_cast<double>(j) / static_cast<double>(y.size());
    dmax = std::max(dmax, std::abs(fx - fy));
  }
  return dmax;
}

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double std_error(const std::vector<double>& v) {
  const double m = mean(v);
  double s2 = 0;
  for (double x : v) s2 += (x - m) * (x - m);
  s2 /= static_cast<double>(v.size() - 1);
  return std::sqrt(s2 / static_cast<double>(v.size()));
}

}  // namespace testutil
