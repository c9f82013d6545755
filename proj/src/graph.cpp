#include "hardcore/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hardcore/rng.hpp"

namespace hardcore {

bool BipartiteMultigraph::valid() const {
  if (n < 1 || d < 1) return false;
  if (static_cast<int>(matchings.size()) != d) return false;
  std::vector<char> seen(static_cast<std::size_t>(n));
  for (const auto& m : matchings) {
    if (static_cast<int>(m.size()) != n) return false;
    std::fill(seen.begin(), seen.end(), 0);
    for (int v : m) {
      if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
      seen[static_cast<std::size_t>(v)] = 1;
    }
  }
  return true;
}

BipartiteMultigraph BipartiteMultigraph::swapped() const {
  BipartiteMultigraph g;
  g.n = n;
  g.d = d;
  g.matchings.assign(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(n)));
  for (int k = 0; k < d; ++k)
    for (int u = 0; u < n; ++u)
      g.matchings[static_cast<std::size_t>(k)]
                 [static_cast<std::size_t>(matchings[static_cast<std::size_t>(k)]
                                                    [static_cast<std::size_t>(u)])] = u;
  return g;
}

void BipartiteMultigraph::serialize(std::ostream& out) const {
  out << n << ' ' << d << '\n';
  for (const auto& m : matchings) {
    for (int u = 0; u < n; ++u) {
      if (u) out << ' ';
      out << m[static_cast<std::size_t>(u)];
    }
    out << '\n';
  }
}

BipartiteMultigraph BipartiteMultigraph::parse(std::istream& in) {
  BipartiteMultigraph g;
  if (!(in >> g.n >> g.d)) throw std::runtime_error("graph parse: bad header");
  if (g.n < 1 || g.d < 1) throw std::runtime_error("graph parse: n and d must be positive");
  g.matchings.assign(static_cast<std::size_t>(g.d),
                     std::vector<int>(static_cast<std::size_t>(g.n)));
  for (auto& m : g.matchings)
    for (auto& v : m)
      if (!(in >> v)) throw std::runtime_error("graph parse: truncated matching line");
  if (!g.valid()) throw std::runtime_error("graph parse: matching rows are not permutations");
  return g;
}

BipartiteMultigraph BipartiteMultigraph::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return parse(in);
}

BipartiteMultigraph sample_graph(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("sample_graph: n and d must be positive");
  BipartiteMultigraph g;
  g.n = n;
  g.d = d;
  g.matchings.assign(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(n)));
  for (int k = 0; k < d; ++k) {
    auto& m = g.matchings[static_cast<std::size_t>(k)];
    for (int u = 0; u < n; ++u) m[static_cast<std::size_t>(u)] = u;
    CounterRng rng(seed, static_cast<std::uint64_t>(k));  // independent stream per matching
    for (int u = n - 1; u > 0; --u) {
      const auto j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(u) + 1));
      std::swap(m[static_cast<std::size_t>(u)], m[static_cast<std::size_t>(j)]);
    }
  }
  return g;
}

namespace {

// DFS over non-backtracking walks.  Vertices 0..n-1 are V1, n..2n-1 are V2;
// edge instance k*n+u joins u and n + matchings[k][u].
struct WalkCounter {
  const BipartiteMultigraph& g;
  int i_max;
  std::vector<std::vector<std::pair<int, int>>> adj;  // vertex -> (edge_id, other)
  std::vector<char> on_path;
  std::vector<char> edge_used;
  std::vector<std::int64_t> closed;  // closed[i] = rooted oriented walks of length i
  int root = 0;

  WalkCounter(const BipartiteMultigraph& graph, int cap) : g(graph), i_max(cap) {
    adj.resize(static_cast<std::size_t>(2 * g.n));
    for (int k = 0; k < g.d; ++k)
      for (int u = 0; u < g.n; ++u) {
        const int v = g.n + g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)];
        const int e = k * g.n + u;
        adj[static_cast<std::size_t>(u)].emplace_back(e, v);
        adj[static_cast<std::size_t>(v)].emplace_back(e, u);
      }
    on_path.assign(static_cast<std::size_t>(2 * g.n), 0);
    edge_used.assign(static_cast<std::size_t>(g.n * g.d), 0);
    closed.assign(static_cast<std::size_t>(i_max) + 1, 0);
  }

  void dfs(int vertex, int depth, int prev_edge) {
    for (const auto& [e, next] : adj[static_cast<std::size_t>(vertex)]) {
      if (e == prev_edge || edge_used[static_cast<std::size_t>(e)]) continue;
      if (next == root) {
        ++closed[static_cast<std::size_t>(depth) + 1];
        continue;  // walks end on first return to the root
      }
      if (on_path[static_cast<std::size_t>(next)] || depth + 1 >= i_max) continue;
      on_path[static_cast<std::size_t>(next)] = 1;
      edge_used[static_cast<std::size_t>(e)] = 1;
      dfs(next, depth + 1, e);
      edge_used[static_cast<std::size_t>(e)] = 0;
      on_path[static_cast<std::size_t>(next)] = 0;
    }
  }

  void run() {
    for (root = 0; root < 2 * g.n; ++root) {
      on_path[static_cast<std::size_t>(root)] = 1;
      dfs(root, 0, -1);
      on_path[static_cast<std::size_t>(root)] = 0;
    }
  }
};

}  // namespace

CycleCensus count_cycles(const BipartiteMultigraph& g, int i_max) {
  if (i_max % 2 != 0 || i_max < 2) throw std::invalid_argument("count_cycles: i_max must be even and >= 2");
  if (!g.valid()) throw std::invalid_argument("count_cycles: invalid graph");
  WalkCounter wc(g, i_max);
  wc.run();
  CycleCensus census;
  for (int i = 2; i <= i_max; i += 2) {
    const std::int64_t walks = wc.closed[static_cast<std::size_t>(i)];
    if (walks % (2 * i) != 0)
      throw std::logic_error("count_cycles: walk count not divisible by 2i");
    census.counts[i] = walks / (2 * i);
  }
  return census;
}

}  // namespace hardcore
