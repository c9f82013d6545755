#pragma once
// Random bipartite d-regular multigraphs: the union of d uniformly random
// perfect matchings between two n-vertex sides, plus short-cycle counting.
#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

namespace hardcore {

struct BipartiteMultigraph {
  int n = 0;
  int d = 0;
  // matchings[k][u] = partner of u in V2 under matching k; each row is a
  // permutation of 0..n-1.  Parallel edges are distinct edge instances.
  std::vector<std::vector<int>> matchings;

  bool valid() const;
  // swap the two sides: matching k becomes its inverse permutation
  BipartiteMultigraph swapped() const;

  void serialize(std::ostream& out) const;          // "n d" then d permutation lines
  static BipartiteMultigraph parse(std::istream& in);
  static BipartiteMultigraph parse_file(const std::string& path);
};

// d independent uniform permutations via Fisher-Yates; deterministic in seed.
BipartiteMultigraph sample_graph(int n, int d, std::uint64_t seed);

struct CycleCensus {
  // X_i for even i in {2, 4, ..., i_max}: number of simple cycles on i
  // distinct vertices using i distinct edge instances.
  std::map<int, std::int64_t> counts;
};

// Rooted oriented non-backtracking closed walks on distinct vertices with
// distinct edge instances, summed over all 2n roots and divided by 2i.
CycleCensus count_cycles(const BipartiteMultigraph& g, int i_max);

}  // namespace hardcore
