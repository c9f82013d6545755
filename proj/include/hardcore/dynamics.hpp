#pragma once
// Glauber single-site dynamics and exact block (small-set) dynamics on a
// bipartite multigraph, magnetization traces, and barrier-crossing runs.
#include <cstdint>
#include <vector>

#include "hardcore/graph.hpp"
#include "hardcore/rng.hpp"

namespace hardcore {

// Vertices are addressed 0..n-1 for V1 and n..2n-1 for V2.
struct ChainState {
  std::vector<std::uint8_t> occ1, occ2;  // occupancy indicators
  std::vector<int> blocked1, blocked2;   // occupied-neighbor counts (with edge multiplicity)
  int size1 = 0, size2 = 0;
  // inv_match[k][v] = the u with matchings[k][u] = v, cached at construction
  // so V2-side updates stay O(d)
  std::vector<std::vector<int>> inv_match;

  int magnetization() const { return size1 - size2; }
  // recompute blocked counts and sizes from occ vectors; true if they match
  // the incrementally maintained ones and the set is independent
  bool consistent(const BipartiteMultigraph& g) const;
};

enum class ChainInit { kEmpty, kFillV1, kFillV2, kGiven };

ChainState make_chain_state(const BipartiteMultigraph& g, ChainInit init);
ChainState make_chain_state(const BipartiteMultigraph& g, const std::vector<std::uint8_t>& occ1,
                            const std::vector<std::uint8_t>& occ2);

// one heat-bath update at a uniform vertex of V1 union V2; O(d)
void glauber_step(ChainState& s, const BipartiteMultigraph& g, double lambda, CounterRng& rng);

// exact conditional resampling of the set W (vertex ids in 0..2n-1) given the
// frozen complement; |W| <= 20, enumeration over admissible configurations
void block_step(ChainState& s, const BipartiteMultigraph& g, double lambda,
                const std::vector<int>& w, CounterRng& rng);

struct Trace {
  std::vector<std::int64_t> steps;  // sample times (multiples of sample_every, plus the final step)
  std::vector<int> magnetization;   // size1 - size2 at each sample time
  std::vector<int> occupancy;       // size1 + size2
};

Trace run_chain(const BipartiteMultigraph& g, double lambda, std::int64_t steps, ChainInit init,
                std::int64_t sample_every, std::uint64_t seed);

struct CrossingSummary {
  std::vector<std::int64_t> times;  // per run: first step with magnetization <= 0, censored at max_steps
  std::vector<bool> censored;
  double median_time = 0;  // median of the censored times
  int n_censored = 0;
  int n_runs = 0;
};

// runs start from fill_V1; run r uses the rng stream (seed, r)
CrossingSummary crossing_time(const BipartiteMultigraph& g, double lambda, std::int64_t max_steps,
                              int n_runs, std::uint64_t seed);

}  // namespace hardcore
