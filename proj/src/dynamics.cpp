#include "hardcore/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hardcore/numerics.hpp"

namespace hardcore {

namespace {

void check_inputs(const BipartiteMultigraph& g, double lambda) {
  if (!g.valid()) throw std::invalid_argument("dynamics: invalid graph");
  if (!(lambda > 0)) throw std::invalid_argument("dynamics: lambda must be > 0");
}

// occupied-neighbor counts with edge multiplicity, from scratch
void recount(const BipartiteMultigraph& g, const std::vector<std::uint8_t>& occ1,
             const std::vector<std::uint8_t>& occ2, std::vector<int>& blocked1,
             std::vector<int>& blocked2) {
  blocked1.assign(static_cast<std::size_t>(g.n), 0);
  blocked2.assign(static_cast<std::size_t>(g.n), 0);
  for (int k = 0; k < g.d; ++k)
    for (int u = 0; u < g.n; ++u) {
      const int v = g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)];
      if (occ2[static_cast<std::size_t>(v)]) ++blocked1[static_cast<std::size_t>(u)];
      if (occ1[static_cast<std::size_t>(u)]) ++blocked2[static_cast<std::size_t>(v)];
    }
}

std::vector<std::vector<int>> invert_matchings(const BipartiteMultigraph& g) {
  std::vector<std::vector<int>> inv(static_cast<std::size_t>(g.d),
                                    std::vector<int>(static_cast<std::size_t>(g.n), 0));
  for (int k = 0; k < g.d; ++k)
    for (int u = 0; u < g.n; ++u)
      inv[static_cast<std::size_t>(k)][static_cast<std::size_t>(
          g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)])] = u;
  return inv;
}

}  // namespace

bool ChainState::consistent(const BipartiteMultigraph& g) const {
  std::vector<int> b1, b2;
  recount(g, occ1, occ2, b1, b2);
  if (b1 != blocked1 || b2 != blocked2) return false;
  int s1 = 0, s2 = 0;
  for (int u = 0; u < g.n; ++u) {
    s1 += occ1[static_cast<std::size_t>(u)] ? 1 : 0;
    s2 += occ2[static_cast<std::size_t>(u)] ? 1 : 0;
    // independence: an occupied vertex has no occupied neighbors
    if (occ1[static_cast<std::size_t>(u)] && b1[static_cast<std::size_t>(u)] > 0) return false;
    if (occ2[static_cast<std::size_t>(u)] && b2[static_cast<std::size_t>(u)] > 0) return false;
  }
  return s1 == size1 && s2 == size2;
}

ChainState make_chain_state(const BipartiteMultigraph& g, ChainInit init) {
  check_inputs(g, 1.0);
  if (init == ChainInit::kGiven)
    throw std::invalid_argument("make_chain_state: kGiven needs the occupancy overload");
  ChainState s;
  s.occ1.assign(static_cast<std::size_t>(g.n), 0);
  s.occ2.assign(static_cast<std::size_t>(g.n), 0);
  // V1 (and V2) are edgeless, so a full side is a maximal independent set
  if (init == ChainInit::kFillV1) {
    std::fill(s.occ1.begin(), s.occ1.end(), std::uint8_t{1});
    s.size1 = g.n;
  } else if (init == ChainInit::kFillV2) {
    std::fill(s.occ2.begin(), s.occ2.end(), std::uint8_t{1});
    s.size2 = g.n;
  }
  recount(g, s.occ1, s.occ2, s.blocked1, s.blocked2);
  s.inv_match = invert_matchings(g);
  return s;
}

ChainState make_chain_state(const BipartiteMultigraph& g, const std::vector<std::uint8_t>& occ1,
                            const std::vector<std::uint8_t>& occ2) {
  check_inputs(g, 1.0);
  if (occ1.size() != static_cast<std::size_t>(g.n) || occ2.size() != static_cast<std::size_t>(g.n))
    throw std::invalid_argument("make_chain_state: occupancy size mismatch");
  ChainState s;
  s.occ1 = occ1;
  s.occ2 = occ2;
  for (int u = 0; u < g.n; ++u) {
    s.size1 += occ1[static_cast<std::size_t>(u)] ? 1 : 0;
    s.size2 += occ2[static_cast<std::size_t>(u)] ? 1 : 0;
  }
  recount(g, s.occ1, s.occ2, s.blocked1, s.blocked2);
  if (!s.consistent(g)) throw std::invalid_argument("make_chain_state: not an independent set");
  s.inv_match = invert_matchings(g);
  return s;
}

void glauber_step(ChainState& s, const BipartiteMultigraph& g, double lambda, CounterRng& rng) {
  const int n = g.n;
  if (s.inv_match.size() != static_cast<std::size_t>(g.d))
    throw std::invalid_argument("glauber_step: state not built for this graph");
  const double p_occ = lambda / (1.0 + lambda);
  const std::uint64_t idx = rng.next_below(static_cast<std::uint64_t>(2 * n));
  if (idx < static_cast<std::uint64_t>(n)) {
    const int u = static_cast<int>(idx);
    if (s.occ1[static_cast<std::size_t>(u)]) {
      if (rng.next_double() >= p_occ) {
        s.occ1[static_cast<std::size_t>(u)] = 0;
        --s.size1;
        for (int k = 0; k < g.d; ++k)
          --s.blocked2[static_cast<std::size_t>(g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)])];
      }
    } else if (s.blocked1[static_cast<std::size_t>(u)] == 0) {
      if (rng.next_double() < p_occ) {
        s.occ1[static_cast<std::size_t>(u)] = 1;
        ++s.size1;
        for (int k = 0; k < g.d; ++k)
          ++s.blocked2[static_cast<std::size_t>(g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)])];
      }
    }
    // blocked vertex: stays unoccupied with probability 1, no draw consumed
  } else {
    const int v = static_cast<int>(idx) - n;
    if (s.occ2[static_cast<std::size_t>(v)]) {
      if (rng.next_double() >= p_occ) {
        s.occ2[static_cast<std::size_t>(v)] = 0;
        --s.size2;
        for (int k = 0; k < g.d; ++k)
          --s.blocked1[static_cast<std::size_t>(s.inv_match[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)])];
      }
    } else if (s.blocked2[static_cast<std::size_t>(v)] == 0) {
      if (rng.next_double() < p_occ) {
        s.occ2[static_cast<std::size_t>(v)] = 1;
        ++s.size2;
        for (int k = 0; k < g.d; ++k)
          ++s.blocked1[static_cast<std::size_t>(s.inv_match[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)])];
      }
    }
  }
}

void block_step(ChainState& s, const BipartiteMultigraph& g, double lambda,
                const std::vector<int>& w, CounterRng& rng) {
  check_inputs(g, lambda);
  const int n = g.n;
  if (s.inv_match.size() != static_cast<std::size_t>(g.d))
    throw std::invalid_argument("block_step: state not built for this graph");
  std::vector<int> ids = w;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() > 20) throw std::invalid_argument("block_step: |W| > 20");
  std::vector<int> a, b;  // V1 members, V2 members
  for (int id : ids) {
    if (id < 0 || id >= 2 * n) throw std::invalid_argument("block_step: vertex id out of range");
    (id < n ? a : b).push_back(id < n ? id : id - n);
  }
  std::vector<std::uint8_t> in_a(static_cast<std::size_t>(n), 0), in_b(static_cast<std::size_t>(n), 0);
  for (int u : a) in_a[static_cast<std::size_t>(u)] = 1;
  for (int v : b) in_b[static_cast<std::size_t>(v)] = 1;

  // members not blocked by the frozen complement
  std::vector<int> a_free, b_free;
  for (int u : a) {
    bool blocked = false;
    for (int k = 0; k < g.d && !blocked; ++k) {
      const int v = g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)];
      if (s.occ2[static_cast<std::size_t>(v)] && !in_b[static_cast<std::size_t>(v)]) blocked = true;
    }
    if (!blocked) a_free.push_back(u);
  }
  {
    std::vector<std::uint8_t> frozen_blocked(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < g.d; ++k)
      for (int u = 0; u < n; ++u)
        if (s.occ1[static_cast<std::size_t>(u)] && !in_a[static_cast<std::size_t>(u)])
          frozen_blocked[static_cast<std::size_t>(g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)])] = 1;
    for (int v : b)
      if (!frozen_blocked[static_cast<std::size_t>(v)]) b_free.push_back(v);
  }

  // bitmask of b_free members each a_free member would block
  const int na = static_cast<int>(a_free.size());
  const int nb = static_cast<int>(b_free.size());
  std::vector<int> b_index(static_cast<std::size_t>(n), -1);
  for (int j = 0; j < nb; ++j) b_index[static_cast<std::size_t>(b_free[static_cast<std::size_t>(j)])] = j;
  std::vector<std::uint32_t> kill(static_cast<std::size_t>(na), 0);
  for (int i = 0; i < na; ++i)
    for (int k = 0; k < g.d; ++k) {
      const int j = b_index[static_cast<std::size_t>(
          g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(a_free[static_cast<std::size_t>(i)])])];
      if (j >= 0) kill[static_cast<std::size_t>(i)] |= 1u << j;
    }

  // conditional law: P(S, T) ~ lambda^(|S|+|T|) over S subset a_free,
  // T subset b_free \ N(S); marginal weight of S is
  // lambda^|S| (1+lambda)^(#b_free not blocked by S)
  const std::uint32_t s_total = 1u << na;
  double total = 0;
  std::vector<double> weight(static_cast<std::size_t>(s_total));
  for (std::uint32_t mask = 0; mask < s_total; ++mask) {
    std::uint32_t blocked = 0;
    for (int i = 0; i < na; ++i)
      if (mask & (1u << i)) blocked |= kill[static_cast<std::size_t>(i)];
    const int ns = __builtin_popcount(mask);
    const int nfree = nb - __builtin_popcount(blocked);
    weight[static_cast<std::size_t>(mask)] = std::pow(lambda, ns) * std::pow(1.0 + lambda, nfree);
    total += weight[static_cast<std::size_t>(mask)];
  }
  const double u01 = rng.next_double() * total;
  std::uint32_t chosen = s_total - 1;
  double cum = 0;
  for (std::uint32_t mask = 0; mask < s_total; ++mask) {
    cum += weight[static_cast<std::size_t>(mask)];
    if (u01 < cum) {
      chosen = mask;
      break;
    }
  }
  std::uint32_t blocked_b = 0;
  for (int i = 0; i < na; ++i)
    if (chosen & (1u << i)) blocked_b |= kill[static_cast<std::size_t>(i)];

  // clear the window, then write the sample
  auto set1 = [&](int u, std::uint8_t val) {
    if (s.occ1[static_cast<std::size_t>(u)] == val) return;
    s.occ1[static_cast<std::size_t>(u)] = val;
    s.size1 += val ? 1 : -1;
    const int dlt = val ? 1 : -1;
    for (int k = 0; k < g.d; ++k)
      s.blocked2[static_cast<std::size_t>(g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)])] += dlt;
  };
  auto set2 = [&](int v, std::uint8_t val) {
    if (s.occ2[static_cast<std::size_t>(v)] == val) return;
    s.occ2[static_cast<std::size_t>(v)] = val;
    s.size2 += val ? 1 : -1;
    const int dlt = val ? 1 : -1;
    for (int k = 0; k < g.d; ++k)
      s.blocked1[static_cast<std::size_t>(s.inv_match[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)])] += dlt;
  };
  for (int u : a) set1(u, 0);
  for (int v : b) set2(v, 0);
  for (int i = 0; i < na; ++i)
    if (chosen & (1u << i)) set1(a_free[static_cast<std::size_t>(i)], 1);
  const double p_occ = lambda / (1.0 + lambda);
  for (int j = 0; j < nb; ++j) {
    if (blocked_b & (1u << j)) continue;
    if (rng.next_double() < p_occ) set2(b_free[static_cast<std::size_t>(j)], 1);
  }
}

namespace {

Trace run_from(ChainState s, const BipartiteMultigraph& g, double lambda, std::int64_t steps,
               std::int64_t sample_every, std::uint64_t seed) {
  if (steps < 0) throw std::invalid_argument("run_chain: negative step count");
  if (sample_every < 1) throw std::invalid_argument("run_chain: sample_every must be >= 1");
  CounterRng rng(seed, 0);
  Trace tr;
  auto record = [&](std::int64_t t) {
    tr.steps.push_back(t);
    tr.magnetization.push_back(s.magnetization());
    tr.occupancy.push_back(s.size1 + s.size2);
  };
  record(0);
  for (std::int64_t t = 1; t <= steps; ++t) {
    glauber_step(s, g, lambda, rng);
    if (t % sample_every == 0 || t == steps) record(t);
  }
  return tr;
}

}  // namespace

Trace run_chain(const BipartiteMultigraph& g, double lambda, std::int64_t steps, ChainInit init,
                std::int64_t sample_every, std::uint64_t seed) {
  check_inputs(g, lambda);
  return run_from(make_chain_state(g, init), g, lambda, steps, sample_every, seed);
}

CrossingSummary crossing_time(const BipartiteMultigraph& g, double lambda, std::int64_t max_steps,
                              int n_runs, std::uint64_t seed) {
  check_inputs(g, lambda);
  if (max_steps < 0) throw std::invalid_argument("crossing_time: negative max_steps");
  if (n_runs < 1) throw std::invalid_argument("crossing_time: n_runs must be >= 1");
  CrossingSummary out;
  out.n_runs = n_runs;
  for (int r = 0; r < n_runs; ++r) {
    CounterRng rng(seed, static_cast<std::uint64_t>(r));
    ChainState s = make_chain_state(g, ChainInit::kFillV1);
    std::int64_t hit = max_steps;
    bool crossed = s.magnetization() <= 0;  // n = 0 never happens; defensive
    for (std::int64_t t = 1; t <= max_steps && !crossed; ++t) {
      glauber_step(s, g, lambda, rng);
      if (s.magnetization() <= 0) {
        hit = t;
        crossed = true;
      }
    }
    out.times.push_back(hit);
    out.censored.push_back(!crossed);
    if (!crossed) ++out.n_censored;
  }
  std::vector<double> vals(out.times.begin(), out.times.end());
  out.median_time = median(vals);
  return out;
}

}  // namespace hardcore
