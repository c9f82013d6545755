#include "hardcore/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "hardcore/numerics.hpp"

namespace hardcore {

namespace {

constexpr int kEnumCap = 26;          // 2^n Gray-code walk
constexpr int kDenseStateCap = 3000;  // dense eigensolve / kernel oracle
constexpr std::int64_t kStateCap = 200000;

void check_graph(const BipartiteMultigraph& g, double lambda) {
  if (!g.valid()) throw std::invalid_argument("enumerate: invalid graph");
  if (!(lambda > 0)) throw std::invalid_argument("enumerate: lambda must be > 0");
}

// distinct V2-neighbors of each V1 vertex (parallel edges collapse here:
// only coverage matters)
std::vector<std::vector<int>> neighbor_sets(const BipartiteMultigraph& g) {
  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(g.n));
  for (int u = 0; u < g.n; ++u) {
    auto& row = nbr[static_cast<std::size_t>(u)];
    for (int k = 0; k < g.d; ++k) row.push_back(g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)]);
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return nbr;
}

// cnt[a][f] = #{ S subset V1 : |S| = a, n - |N(S)| = f }, by Gray-code walk:
// each step toggles one vertex and updates per-vertex cover counts in O(d).
std::vector<std::vector<std::int64_t>> free_count_table(const BipartiteMultigraph& g) {
  const int n = g.n;
  if (n > kEnumCap)
    throw std::invalid_argument("enumerate: n = " + std::to_string(n) + " exceeds the 2^n cap (n <= " +
                                std::to_string(kEnumCap) + ")");
  const auto nbr = neighbor_sets(g);
  std::vector<std::vector<std::int64_t>> cnt(static_cast<std::size_t>(n) + 1,
                                             std::vector<std::int64_t>(static_cast<std::size_t>(n) + 1, 0));
  std::vector<int> cover(static_cast<std::size_t>(n), 0);
  int covered = 0;
  int size = 0;
  std::uint32_t cur = 0;
  cnt[0][static_cast<std::size_t>(n)] = 1;  // S = empty set
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t s = 1; s < total; ++s) {
    const int j = __builtin_ctzll(s);
    const std::uint32_t bit = 1u << j;
    if (cur & bit) {
      cur ^= bit;
      --size;
      for (int v : nbr[static_cast<std::size_t>(j)])
        if (--cover[static_cast<std::size_t>(v)] == 0) --covered;
    } else {
      cur ^= bit;
      ++size;
      for (int v : nbr[static_cast<std::size_t>(j)])
        if (cover[static_cast<std::size_t>(v)]++ == 0) ++covered;
    }
    ++cnt[static_cast<std::size_t>(size)][static_cast<std::size_t>(n - covered)];
  }
  return cnt;
}

}  // namespace

double OccupancyProfile::log_z() const {
  LogSumAcc acc;
  for (const auto& row : logw)
    for (double c : row)
      if (c != kNegInf) acc.add(c);
  return acc.value();
}

double partition_function(const BipartiteMultigraph& g, double lambda) {
  check_graph(g, lambda);
  const auto cnt = free_count_table(g);
  const double ll = std::log(lambda);
  const double l1p = std::log1p(lambda);
  LogSumAcc acc;
  for (int a = 0; a <= g.n; ++a)
    for (int f = 0; f <= g.n; ++f) {
      const std::int64_t c = cnt[static_cast<std::size_t>(a)][static_cast<std::size_t>(f)];
      if (c > 0) acc.add(std::log(static_cast<double>(c)) + a * ll + f * l1p);
    }
  return acc.value();
}

OccupancyProfile occupancy_profile(const BipartiteMultigraph& g, double lambda) {
  check_graph(g, lambda);
  const auto cnt = free_count_table(g);
  const int n = g.n;
  const double ll = std::log(lambda);
  LogFactorialTable lf(n);
  OccupancyProfile prof;
  prof.n = n;
  prof.lambda = lambda;
  prof.logw.assign(static_cast<std::size_t>(n) + 1,
                   std::vector<double>(static_cast<std::size_t>(n) + 1, kNegInf));
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      LogSumAcc acc;
      for (int f = b; f <= n; ++f) {
        const std::int64_t c = cnt[static_cast<std::size_t>(a)][static_cast<std::size_t>(f)];
        if (c > 0) acc.add(std::log(static_cast<double>(c)) + lf.log_choose(f, b));
      }
      if (!acc.empty())
        prof.logw[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = acc.value() + (a + b) * ll;
    }
  return prof;
}

BarrierMeasures barrier_measures(const BipartiteMultigraph& g, double lambda, int t) {
  if (t < 0) throw std::invalid_argument("barrier_measures: t must be >= 0");
  const OccupancyProfile prof = occupancy_profile(g, lambda);
  const double logz = prof.log_z();
  LogSumAcc acc1, acc2, accb;
  for (int a = 0; a <= prof.n; ++a)
    for (int b = 0; b <= prof.n; ++b) {
      const double c = prof.logw[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (c == kNegInf) continue;
      if (a - b > t)
        acc1.add(c);
      else if (b - a > t)
        acc2.add(c);
      else
        accb.add(c);
    }
  BarrierMeasures m;
  m.t = t;
  m.mu_i1 = acc1.empty() ? 0.0 : std::exp(acc1.value() - logz);
  m.mu_i2 = acc2.empty() ? 0.0 : std::exp(acc2.value() - logz);
  m.mu_ib = accb.empty() ? 0.0 : std::exp(accb.value() - logz);
  const double lobe = std::min(m.mu_i1, m.mu_i2);
  m.bottleneck_ratio = lobe > 0 ? m.mu_ib / lobe : std::numeric_limits<double>::infinity();
  return m;
}

ConductanceBound conductance_lower_bound(const BipartiteMultigraph& g, double lambda, int t) {
  const BarrierMeasures m = barrier_measures(g, lambda, t);
  ConductanceBound out;
  // smaller lobe plus barrier first, then the other lobe if that is too big
  const double first = std::min(m.mu_i1, m.mu_i2);
  const double second = std::max(m.mu_i1, m.mu_i2);
  for (double lobe : {first, second}) {
    const double mu_a = lobe + m.mu_ib;
    if (mu_a <= 0.5) {
      out.applicable = true;
      out.value = mu_a / (8.0 * m.mu_ib);
      return out;
    }
  }
  return out;
}

GlauberKernel build_glauber_kernel(const BipartiteMultigraph& g, double lambda) {
  check_graph(g, lambda);
  const int n = g.n;
  if (n > 25) throw std::invalid_argument("build_glauber_kernel: n too large");
  // V2-neighbor masks of V1 vertices and vice versa
  std::vector<std::uint32_t> nbr2(static_cast<std::size_t>(n), 0), nbr1(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < g.d; ++k)
    for (int u = 0; u < n; ++u) {
      const int v = g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)];
      nbr2[static_cast<std::size_t>(u)] |= 1u << v;
      nbr1[static_cast<std::size_t>(v)] |= 1u << u;
    }

  GlauberKernel ker;
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  for (std::uint32_t s1 = 0; s1 <= full; ++s1) {
    std::uint32_t blocked = 0;
    for (int u = 0; u < n; ++u)
      if (s1 & (1u << u)) blocked |= nbr2[static_cast<std::size_t>(u)];
    const std::uint32_t free2 = full & ~blocked;
    // all subsets of free2, descending
    std::uint32_t t = free2;
    for (;;) {
      ker.states.emplace_back(s1, t);
      if (static_cast<std::int64_t>(ker.states.size()) > kDenseStateCap)
        throw std::invalid_argument("build_glauber_kernel: state space over the dense cap");
      if (t == 0) break;
      t = (t - 1) & free2;
    }
    if (s1 == full) break;
  }
  std::sort(ker.states.begin(), ker.states.end());

  const int m = static_cast<int>(ker.states.size());
  std::unordered_map<std::uint64_t, int> index;
  index.reserve(static_cast<std::size_t>(m) * 2);
  for (int i = 0; i < m; ++i)
    index[(static_cast<std::uint64_t>(ker.states[static_cast<std::size_t>(i)].first) << 32) |
          ker.states[static_cast<std::size_t>(i)].second] = i;

  // stationary measure
  ker.mu.resize(m);
  {
    LogSumAcc acc;
    std::vector<double> logmu(static_cast<std::size_t>(m));
    const double ll = std::log(lambda);
    for (int i = 0; i < m; ++i) {
      const auto& st = ker.states[static_cast<std::size_t>(i)];
      logmu[static_cast<std::size_t>(i)] = (__builtin_popcount(st.first) + __builtin_popcount(st.second)) * ll;
      acc.add(logmu[static_cast<std::size_t>(i)]);
    }
    const double logz = acc.value();
    for (int i = 0; i < m; ++i) ker.mu(i) = std::exp(logmu[static_cast<std::size_t>(i)] - logz);
  }

  // heat-bath at a uniform vertex of V1 union V2
  ker.p = Eigen::MatrixXd::Zero(m, m);
  const double pick = 1.0 / (2.0 * n);
  const double p_occ = lambda / (1.0 + lambda);
  for (int i = 0; i < m; ++i) {
    const std::uint32_t s1 = ker.states[static_cast<std::size_t>(i)].first;
    const std::uint32_t s2 = ker.states[static_cast<std::size_t>(i)].second;
    for (int u = 0; u < n; ++u) {
      const std::uint32_t bit = 1u << u;
      if (s1 & bit) {  // occupied: neighbors are free, resample the site
        ker.p(i, i) += pick * p_occ;
        ker.p(i, index[(static_cast<std::uint64_t>(s1 ^ bit) << 32) | s2]) += pick * (1 - p_occ);
      } else if (nbr2[static_cast<std::size_t>(u)] & s2) {  // blocked
        ker.p(i, i) += pick;
      } else {
        ker.p(i, index[(static_cast<std::uint64_t>(s1 | bit) << 32) | s2]) += pick * p_occ;
        ker.p(i, i) += pick * (1 - p_occ);
      }
    }
    for (int v = 0; v < n; ++v) {
      const std::uint32_t bit = 1u << v;
      if (s2 & bit) {
        ker.p(i, i) += pick * p_occ;
        ker.p(i, index[(static_cast<std::uint64_t>(s1) << 32) | (s2 ^ bit)]) += pick * (1 - p_occ);
      } else if (nbr1[static_cast<std::size_t>(v)] & s1) {
        ker.p(i, i) += pick;
      } else {
        ker.p(i, index[(static_cast<std::uint64_t>(s1) << 32) | (s2 | bit)]) += pick * p_occ;
        ker.p(i, i) += pick * (1 - p_occ);
      }
    }
  }

  double resid = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (ker.p(i, j) != 0 || ker.p(j, i) != 0)
        resid = std::max(resid, std::abs(ker.mu(i) * ker.p(i, j) - ker.mu(j) * ker.p(j, i)));
  ker.detailed_balance_residual = resid;
  return ker;
}

namespace {

// sparse transition rows for the power-iteration path
struct SparseKernel {
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> mu;
};

SparseKernel build_sparse_kernel(const BipartiteMultigraph& g, double lambda) {
  const int n = g.n;
  if (n > 25) throw std::invalid_argument("exact_spectral_gap: n too large for mask states");
  std::vector<std::uint32_t> nbr2(static_cast<std::size_t>(n), 0), nbr1(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < g.d; ++k)
    for (int u = 0; u < n; ++u) {
      const int v = g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)];
      nbr2[static_cast<std::size_t>(u)] |= 1u << v;
      nbr1[static_cast<std::size_t>(v)] |= 1u << u;
    }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> states;
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t s1 = 0;; ++s1) {
    std::uint32_t blocked = 0;
    for (int u = 0; u < n; ++u)
      if (s1 & (1u << u)) blocked |= nbr2[static_cast<std::size_t>(u)];
    const std::uint32_t free2 = full & ~blocked;
    std::uint32_t t = free2;
    for (;;) {
      states.emplace_back(s1, t);
      if (static_cast<std::int64_t>(states.size()) > kStateCap)
        throw std::invalid_argument("exact_spectral_gap: state space exceeds the cap");
      if (t == 0) break;
      t = (t - 1) & free2;
    }
    if (s1 == full) break;
  }
  std::sort(states.begin(), states.end());
  const int m = static_cast<int>(states.size());
  std::unordered_map<std::uint64_t, int> index;
  index.reserve(static_cast<std::size_t>(m) * 2);
  for (int i = 0; i < m; ++i)
    index[(static_cast<std::uint64_t>(states[static_cast<std::size_t>(i)].first) << 32) |
          states[static_cast<std::size_t>(i)].second] = i;

  SparseKernel sk;
  sk.rows.resize(static_cast<std::size_t>(m));
  sk.mu.resize(static_cast<std::size_t>(m));
  {
    LogSumAcc acc;
    std::vector<double> logmu(static_cast<std::size_t>(m));
    const double ll = std::log(lambda);
    for (int i = 0; i < m; ++i) {
      const auto& st = states[static_cast<std::size_t>(i)];
      logmu[static_cast<std::size_t>(i)] = (__builtin_popcount(st.first) + __builtin_popcount(st.second)) * ll;
      acc.add(logmu[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < m; ++i) sk.mu[static_cast<std::size_t>(i)] = std::exp(logmu[static_cast<std::size_t>(i)] - acc.value());
  }
  const double pick = 1.0 / (2.0 * n);
  const double p_occ = lambda / (1.0 + lambda);
  for (int i = 0; i < m; ++i) {
    const std::uint32_t s1 = states[static_cast<std::size_t>(i)].first;
    const std::uint32_t s2 = states[static_cast<std::size_t>(i)].second;
    double self = 0;
    auto& row = sk.rows[static_cast<std::size_t>(i)];
    for (int u = 0; u < n; ++u) {
      const std::uint32_t bit = 1u << u;
      if (s1 & bit) {
        self += pick * p_occ;
        row.emplace_back(index[(static_cast<std::uint64_t>(s1 ^ bit) << 32) | s2], pick * (1 - p_occ));
      } else if (nbr2[static_cast<std::size_t>(u)] & s2) {
        self += pick;
      } else {
        row.emplace_back(index[(static_cast<std::uint64_t>(s1 | bit) << 32) | s2], pick * p_occ);
        self += pick * (1 - p_occ);
      }
    }
    for (int v = 0; v < n; ++v) {
      const std::uint32_t bit = 1u << v;
      if (s2 & bit) {
        self += pick * p_occ;
        row.emplace_back(index[(static_cast<std::uint64_t>(s1) << 32) | (s2 ^ bit)], pick * (1 - p_occ));
      } else if (nbr1[static_cast<std::size_t>(v)] & s1) {
        self += pick;
      } else {
        row.emplace_back(index[(static_cast<std::uint64_t>(s1) << 32) | (s2 | bit)], pick * p_occ);
        self += pick * (1 - p_occ);
      }
    }
    row.emplace_back(i, self);
  }
  return sk;
}

}  // namespace

double exact_spectral_gap(const BipartiteMultigraph& g, double lambda, bool force_sparse) {
  check_graph(g, lambda);

  // dense path: symmetrize with D^(1/2) P D^(-1/2) and take all eigenvalues
  bool dense_ok = !force_sparse;
  GlauberKernel ker;
  if (dense_ok) {
    try {
      ker = build_glauber_kernel(g, lambda);
    } catch (const std::invalid_argument&) {
      dense_ok = false;
    }
  }
  if (dense_ok) {
    const int m = static_cast<int>(ker.states.size());
    Eigen::VectorXd sq = ker.mu.array().sqrt();
    Eigen::MatrixXd sym(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) sym(i, j) = sq(i) * ker.p(i, j) / sq(j);
    sym = 0.5 * (sym + sym.transpose().eval());  // kill fp asymmetry
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double slem = std::max(std::abs(ev(0)), std::abs(ev(m - 2)));
    return 1.0 - slem;
  }

  // sparse path: power iteration on the symmetrized kernel with the known
  // top eigenvector sqrt(mu) deflated out
  const SparseKernel sk = build_sparse_kernel(g, lambda);
  const int m = static_cast<int>(sk.rows.size());
  std::vector<double> sq(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) sq[static_cast<std::size_t>(i)] = std::sqrt(sk.mu[static_cast<std::size_t>(i)]);
  // sym(i,j) = sq_i p_ij / sq_j
  std::vector<double> x(static_cast<std::size_t>(m)), y(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(i)] = std::sin(0.7 * i + 0.3) + 1e-3;
  auto deflate = [&](std::vector<double>& v) {
    double dot = 0;
    for (int i = 0; i < m; ++i) dot += v[static_cast<std::size_t>(i)] * sq[static_cast<std::size_t>(i)];
    for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] -= dot * sq[static_cast<std::size_t>(i)];
  };
  auto normalize = [&](std::vector<double>& v) {
    double nrm = 0;
    for (double c : v) nrm += c * c;
    nrm = std::sqrt(nrm);
    if (nrm > 0)
      for (double& c : v) c /= nrm;
    return nrm;
  };
  deflate(x);
  normalize(x);
  double est = 0, prev = 2;
  for (int it = 0; it < 200000; ++it) {
    for (int i = 0; i < m; ++i) {
      double s = 0;
      for (const auto& [j, pij] : sk.rows[static_cast<std::size_t>(i)])
        s += pij / sq[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = s * sq[static_cast<std::size_t>(i)];
    }
    // Rayleigh quotient before renormalizing (x is unit)
    double rq = 0;
    for (int i = 0; i < m; ++i) rq += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    deflate(y);
    normalize(y);
    x.swap(y);
    est = rq;
    if (it > 10 && std::abs(est - prev) < 1e-14 * (1 + std::abs(est))) break;
    prev = est;
  }
  return 1.0 - std::abs(est);
}

}  // namespace hardcore
