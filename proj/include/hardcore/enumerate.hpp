#pragma once
// Exact per-graph computations on small instances: partition function,
// occupancy profile, barrier measures, conductance lower bounds, and the
// exact single-site heat-bath kernel with its spectral gap.  This is the
// brute-force oracle layer everything stochastic is tested against.
#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "hardcore/graph.hpp"

namespace hardcore {

struct OccupancyProfile {
  int n = 0;
  double lambda = 1;
  // logw[a][b] = log( lambda^(a+b) * #{independent sets I with |I cap V1| = a,
  // |I cap V2| = b} ), with kNegInf marking cells no independent set attains.
  std::vector<std::vector<double>> logw;

  double log_z() const;  // log-sum-exp over all cells
};

// log Z_{G,lambda} via the one-sided sum  sum_{S subset V1} lambda^|S| (1+lambda)^(n-|N(S)|),
// walked in Gray-code order with incremental neighborhood counts.  n <= 26.
double partition_function(const BipartiteMultigraph& g, double lambda);

// W[a][b] = lambda^(a+b) * sum_{|S|=a} C(n-|N(S)|, b), same Gray-code walk.  n <= 26.
OccupancyProfile occupancy_profile(const BipartiteMultigraph& g, double lambda);

struct BarrierMeasures {
  int t = 0;        // integer occupancy-difference threshold (callers map a
                    // density tau to t = floor(tau*n))
  double mu_i1 = 0;  // mu{ I : |I cap V1| - |I cap V2| > t }
  double mu_i2 = 0;  // mu{ I : |I cap V2| - |I cap V1| > t }
  double mu_ib = 0;  // mu{ I : ||I cap V1| - |I cap V2|| <= t }
  double bottleneck_ratio = 0;  // mu_ib / min(mu_i1, mu_i2); +inf when a lobe is empty
};
BarrierMeasures barrier_measures(const BipartiteMultigraph& g, double lambda, int t);

struct ConductanceBound {
  bool applicable = false;  // some choice of lobe gives mu[A] <= 1/2
  double value = 0;         // mu[A] / (8 mu[I_B]) for the accepted A
};
// A = (smaller lobe) union (barrier), B = barrier; if mu[A] > 1/2 the other
// lobe is tried, and if that also exceeds 1/2 the bound is inapplicable.
ConductanceBound conductance_lower_bound(const BipartiteMultigraph& g, double lambda, int t);

struct GlauberKernel {
  // all independent sets as (V1 mask, V2 mask), sorted lexicographically
  std::vector<std::pair<std::uint32_t, std::uint32_t>> states;
  Eigen::VectorXd mu;  // hard-core measure, normalized
  Eigen::MatrixXd p;   // exact single-site heat-bath transition matrix
  double detailed_balance_residual = 0;  // max |mu_i p_ij - mu_j p_ji|
};
// Dense kernel for oracle use; state count capped at 3000.
GlauberKernel build_glauber_kernel(const BipartiteMultigraph& g, double lambda);

// 1 - SLEM of the kernel.  Dense eigensolve when the state space is small,
// deflated power iteration on a sparse representation up to 2e5 states.
double exact_spectral_gap(const BipartiteMultigraph& g, double lambda, bool force_sparse = false);

}  // namespace hardcore
