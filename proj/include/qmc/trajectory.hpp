#pragma once

#include <cstdint>
#include <vector>

#include "qmc/model.hpp"
#include "qmc/rng.hpp"

namespace qmc {

struct TrajectoryConfig {
  uint64_t samples = 100000;
  uint64_t max_steps = 1000000;  // censoring horizon
  uint64_t seed = 1;
  int workers = 1;  // <= 0 selects hardware concurrency
};

struct HittingEstimate {
  double mean = 0.0;      // over hit trajectories only
  double stderr_ = 0.0;
  double hit_fraction = 0.0;
  uint64_t censored = 0;
  uint64_t samples = 0;
};

// Per-(from,to) superoperator table so the sampling loop works on vec'd states.
struct StepSampler {
  int n = 0;
  int k = 0;
  std::vector<std::vector<ComplexMatrix>> superops;  // [i][j], k^2 x k^2

  explicit StepSampler(const QmcModel& model);

  // Probability of each arrival vertex from (j, rho); sums to 1.
  std::vector<double> distribution(int j, const ComplexMatrix& rho) const;
};

// One evolution-plus-measurement step: samples arrival vertex i with
// probability Tr(Phi_ij(rho)) and renormalizes the post-measurement state.
std::pair<int, ComplexMatrix> step_sample(const StepSampler& sampler, int j,
                                          const ComplexMatrix& rho,
                                          SplitMix64& rng);

// Mean first-arrival time at target i over cfg.samples trajectories from
// (j, rho_j); the hit step is the first m >= 1 whose sampled vertex is i, so
// i = j measures the return time. Censored runs are excluded from the mean
// and reported. Deterministic for a fixed seed, for any worker count.
HittingEstimate estimate_hitting(const QmcModel& model, int j,
                                 const ComplexMatrix& rho_j, int i,
                                 const TrajectoryConfig& cfg);

}  // namespace qmc
