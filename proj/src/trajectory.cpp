#include "qmc/trajectory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>
#include <utility>

namespace qmc {

StepSampler::StepSampler(const QmcModel& model) : n(model.n), k(model.k) {
  superops.assign(static_cast<size_t>(n), std::vector<ComplexMatrix>());
  for (int i = 0; i < n; ++i) {
    auto& row = superops[static_cast<size_t>(i)];
    row.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
      row.push_back(model.kraus(i, j).empty()
                        ? ComplexMatrix(k * k, k * k)
                        : superop_of_kraus(model.kraus(i, j)));
  }
}

std::vector<double> StepSampler::distribution(int j, const ComplexMatrix& rho) const {
  const ComplexVector w = vec(rho);
  std::vector<double> p(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const ComplexVector y = superops[static_cast<size_t>(i)][static_cast<size_t>(j)] * w;
    double t = 0.0;
    for (int a = 0; a < k; ++a) t += y[a * k + a].real();
    p[static_cast<size_t>(i)] = std::max(t, 0.0);
  }
  return p;
}

namespace {

struct ChunkStats {
  uint64_t hits = 0;
  uint64_t censored = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
};

// Runs trajectories [first, last) of the global index space.
ChunkStats run_chunk(const StepSampler& sampler, int start_vertex,
                     const ComplexVector& rho0, int target,
                     const TrajectoryConfig& cfg, uint64_t first, uint64_t last) {
  ChunkStats stats;
  const int n = sampler.n;
  const int k = sampler.k;
  const int k2 = k * k;
  ComplexVector state(k2), scratch(k2);
  std::vector<double> probs(static_cast<size_t>(n), 0.0);
  std::vector<ComplexVector> arrivals(static_cast<size_t>(n), ComplexVector(k2));

  for (uint64_t idx = first; idx < last; ++idx) {
    SplitMix64 rng = SplitMix64::for_stream(cfg.seed, idx);
    int vertex = start_vertex;
    for (int a = 0; a < k2; ++a) state[a] = rho0[a];
    bool hit = false;
    for (uint64_t step = 1; step <= cfg.max_steps; ++step) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        const ComplexMatrix& S =
            sampler.superops[static_cast<size_t>(i)][static_cast<size_t>(vertex)];
        ComplexVector& y = arrivals[static_cast<size_t>(i)];
        for (int r = 0; r < k2; ++r) {
          Cx s{0.0, 0.0};
          for (int c = 0; c < k2; ++c) s += S(r, c) * state[c];
          y[r] = s;
        }
        double t = 0.0;
        for (int a = 0; a < k; ++a) t += y[a * k + a].real();
        probs[static_cast<size_t>(i)] = std::max(t, 0.0);
        total += probs[static_cast<size_t>(i)];
      }
      if (total < 1e-14)
        throw NumericalError("dead state: all transition probabilities vanish");
      // Cumulative sampling; the final bucket absorbs float drift.
      const double draw = rng.uniform() * total;
      int chosen = n - 1;
      double acc = 0.0;
      for (int i = 0; i < n - 1; ++i) {
        acc += probs[static_cast<size_t>(i)];
        if (draw < acc) {
          chosen = i;
          break;
        }
      }
      const double p = probs[static_cast<size_t>(chosen)];
      const ComplexVector& y = arrivals[static_cast<size_t>(chosen)];
      // Renormalize and re-Hermitize the post-measurement state.
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
          const Cx a = y[r * k + c] / p;
          const Cx b = std::conj(y[c * k + r] / p);
          scratch[r * k + c] = 0.5 * (a + b);
        }
      for (int a = 0; a < k2; ++a) state[a] = scratch[a];
      vertex = chosen;
      if (vertex == target) {
        stats.hits += 1;
        stats.sum += static_cast<double>(step);
        stats.sum_sq += static_cast<double>(step) * static_cast<double>(step);
        hit = true;
        break;
      }
    }
    if (!hit) stats.censored += 1;
  }
  return stats;
}

}  // namespace

std::pair<int, ComplexMatrix> step_sample(const StepSampler& sampler, int j,
                                          const ComplexMatrix& rho,
                                          SplitMix64& rng) {
  if (j < 0 || j >= sampler.n)
    throw std::invalid_argument("vertex index out of range");
  const std::vector<double> p = sampler.distribution(j, rho);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (total < 1e-14)
    throw NumericalError("dead state: all transition probabilities vanish");
  const double draw = rng.uniform() * total;
  int chosen = sampler.n - 1;
  double acc = 0.0;
  for (int i = 0; i < sampler.n - 1; ++i) {
    acc += p[static_cast<size_t>(i)];
    if (draw < acc) {
      chosen = i;
      break;
    }
  }
  const ComplexVector y =
      sampler.superops[static_cast<size_t>(chosen)][static_cast<size_t>(j)] * vec(rho);
  const ComplexMatrix next =
      hermitize((1.0 / p[static_cast<size_t>(chosen)]) * unvec(y, sampler.k));
  return {chosen, next};
}

HittingEstimate estimate_hitting(const QmcModel& model, int j,
                                 const ComplexMatrix& rho_j, int i,
                                 const TrajectoryConfig& cfg) {
  if (j < 0 || j >= model.n || i < 0 || i >= model.n)
    throw std::invalid_argument("vertex index out of range");
  if (cfg.samples < 1 || cfg.max_steps < 1)
    throw std::invalid_argument("samples and max_steps must be >= 1");
  const StepSampler sampler(model);
  const ComplexVector rho0 = vec(rho_j);

  int workers = cfg.workers;
  if (workers <= 0)
    workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const uint64_t chunk = 1024;  // fixed size keeps the merge worker-independent
  const uint64_t num_chunks = (cfg.samples + chunk - 1) / chunk;
  workers = static_cast<int>(
      std::min<uint64_t>(static_cast<uint64_t>(workers), num_chunks));

  std::vector<ChunkStats> results(static_cast<size_t>(num_chunks));
  if (workers <= 1) {
    for (uint64_t c = 0; c < num_chunks; ++c)
      results[static_cast<size_t>(c)] =
          run_chunk(sampler, j, rho0, i, cfg, c * chunk,
                    std::min(cfg.samples, (c + 1) * chunk));
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    std::atomic<uint64_t> next_chunk{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        try {
          for (;;) {
            const uint64_t c = next_chunk.fetch_add(1);
            if (c >= num_chunks) return;
            results[static_cast<size_t>(c)] =
                run_chunk(sampler, j, rho0, i, cfg, c * chunk,
                          std::min(cfg.samples, (c + 1) * chunk));
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  // Merge in chunk-index order: identical statistics for any worker count.
  ChunkStats total;
  for (const ChunkStats& s : results) {
    total.hits += s.hits;
    total.censored += s.censored;
    total.sum += s.sum;
    total.sum_sq += s.sum_sq;
  }

  HittingEstimate est;
  est.samples = cfg.samples;
  est.censored = total.censored;
  est.hit_fraction =
      static_cast<double>(total.hits) / static_cast<double>(cfg.samples);
  if (total.hits > 0) {
    const double m = total.sum / static_cast<double>(total.hits);
    est.mean = m;
    if (total.hits > 1) {
      const double var =
          std::max(0.0, (total.sum_sq - static_cast<double>(total.hits) * m * m) /
                            static_cast<double>(total.hits - 1));
      est.stderr_ = std::sqrt(var / static_cast<double>(total.hits));
    }
  }
  return est;
}

}  // namespace qmc
