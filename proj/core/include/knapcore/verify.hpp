#ifndef KNAPCORE_VERIFY_HPP
#define KNAPCORE_VERIFY_HPP

#include <functional>
#include <string>
#include <vector>

#include "knapcore/gen.hpp"
#include "knapcore/instance.hpp"

namespace knap {

// Seeded, reproducible oracle suites. Each returns a count of passed
// checks plus deterministic report lines (no timing data), so re-runs with
// the same parameters are byte-identical.
struct SuiteResult {
  std::string name;
  i64 passed = 0;
  i64 total = 0;
  std::vector<std::string> lines;
  bool ok() const { return passed == total; }
};

// End-to-end (1-eps)*OPT <= SOL <= OPT against exact_dp, per profile and
// eps, over seeds 0..seeds-1.
SuiteResult run_end2end_suite(const std::vector<Profile>& profiles,
                              const std::vector<Rat>& eps_list, i64 seeds,
                              i64 n_max);

// solve_sparse one-sidedness plus the n*eps additive bound against
// exact_profit_fn.
SuiteResult run_sparse_suite(const std::vector<Rat>& eps_list, i64 seeds,
                             i64 n_max);

// Geometry kernel: combine sigma-accuracy vs the rasterization oracle,
// reduce region-containment and convex-number bound, the F-generatability
// invariant chain under exact Operation-2/3 interleavings, the apex
// composition property, and the no-accumulation property for m-fold
// merges.
SuiteResult run_geometry_suite(i64 seeds);

// Convolution kernels against brute force, plus the class-merge and
// merge_dc approximation contracts.
SuiteResult run_convolution_suite(i64 seeds);

// Worker pool size for suite loops: KNAP_THREADS when set, else the
// hardware concurrency. Output ordering stays deterministic either way.
int worker_threads();

// Runs fn(i) for i in [0, n) on the worker pool.
void parallel_for(i64 n, const std::function<void(i64)>& fn);

}  // namespace knap

#endif  // KNAPCORE_VERIFY_HPP
