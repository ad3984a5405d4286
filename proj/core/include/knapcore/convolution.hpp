#ifndef KNAPCORE_CONVOLUTION_HPP
#define KNAPCORE_CONVOLUTION_HPP

#include <vector>

#include "knapcore/step_fn.hpp"

namespace knap {

// Exact (max,+)-convolution of two monotone step functions, O(k_f * k_g).
// Serves as the oracle for every approximate merge in this project.
StepFn maxplus_naive(const StepFn& f, const StepFn& g);

// c[k] = max_{i+j=k} a[i] + b[j] for a concave (differences non-increasing)
// and b arbitrary (-inf entries allowed), in O(|a| + |b|) matrix queries via
// SMAWK row maxima of the totally monotone matrix M[k][j] = a[k-j] + b[j].
// Ties break toward the smaller column index. Rejects non-concave a.
std::vector<Val> smawk_concave_maxplus(const std::vector<i64>& a,
                                       const std::vector<Val>& b);

// Balanced binary merge tree over fs: each pairwise maxplus_naive is
// followed by cap_values(cap) and round_down_geometric with per-level
// eps' = eps / ceil(log2 m). Result (1-eps)-approximates min(f1+...+fm, cap)
// multiplicatively. Empty list: constant 0. Single function: its geometric
// rounding.
StepFn merge_dc(const std::vector<StepFn>& fs, const Rat& eps, i64 cap);

// One profit class: a p-uniform pseudo-concave function. Values are
// 0, p, 2p, ..., lp; the k-th x-breakpoint is the sum of the k smallest
// weights, so consecutive x-gaps are non-decreasing by construction.
struct UniformFn {
  i64 p = 0;                 // step height in grains, in [1/eps, 2/eps)
  std::vector<i64> weights;  // ascending item weights of the class
  i64 cap = 0;               // value bound in grains; levels above are cut
  Rat grain{1};
};

// Sorts weights internally; keeps levels k with k*p <= cap.
UniformFn build_class_function(std::vector<i64> weights, i64 p_grains,
                               i64 cap_grains, const Rat& grain);

// Minimal x achieving value k*p, for k = 0..l (prefix sums).
std::vector<i64> uniform_levels(const UniformFn& u);

StepFn uniform_to_step_fn(const UniformFn& u);

// Merges profit classes capped at B: classes sharing the same p are merged
// exactly (SMAWK on their concave level sequences); the remaining distinct-p
// functions go through a balanced naive tree with per-level geometric
// rounding. Result (1-eps)-approximates min(direct convolution, B).
StepFn merge_profit_classes(const std::vector<UniformFn>& classes, i64 B,
                            const Rat& eps);

}  // namespace knap

#endif  // KNAPCORE_CONVOLUTION_HPP
