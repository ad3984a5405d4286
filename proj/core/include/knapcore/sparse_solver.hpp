#ifndef KNAPCORE_SPARSE_SOLVER_HPP
#define KNAPCORE_SPARSE_SOLVER_HPP

#include "knapcore/geometry.hpp"
#include "knapcore/instance.hpp"
#include "knapcore/step_fn.hpp"

namespace knap {

struct SparseStats {
  i64 n = 0;                 // real item count
  i64 padded = 0;            // 2^K after padding
  i64 exact_levels = 0;      // top tree levels merged exactly
  i64 geometry_levels = 0;   // transitions run through reduce/combine
  Rat slack_subtracted{0};   // upper slack removed at the root, in units
  bool oversize = false;     // n exceeded the O(1/eps) regime (time bound
                             // void, correctness unaffected)
};

// Problem 3.1: items with profits that are multiples of eps in [1,2)
// (profit field counts eps-grains, i.e. lies in [1/eps, 2/eps)), weights
// non-negative integers. Returns f~ with f_I(x) - n*eps <= f~(x) <= f_I(x)
// for all x >= 0.
//
// Binary merge tree over monotone point sets: small subtrees are convolved
// exactly; each remaining level reduces every child set with a fixed delta
// and combines pairs sigma-accurately on a dyadic grid schedule whose
// total provable slack stays below n*eps. The slack actually accumulated
// is subtracted once at the root.
StepFn solve_sparse(const std::vector<Item>& items, const Rat& eps,
                    SparseStats* stats = nullptr);

// One pair merge of the level loop: sigma-accurate approximation of
// Pa + Pb. Inputs must already be reduce-d with parameter delta and carry
// y-coordinates on the sigma grid (grid mismatch throws).
MonotonePointSet level_merge(const MonotonePointSet& pa,
                             const MonotonePointSet& pb, i64 sigma, i64 delta);

}  // namespace knap

#endif  // KNAPCORE_SPARSE_SOLVER_HPP
