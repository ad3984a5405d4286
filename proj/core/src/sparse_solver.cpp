#include "knapcore/sparse_solver.hpp"

#include <algorithm>

#include "knapcore/convolution.hpp"

namespace knap {

namespace {

// Leaf profile of one item: 0 below the weight, the profit from it on.
StepFn leaf_fn(const Item& it, const Rat& grain) {
  if (it.weight == 0) {
    return make_step_fn({{0, it.profit}}, grain);
  }
  return make_step_fn({{0, 0}, {it.weight, it.profit}}, grain);
}

// f(x) = min(M * (floor(g_sample(x)/M) + 1), cap) built straight from the
// per-level minima: a grid staircase that is >= the true g everywhere
// (the sigma-sampled value can sit up to sigma below g, and M = 2*sigma).
StepFn grid_round_up(const LevelMinima& lm, i64 m_grains, i64 cap_grains,
                     const Rat& grain) {
  std::vector<std::pair<i64, i64>> steps;
  steps.reserve(lm.min_x.size());
  for (size_t t = 0; t < lm.min_x.size(); ++t) {
    i64 k = lm.k_lo + static_cast<i64>(t);
    i64 g = checked_i64(i128(k) * lm.sigma, "grid y");
    i64 v = std::min(checked_i64((i128(floor_div(g, m_grains)) + 1) * m_grains,
                                 "grid v"),
                     cap_grains);
    i64 x = lm.min_x[t];
    if (!steps.empty() && steps.back().first == x) {
      steps.back().second = std::max(steps.back().second, v);
    } else if (steps.empty() || v > steps.back().second) {
      steps.emplace_back(x, v);
    }
  }
  return make_step_fn(std::move(steps), grain);
}

}  // namespace

MonotonePointSet level_merge(const MonotonePointSet& pa,
                             const MonotonePointSet& pb, i64 sigma,
                             i64 delta) {
  if (sigma <= 0 || delta <= 0) {
    throw std::invalid_argument("level_merge: parameters must be positive");
  }
  for (const auto* p : {&pa, &pb}) {
    for (const Pt& q : p->pts) {
      if (q.y % sigma != 0) {
        throw std::invalid_argument("level_merge: grid mismatch");
      }
    }
  }
  return combine(pa, pb, sigma);
}

StepFn solve_sparse(const std::vector<Item>& items, const Rat& eps,
                    SparseStats* stats) {
  if (eps <= 0 || eps > Rat(1, 2) || eps.numerator() != 1) {
    throw std::invalid_argument("solve_sparse: eps must be 1/k with k >= 2");
  }
  const i64 gu = eps.denominator();  // 1/eps
  const i64 n = static_cast<i64>(items.size());
  SparseStats local;
  SparseStats& st = stats ? *stats : local;
  st.n = n;
  if (n == 0) return zero_step_fn(eps);
  i128 sum_w = 0;
  for (const Item& it : items) {
    if (it.profit < gu || it.profit >= 2 * gu) {
      throw std::invalid_argument("solve_sparse: profit outside [1/eps, 2/eps)");
    }
    if (it.weight < 0) throw std::invalid_argument("negative weight");
    sum_w += it.weight;
  }
  const i64 total_w = checked_i64(sum_w, "sum of weights");
  st.oversize = n > 4 * gu;

  const int K = ilog2_ceil(n);
  const i64 n_pad = i64{1} << K;
  st.padded = n_pad;
  const int exact_levels = std::min(K, 3);
  const int i_star = K - exact_levels;  // level index entering geometry
  const i64 L = i_star;                 // number of geometry transitions
  st.exact_levels = exact_levels;
  st.geometry_levels = L;

  // Dyadic grain gamma0 = eps / 2^c. The per-level slack (reduce delta plus
  // the grid round-up) must fit 2L slots of n*eps; 2^{K-1} < n makes
  // c = i* + ceil(log2(2L)) - (K-1) sufficient.
  int c = 0;
  if (L > 0) {
    c = std::max(0, static_cast<int>(i_star) + ilog2_ceil(2 * L) - (K - 1));
  }
  const i64 unit = checked_i64(i128(gu) << c, "grain unit");  // grains per 1.0
  const Rat grain = eps / (i64{1} << c);

  // Leaves, padded with unreachable unit-profit items.
  std::vector<StepFn> funcs;
  funcs.reserve(n_pad);
  for (const Item& it : items) {
    funcs.push_back(leaf_fn({checked_i64(i128(it.profit) << c, "leaf profit"),
                             it.weight},
                            grain));
  }
  const Item pad{unit, total_w + 1};
  for (i64 j = n; j < n_pad; ++j) funcs.push_back(leaf_fn(pad, grain));

  // Exact top: plain convolutions, no error.
  for (int t = 0; t < exact_levels; ++t) {
    std::vector<StepFn> next;
    next.reserve(funcs.size() / 2);
    for (size_t j = 0; j + 1 < funcs.size(); j += 2) {
      next.push_back(maxplus_naive(funcs[j], funcs[j + 1]));
    }
    funcs = std::move(next);
  }

  // Geometry levels. delta is one budget slot (in gamma0 grains); the grid
  // at level `lev` is M = 2^{i*-lev} grains, so each level's round-up costs
  // 2^lev * M = 2^{i*} grains <= one slot as well.
  i64 slack_grains = 0;
  if (L > 0) {
    const i64 delta =
        std::max<i64>(1, floor_div(i128(n) << c, 2 * L));  // n*eps/(2L) in grains
    for (int lev = i_star - 1; lev >= 0; --lev) {
      const i64 m_grains = i64{1} << (i_star - lev);
      const i64 sigma = m_grains / 2;
      const i64 cap = checked_i64(i128(unit) << (K - lev + 1), "cap grains");
      std::vector<StepFn> next;
      next.reserve(funcs.size() / 2);
      for (size_t j = 0; j + 1 < funcs.size(); j += 2) {
        MonotonePointSet pa = reduce(contour_of(funcs[j]), delta);
        MonotonePointSet pb = reduce(contour_of(funcs[j + 1]), delta);
        MonotonePointSet q = level_merge(pa, pb, sigma, delta);
        next.push_back(grid_round_up(sample_levels(q, sigma), m_grains, cap, grain));
      }
      funcs = std::move(next);
      slack_grains = checked_i64(
          i128(slack_grains) + delta + (i64{1} << i_star), "slack");
    }
  }

  StepFn root = std::move(funcs.front());
  // The provable upper slack must stay within the n*eps contract.
  if (i128(slack_grains) > i128(n) << c) {
    throw std::logic_error("solve_sparse: slack exceeds the n*eps budget");
  }
  st.slack_subtracted = Rat(slack_grains) * grain;
  root = shift_values_clipped(root, -slack_grains);
  // Drop the padded tail: the true function is constant past the real
  // total weight, and padded items only show up beyond it.
  std::vector<std::pair<i64, i64>> steps;
  for (const auto& [x, y] : root.steps) {
    if (x > total_w) break;
    steps.emplace_back(x, y);
  }
  return make_step_fn(std::move(steps), grain, /*right_extended=*/true, total_w);
}

}  // namespace knap
