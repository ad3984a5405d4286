#ifndef KNAPCORE_PIPELINE_HPP
#define KNAPCORE_PIPELINE_HPP

#include <cstddef>
#include <vector>

#include "knapcore/instance.hpp"
#include "knapcore/step_fn.hpp"

namespace knap {

// Items ordered by non-increasing unit profit p_i/w_i (exact cross-product
// comparisons; ties by smaller weight, then input index). Profits count
// eps-grains of the surrounding band.
struct SortedItems {
  std::vector<Item> items;
};

SortedItems sort_by_unit_profit(std::vector<Item> items);

// Parameters of Problem 4.1 (recursive capped approximation).
struct CapParams {
  i64 m = 1;            // band parameter, 1 <= B <= 2m
  i64 cap_grains = 0;   // B in grains
  int depth = 0;        // remaining recursion budget k
  Rat c_exchange{1};    // greedy-exchange constant c >= 1
};

struct DiversityResult {
  i64 d = 0;                        // D(i): distinct profits left
  std::vector<std::size_t> removed; // the minimizer J (indices into items)
};

// D(i) over the prefix [0, i): repeatedly delete the whole profit class of
// least multiplicity while at most 2m items have been deleted.
DiversityResult diversity_prefix(const SortedItems& s, std::size_t i, i64 m);

// Largest i with D(i) <= threshold (binary search; D is non-decreasing and
// D(1) = 0).
std::size_t find_i_delta(const SortedItems& s, i64 threshold, i64 m);

// Problem 4.1: f~ <= f_I with f~ >= f_I - C*k*m*eps wherever f_I <= B
// (C = 8). eps must be a unit fraction and profits count eps-grains.
StepFn solve_capped(const SortedItems& s, const CapParams& params,
                    const Rat& eps);

// Lemma 4.2 wrapper: (m*eps)-additive approximation of f_I up to 2m, by
// running solve_capped at depth ceil(log2 log2 (2m)) + 3 with eps shrunk by
// the 8k error factor.
StepFn solve_additive(const SortedItems& s, i64 m, const Rat& eps,
                      const Rat& c_exchange = Rat(1));

// Lemma 3.5 band decomposition: (1-eps)-multiplicative approximation of
// f_I up to 2/eps for items in probknap normal form (profits multiples of
// eps in [1,2), i.e. profit grains in [1/eps, 2/eps)).
StepFn core_band_solver(const std::vector<Item>& items, const Rat& eps,
                        const Rat& c_exchange = Rat(1));

// Greedy prefix profile in efficiency order; feasible everywhere, within
// additive max_i p_i <= 2 units of f_I.
StepFn greedy_profile(const SortedItems& s, const Rat& grain);

struct FptasConfig {
  Rat c_exchange{1};
};

// Theorem 1.1 end to end: (1-eps)*OPT <= SOL <= OPT.
ApproxReport knapsack_fptas(const Instance& inst, const Rat& eps,
                            const FptasConfig& config = {});

}  // namespace knap

#endif  // KNAPCORE_PIPELINE_HPP
