#ifndef KNAPCORE_STEP_FN_HPP
#define KNAPCORE_STEP_FN_HPP

#include <optional>
#include <utility>
#include <vector>

#include "knapcore/numeric.hpp"

namespace knap {

// Monotone non-decreasing step function on [x_lo, x_hi], stored as the
// ordered list of its steps. Values are integer counts of `grain`; the
// function is y_i on [x_i, x_{i+1}) and y_last on [x_last, x_hi]. Left of
// x_lo the value is -infinity (an explicit sentinel, never a large
// negative number). When `right_extended` is set the last value also holds
// for every x > x_hi.
//
// Canonical form: x strictly increasing, y strictly increasing (one step
// per distinct value), so steps.size() is the complexity.
struct StepFn {
  std::vector<std::pair<i64, i64>> steps;  // (x, y in grains)
  Rat grain{1};
  i64 x_hi = 0;
  bool right_extended = true;
};

// Value type of evaluations: nullopt encodes -infinity.
using Val = std::optional<i64>;

// Normalizes (sorts nothing; input must be x-ascending) and validates:
// drops later steps that do not increase the value, rejects decreasing y
// or duplicate x, checks coordinate widths.
StepFn make_step_fn(std::vector<std::pair<i64, i64>> steps, Rat grain,
                    bool right_extended = true,
                    std::optional<i64> x_hi = std::nullopt);

// Constant zero on [0, +inf).
StepFn zero_step_fn(Rat grain);

// Throws unless the canonical-form invariants hold.
void validate(const StepFn& f);

i64 complexity(const StepFn& f);

// f(x); -infinity left of the domain, last value beyond x_hi only if
// right-extended.
Val eval(const StepFn& f, i64 x);

// Re-expresses f in a finer grain; new_grain must divide f.grain exactly.
StepFn with_grain(const StepFn& f, const Rat& new_grain);

// min(f, cap) with cap in grains: values above cap collapse onto one step.
StepFn cap_values(const StepFn& f, i64 cap);

// Adds `delta` grains to every value (delta may be negative; values are
// clipped below at 0, standard when converting a subtractive approximation
// into an additive one).
StepFn shift_values_clipped(const StepFn& f, i64 delta);

// Rounds positive values down onto an integer geometric grid with ratio
// 1/(1-eps): representatives r_0 = A (least positive value), r_{t+1} =
// max(r_t + 1, floor(r_t / (1-eps))). Guarantees f~ <= f <= f~/(1-eps)
// pointwise and complexity O(eps^-1 log(B/A)). Zero values are preserved.
StepFn round_down_geometric(const StepFn& f, const Rat& eps);

// Rounds every value up to the nearest multiple of sigma. sigma is given
// in the same units as f.grain scales and must be a positive integer
// multiple of it.
StepFn round_up_grid(const StepFn& f, const Rat& sigma);

// Same, with sigma already expressed as a grain count.
StepFn round_up_grid_grains(const StepFn& f, i64 sigma_grains);

// Pointwise maximum. Empty input yields the constant-0 function on [0,inf).
StepFn pointwise_max(const std::vector<StepFn>& fs);

// True iff ft <= f everywhere and ft >= (1-delta)*f - Delta wherever
// f <= t ( with t, Delta in grains; t = nullopt means +infinity). Checked
// exactly at the union of step x-coordinates, which is sufficient for step
// functions. Throws on mismatched grains or left domain ends.
bool verify_approx(const StepFn& ft, const StepFn& f, const Rat& delta,
                   i64 Delta, std::optional<i64> t);

}  // namespace knap

#endif  // KNAPCORE_STEP_FN_HPP
