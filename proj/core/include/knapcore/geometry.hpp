#ifndef KNAPCORE_GEOMETRY_HPP
#define KNAPCORE_GEOMETRY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "knapcore/step_fn.hpp"

namespace knap {

struct Pt {
  i64 x = 0;
  i64 y = 0;
  friend bool operator==(const Pt&, const Pt&) = default;
};

// Ordered 2-D point set with x_i <= x_{i+1}, y_i <= y_{i+1} and
// x_{i+2} > x_i (at most two points per x). g[P](x) is the height of the
// upper boundary of the region R(P) under the segment chain, down-filled
// to y >= 0.
struct MonotonePointSet {
  std::vector<Pt> pts;
};

// Validates the monotone-point-set invariants and coordinate widths.
MonotonePointSet make_mps(std::vector<Pt> pts);

// Sign of the cross product (b-a) x (c-a); exact in 128-bit.
int orient(const Pt& a, const Pt& b, const Pt& c);

enum class PointLabel : std::uint8_t { kApex, kBase, kDegenerate };

struct Classification {
  std::vector<PointLabel> labels;      // one per point
  std::vector<std::uint8_t> type_seq;  // t_i over non-degenerate points
  i64 convex_number = 0;               // maximal constant runs of type_seq
};

// Endpoints are apexes; an interior point is an apex/base/degenerate when
// it lies above/below/on the chord of its neighbours.
Classification classify(const MonotonePointSet& p);

// The (2k-1)-point contour staircase of a k-step function.
MonotonePointSet contour_of(const StepFn& f);

// Lemma 4.8 stack scan: repeatedly applies Operation-3 steps (merge apex
// pairs with y-gap in (0, delta], dropping the points between them and any
// point that becomes degenerate). R(P) never shrinks; the result has
// convex number <= 2*ceil((max_y-min_y)/delta) + 3 and no degenerate
// points. O(|P|).
MonotonePointSet reduce(const MonotonePointSet& p, i64 delta);

// A maximal convex-hull slice [first, last] (inclusive, blocks share their
// boundary points) of a decomposed set.
struct Block {
  std::size_t first = 0;
  std::size_t last = 0;
  bool upper = false;  // upper convex hull; otherwise lower
};

// Observation 4.1: one block per maximal apex-run/base-run; block count
// equals the convex number. Input must have no degenerate points.
std::vector<Block> decompose(const MonotonePointSet& p);

// Exact Minkowski sum of two upper-convex chains by merging edge sequences
// in slope order. Collinear vertices produced by equal slopes are kept.
MonotonePointSet minkowski_upper_hulls(std::span<const Pt> a,
                                       std::span<const Pt> b);

// eta(y) = min_{y_f + y_g = y} phi(y_f) + gamma(y_g) for phi convex in the
// min sense (successive differences non-increasing) and gamma arbitrary
// non-decreasing. Candidate-stack with binary-searched takeover times
// within index windows of size |phi|-1, plus the adjacent-window sweep.
// O((X+Y) log X).
std::vector<Rat> convolve_lower_block(const std::vector<Rat>& phi,
                                      const std::vector<Rat>& gamma);

// Per-level minimal integer x over a span of sigma-levels:
// min_x[k - k_lo] = least integer x with g(x) >= k*sigma.
struct LevelMinima {
  i64 sigma = 1;
  i64 k_lo = 0;  // inclusive level indices (y = k*sigma)
  i64 k_hi = 0;
  std::vector<i64> min_x;
};

// Region samples of one block pair over its own level span. All point
// y-coordinates must be multiples of sigma. Dispatch: upper x upper goes
// through minkowski_upper_hulls and samples the sum chain; any pairing
// that involves a lower hull goes through convolve_lower_block on the
// phi/gamma level samplings.
LevelMinima block_sum(std::span<const Pt> a, bool a_upper,
                      std::span<const Pt> b, bool b_upper, i64 sigma);

// Per-level minima of g[Pa + Pb] (Minkowski) at every multiple of sigma in
// [min_y(Pa)+min_y(Pb), max_y(Pa)+max_y(Pb)], exact over the integer x
// domain: decomposes both sets, folds block_sum over every block pair and
// finishes with the downward min sweep.
LevelMinima combine_levels(const MonotonePointSet& a,
                           const MonotonePointSet& b, i64 sigma);

// sigma-accurate approximation of Pa + Pb as a staircase point set whose
// risers sit at the per-level minima. Inputs must have y-coordinates that
// are multiples of sigma.
MonotonePointSet combine(const MonotonePointSet& a, const MonotonePointSet& b,
                         i64 sigma);

// Per-level minima of a single set (no Minkowski involved).
LevelMinima sample_levels(const MonotonePointSet& p, i64 sigma);

// Step function x -> largest multiple of sigma <= g[P](x) over integer x.
StepFn g_sample(const MonotonePointSet& p, i64 sigma, const Rat& grain);

// Exact g[P](x) (nullopt left of the domain; for x past max_x the top
// value). g_value_left evaluates the left limit, i.e. excludes a vertical
// riser at x itself.
std::optional<Rat> g_value(const MonotonePointSet& p, i64 x);
std::optional<Rat> g_value_left(const MonotonePointSet& p, i64 x);

}  // namespace knap

#endif  // KNAPCORE_GEOMETRY_HPP
