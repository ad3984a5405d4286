#ifndef KNAPCORE_ORACLES_HPP
#define KNAPCORE_ORACLES_HPP

#include <optional>

#include "knapcore/geometry.hpp"
#include "knapcore/instance.hpp"
#include "knapcore/step_fn.hpp"

namespace knap {

// Reference implementations used to validate the production algorithms.
// They share no code with the paths they check: plain dynamic programs,
// split enumeration and translated-chain envelopes.

// Exact optimum by DP over the cheaper of the weight/profit axes.
// Refuses (nullopt) when n*min(W, sum p) exceeds the desk-scale guard of
// 1e8 on both axes.
std::optional<i64> exact_dp(const Instance& inst);

// Exact f_I as a step function, by min-weight-per-profit DP. Refuses when
// n > 32 and the profit-grain sum exceeds 1e6.
std::optional<StepFn> exact_profit_fn(const std::vector<Item>& items,
                                      const Rat& grain);

// Brute-force (max,+)-convolution of sequences over all index splits;
// nullopt entries are -infinity.
std::vector<Val> brute_maxplus_seq(const std::vector<Val>& a,
                                   const std::vector<Val>& b);

// Brute-force (min,+)-convolution over all splits, exact rationals.
std::vector<Rat> brute_minplus_seq(const std::vector<Rat>& a,
                                   const std::vector<Rat>& b);

// Rational-coordinate monotone point sets. The true Minkowski sum of two
// integer point sets generally has rational vertices (a translated chord
// crossing a translated riser), so the exact reference machinery for the
// F-generatability invariants lives on rationals. Production point sets
// stay integral; only these oracles leave the integer grid.
struct RatPt {
  Rat x{0};
  Rat y{0};
  friend bool operator==(const RatPt&, const RatPt&) = default;
};

struct RatMps {
  std::vector<RatPt> pts;
};

RatMps to_rat(const MonotonePointSet& p);

// Sign of the cross product (b-a) x (c-a), exact.
int orient_r(const RatPt& a, const RatPt& b, const RatPt& c);

std::vector<PointLabel> classify_r(const RatMps& p);
i64 convex_number_r(const RatMps& p);

// g[P](x) and its left limit; the top value past max_x.
std::optional<Rat> g_value_r(const RatMps& p, const Rat& x);
std::optional<Rat> g_value_left_r(const RatMps& p, const Rat& x);

// True Minkowski sum: the minimal set V with R(V) = R(A) + R(B), via the
// upper envelope of the |A|+|B| translated chains. Small inputs only.
RatMps minkowski_sum_exact(const RatMps& a, const RatMps& b);

// Test-side port of reduce (Lemma 4.8) over rational coordinates.
RatMps reduce_r(const RatMps& p, i64 delta);

// Rasterization oracle for combine: per-level minima of R(A)+R(B) obtained
// by enumerating all segment-pair sums of E(A) x E(B) (plus point
// translations for one-point sets) and taking per-level minima, snapped to
// the integer x domain. Independent of the block decomposition path.
LevelMinima raster_minkowski_levels(const MonotonePointSet& a,
                                    const MonotonePointSet& b, i64 sigma);

}  // namespace knap

#endif  // KNAPCORE_ORACLES_HPP
