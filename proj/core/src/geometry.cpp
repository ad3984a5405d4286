#include "knapcore/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace knap {

namespace {
constexpr i64 kNoX = std::numeric_limits<i64>::max();
}

MonotonePointSet make_mps(std::vector<Pt> pts) {
  if (pts.empty()) throw std::invalid_argument("empty point set");
  for (const Pt& p : pts) {
    check_width(p.x, "point x");
    check_width(p.y, "point y");
  }
  for (size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].x < pts[i - 1].x || pts[i].y < pts[i - 1].y) {
      throw std::invalid_argument("points not monotone");
    }
    if (pts[i] == pts[i - 1]) throw std::invalid_argument("duplicate point");
  }
  for (size_t i = 2; i < pts.size(); ++i) {
    if (pts[i].x <= pts[i - 2].x) {
      throw std::invalid_argument("three points share an x");
    }
  }
  return MonotonePointSet{std::move(pts)};
}

int orient(const Pt& a, const Pt& b, const Pt& c) {
  i128 cr = i128(b.x - a.x) * (c.y - a.y) - i128(b.y - a.y) * (c.x - a.x);
  return (cr > 0) - (cr < 0);
}

Classification classify(const MonotonePointSet& p) {
  const auto& pts = p.pts;
  Classification out;
  out.labels.resize(pts.size(), PointLabel::kApex);
  for (size_t i = 1; i + 1 < pts.size(); ++i) {
    int o = orient(pts[i - 1], pts[i + 1], pts[i]);
    out.labels[i] = o > 0   ? PointLabel::kApex
                    : o < 0 ? PointLabel::kBase
                            : PointLabel::kDegenerate;
  }
  for (PointLabel l : out.labels) {
    if (l == PointLabel::kDegenerate) continue;
    out.type_seq.push_back(l == PointLabel::kApex ? 1 : 0);
  }
  for (size_t i = 0; i < out.type_seq.size(); ++i) {
    if (i == 0 || out.type_seq[i] != out.type_seq[i - 1]) ++out.convex_number;
  }
  return out;
}

MonotonePointSet contour_of(const StepFn& f) {
  validate(f);
  std::vector<Pt> pts;
  pts.reserve(2 * f.steps.size() - 1);
  pts.push_back({f.steps[0].first, f.steps[0].second});
  for (size_t i = 1; i < f.steps.size(); ++i) {
    pts.push_back({f.steps[i].first, f.steps[i - 1].second});
    pts.push_back({f.steps[i].first, f.steps[i].second});
  }
  return make_mps(std::move(pts));
}

MonotonePointSet reduce(const MonotonePointSet& p, i64 delta) {
  if (delta <= 0) throw std::invalid_argument("reduce: delta must be positive");
  const auto& pts = p.pts;
  const size_t n = pts.size();
  if (n <= 2) return p;
  Classification cls = classify(p);
  for (PointLabel l : cls.labels) {
    if (l == PointLabel::kDegenerate) {
      throw std::invalid_argument("reduce: input has degenerate points");
    }
  }
  constexpr size_t kNone = std::numeric_limits<size_t>::max();
  std::vector<size_t> prev(n), next(n);
  std::vector<char> alive(n, 1);
  for (size_t i = 0; i < n; ++i) {
    prev[i] = (i == 0) ? kNone : i - 1;
    next[i] = (i + 1 == n) ? kNone : i + 1;
  }
  std::vector<size_t> stack;
  // Scan the apexes of P in order; the stack holds the surviving apexes of
  // the processed prefix. An Operation-3 step merges the stack top with the
  // new apex when their y-gap is in (0, delta], removing everything
  // strictly between and re-examining the top, which may turn degenerate
  // (dropped) or into a base (kept, popped).
  for (size_t x = 0; x < n; ++x) {
    if (cls.labels[x] != PointLabel::kApex) continue;
    while (!stack.empty()) {
      size_t y = stack.back();
      i64 gap = pts[x].y - pts[y].y;
      if (gap > delta || gap == 0) break;
      for (size_t j = next[y]; j != x;) {
        size_t nj = next[j];
        alive[j] = 0;
        j = nj;
      }
      next[y] = x;
      prev[x] = y;
      if (prev[y] == kNone) break;  // first point: endpoint apex by definition
      int o = orient(pts[prev[y]], pts[x], pts[y]);
      if (o > 0) break;  // y still an apex
      stack.pop_back();
      if (o == 0) {  // degenerate: drop y from P'
        alive[y] = 0;
        next[prev[y]] = x;
        prev[x] = prev[y];
      }
      // o < 0: y became a base; it stays in P' but leaves the stack.
    }
    stack.push_back(x);
  }
  std::vector<Pt> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (alive[i]) out.push_back(pts[i]);
  }
  return make_mps(std::move(out));
}

std::vector<Block> decompose(const MonotonePointSet& p) {
  Classification cls = classify(p);
  const size_t n = p.pts.size();
  if (n == 1) return {Block{0, 0, true}};
  for (PointLabel l : cls.labels) {
    if (l == PointLabel::kDegenerate) {
      throw std::invalid_argument("decompose: degenerate point");
    }
  }
  // cls.type_seq aligns with point indices here (no degenerates).
  std::vector<size_t> starts{0};
  for (size_t i = 1; i < n; ++i) {
    if (cls.type_seq[i] != cls.type_seq[i - 1]) starts.push_back(i);
  }
  std::vector<Block> blocks;
  blocks.reserve(starts.size());
  for (size_t b = 0; b < starts.size(); ++b) {
    size_t first = starts[b];
    // Blocks share boundary points; the final one may be a single point
    // when the last run starts at the last index.
    size_t last = (b + 1 < starts.size()) ? starts[b + 1] : n - 1;
    blocks.push_back(Block{first, last, cls.type_seq[first] == 1});
  }
  return blocks;
}

MonotonePointSet minkowski_upper_hulls(std::span<const Pt> a,
                                       std::span<const Pt> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty hull");
  struct Edge {
    i64 dx, dy;
  };
  auto edges_of = [](std::span<const Pt> c) {
    std::vector<Edge> es;
    es.reserve(c.size());
    for (size_t i = 1; i < c.size(); ++i) {
      es.push_back({c[i].x - c[i - 1].x, c[i].y - c[i - 1].y});
    }
    return es;
  };
  auto ea = edges_of(a), eb = edges_of(b);
  // Steeper slope first; std::merge is stable, so A's edges precede B's on
  // ties, which keeps the output deterministic.
  auto steeper = [](const Edge& l, const Edge& r) {
    return i128(l.dy) * r.dx > i128(r.dy) * l.dx;
  };
  std::vector<Edge> merged(ea.size() + eb.size());
  std::merge(ea.begin(), ea.end(), eb.begin(), eb.end(), merged.begin(), steeper);
  std::vector<Pt> pts;
  pts.reserve(merged.size() + 1);
  pts.push_back({a.front().x + b.front().x, a.front().y + b.front().y});
  for (const Edge& e : merged) {
    // Consecutive verticals (one from each input) collapse into one riser;
    // three points on an x would break the point-set representation.
    if (e.dx == 0 && pts.size() >= 2 && pts[pts.size() - 2].x == pts.back().x) {
      pts.back().y = checked_i64(i128(pts.back().y) + e.dy, "minkowski y");
      continue;
    }
    pts.push_back({checked_i64(i128(pts.back().x) + e.dx, "minkowski x"),
                   checked_i64(i128(pts.back().y) + e.dy, "minkowski y")});
  }
  return make_mps(std::move(pts));
}

namespace {

// ---- candidate-stack (min,+) convolution -------------------------------

struct ConvCtx {
  const std::vector<Rat>& phi;
  const std::vector<Rat>& gamma;
  Rat val(i64 y, i64 c) const { return phi[y - c] + gamma[c]; }
};

// Smallest y in [lo, hi) with val(y, c_old) <= val(y, c_new); hi if none.
// c_old < c_new; the advantage of c_old over c_new is monotone in y.
i64 takeover_asc(const ConvCtx& ctx, i64 c_old, i64 c_new, i64 lo, i64 hi) {
  if (lo >= hi) return hi;
  if (!(ctx.val(hi - 1, c_old) <= ctx.val(hi - 1, c_new))) return hi;
  i64 a = lo, b = hi - 1;  // predicate true at b
  while (a < b) {
    i64 mid = a + (b - a) / 2;
    if (ctx.val(mid, c_old) <= ctx.val(mid, c_new)) {
      b = mid;
    } else {
      a = mid + 1;
    }
  }
  return a;
}

// Largest y in [lo, hi] with val(y, c_old) < val(y, c_new); lo-1 if none.
// c_old > c_new; c_old's advantage grows as y decreases.
i64 takeover_desc(const ConvCtx& ctx, i64 c_old, i64 c_new, i64 lo, i64 hi) {
  if (lo > hi) return lo - 1;
  if (!(ctx.val(lo, c_old) < ctx.val(lo, c_new))) return lo - 1;
  i64 a = lo, b = hi;  // predicate true at a
  while (a < b) {
    i64 mid = a + (b - a + 1) / 2;
    if (ctx.val(mid, c_old) < ctx.val(mid, c_new)) {
      a = mid;
    } else {
      b = mid - 1;
    }
  }
  return a;
}

void update_min(std::vector<std::optional<Rat>>& eta, i64 y, const Rat& v) {
  if (!eta[y] || v < *eta[y]) eta[y] = v;
}

}  // namespace

std::vector<Rat> convolve_lower_block(const std::vector<Rat>& phi,
                                      const std::vector<Rat>& gamma) {
  const i64 X = static_cast<i64>(phi.size());
  const i64 Y = static_cast<i64>(gamma.size());
  if (X == 0 || Y == 0) throw std::invalid_argument("convolve: empty input");
  for (i64 i = 2; i < X; ++i) {
    if (phi[i] - phi[i - 1] > phi[i - 1] - phi[i - 2]) {
      throw std::invalid_argument("convolve: phi violates the difference condition");
    }
  }
  const i64 total = X + Y - 1;
  std::vector<Rat> out(total);
  if (X == 1) {
    for (i64 y = 0; y < total; ++y) out[y] = phi[0] + gamma[y];
    return out;
  }
  if (Y == 1) {
    for (i64 y = 0; y < total; ++y) out[y] = phi[y] + gamma[0];
    return out;
  }
  ConvCtx ctx{phi, gamma};
  std::vector<std::optional<Rat>> eta(total);
  const i64 w = X - 1;

  std::vector<i64> cand, ts;
  // Same-window pass: y ascending, candidates in the same window.
  for (i64 wk = 0; wk * w < total; ++wk) {
    const i64 y_lo = wk * w;
    const i64 y_hi = std::min((wk + 1) * w, total);
    cand.clear();
    ts.clear();
    for (i64 y = y_lo; y < y_hi; ++y) {
      if (y < Y) {
        // push candidate c = y
        while (!cand.empty()) {
          i64 t = takeover_asc(ctx, cand.back(), y, y, y_hi);
          bool old_dead = (t == y_hi) || (cand.size() >= 2 && t >= ts.back());
          if (old_dead) {
            cand.pop_back();
            if (!ts.empty()) ts.pop_back();
            continue;
          }
          if (t <= y) {
            // the old top already dominates the new candidate for good
            goto pushed;
          }
          cand.push_back(y);
          ts.push_back(t);
          goto pushed;
        }
        cand.push_back(y);
      pushed:;
      }
      if (!cand.empty()) {
        while (cand.size() >= 2 && ts.back() <= y) {
          cand.pop_back();
          ts.pop_back();
        }
        update_min(eta, y, ctx.val(y, cand.back()));
      }
    }
  }

  // Adjacent-window sweep: candidates one window back, y descending.
  for (i64 wk = 1; (wk - 1) * w < std::min<i64>(Y, total); ++wk) {
    const i64 y0 = wk * w;
    cand.clear();
    ts.clear();
    for (i64 i = w - 1; i >= 0; --i) {
      i64 c = y0 - w + i;
      i64 y = y0 + i;
      if (c >= 0 && c < Y) {
        // push candidate; battles live on y in [y0, y] (validity window)
        while (!cand.empty()) {
          i64 t = takeover_desc(ctx, cand.back(), c, y0, y);
          bool old_dead = (t < y0) || (cand.size() >= 2 && t <= ts.back());
          if (old_dead) {
            cand.pop_back();
            if (!ts.empty()) ts.pop_back();
            continue;
          }
          if (t >= y) {
            goto pushed2;
          }
          cand.push_back(c);
          ts.push_back(t);
          goto pushed2;
        }
        cand.push_back(c);
      pushed2:;
      }
      if (y < total && !cand.empty()) {
        while (cand.size() >= 2 && ts.back() >= y) {
          cand.pop_back();
          ts.pop_back();
        }
        update_min(eta, y, ctx.val(y, cand.back()));
      }
    }
  }

  for (i64 y = 0; y < total; ++y) {
    assert(eta[y].has_value());
    out[y] = *eta[y];
  }
  return out;
}

namespace {

// Minimal x per integer level k (y = k) of a monotone chain whose
// y-coordinates are already rescaled to level units. Exact rationals.
std::vector<Rat> sample_chain_levels(std::span<const Pt> chain, i64 k_lo,
                                     i64 k_hi) {
  std::vector<Rat> out;
  out.reserve(k_hi - k_lo + 1);
  size_t e = 0;  // edge index: edge from chain[e] to chain[e+1]
  for (i64 k = k_lo; k <= k_hi; ++k) {
    if (k <= chain.front().y) {
      out.emplace_back(chain.front().x);
      continue;
    }
    while (e + 1 < chain.size() && chain[e + 1].y < k) ++e;
    // chain[e].y < k <= chain[e+1].y
    const Pt& p = chain[e];
    const Pt& q = chain[e + 1];
    if (q.x == p.x) {
      out.emplace_back(p.x);
    } else {
      // x = p.x + (k - p.y) * dx / dy, exact
      i64 num = checked_i64(i128(k - p.y) * (q.x - p.x), "level crossing");
      out.push_back(Rat(p.x) + Rat(num, q.y - p.y));
    }
  }
  return out;
}

i64 ceil_rat(const Rat& r) { return ceil_div(r.numerator(), r.denominator()); }

std::vector<Pt> rescale_y(std::span<const Pt> pts, i64 sigma) {
  std::vector<Pt> out(pts.begin(), pts.end());
  for (Pt& p : out) {
    if (p.y % sigma != 0) {
      throw std::invalid_argument("y-coordinate not a multiple of sigma");
    }
    p.y /= sigma;
  }
  return out;
}

LevelMinima block_sum_scaled(std::span<const Pt> a, bool a_upper,
                             std::span<const Pt> b, bool b_upper,
                             const std::vector<Rat>* sa,
                             const std::vector<Rat>* sb) {
  // All y's here are in level units (sigma == 1).
  LevelMinima out;
  out.sigma = 1;
  out.k_lo = a.front().y + b.front().y;
  out.k_hi = a.back().y + b.back().y;
  const i64 span = out.k_hi - out.k_lo;
  out.min_x.resize(span + 1);
  if (a.size() == 1 && b.size() == 1) {
    out.min_x[0] = a.front().x + b.front().x;
    return out;
  }
  if (a_upper && b_upper) {
    MonotonePointSet sum = minkowski_upper_hulls(a, b);
    auto xs = sample_chain_levels(sum.pts, out.k_lo, out.k_hi);
    for (i64 j = 0; j <= span; ++j) out.min_x[j] = ceil_rat(xs[j]);
    return out;
  }
  // A pairing that involves a lower hull: phi is the lower-hull side.
  std::vector<Rat> local_a, local_b;
  const std::vector<Rat>& va =
      sa ? *sa : (local_a = sample_chain_levels(a, a.front().y, a.back().y));
  const std::vector<Rat>& vb =
      sb ? *sb : (local_b = sample_chain_levels(b, b.front().y, b.back().y));
  const bool phi_is_a = !a_upper;
  const std::vector<Rat>& phi = phi_is_a ? va : vb;
  const std::vector<Rat>& gamma = phi_is_a ? vb : va;
  auto eta = convolve_lower_block(phi, gamma);
  for (i64 j = 0; j <= span; ++j) out.min_x[j] = ceil_rat(eta[j]);
  return out;
}

}  // namespace

LevelMinima block_sum(std::span<const Pt> a, bool a_upper,
                      std::span<const Pt> b, bool b_upper, i64 sigma) {
  if (sigma <= 0) throw std::invalid_argument("sigma must be positive");
  auto as = rescale_y(a, sigma);
  auto bs = rescale_y(b, sigma);
  LevelMinima lm = block_sum_scaled(as, a_upper, bs, b_upper, nullptr, nullptr);
  lm.sigma = sigma;
  return lm;
}

LevelMinima combine_levels(const MonotonePointSet& a, const MonotonePointSet& b,
                           i64 sigma) {
  if (sigma <= 0) throw std::invalid_argument("sigma must be positive");
  auto as = rescale_y(a.pts, sigma);
  auto bs = rescale_y(b.pts, sigma);
  MonotonePointSet sa{as}, sb{bs};
  auto blocks_a = decompose(sa);
  auto blocks_b = decompose(sb);
  auto chain = [](const std::vector<Pt>& pts, const Block& blk) {
    return std::span<const Pt>(pts.data() + blk.first, blk.last - blk.first + 1);
  };
  // Level samplings are reused across all pairs a block participates in.
  auto samples_for = [&](const std::vector<Pt>& pts,
                         const std::vector<Block>& blocks) {
    std::vector<std::vector<Rat>> s(blocks.size());
    for (size_t i = 0; i < blocks.size(); ++i) {
      auto c = chain(pts, blocks[i]);
      s[i] = sample_chain_levels(c, c.front().y, c.back().y);
    }
    return s;
  };
  auto samp_a = samples_for(as, blocks_a);
  auto samp_b = samples_for(bs, blocks_b);

  LevelMinima out;
  out.sigma = sigma;
  out.k_lo = as.front().y + bs.front().y;
  out.k_hi = as.back().y + bs.back().y;
  out.min_x.assign(out.k_hi - out.k_lo + 1, kNoX);
  for (size_t i = 0; i < blocks_a.size(); ++i) {
    for (size_t j = 0; j < blocks_b.size(); ++j) {
      LevelMinima part =
          block_sum_scaled(chain(as, blocks_a[i]), blocks_a[i].upper,
                           chain(bs, blocks_b[j]), blocks_b[j].upper,
                           &samp_a[i], &samp_b[j]);
      for (size_t t = 0; t < part.min_x.size(); ++t) {
        i64 idx = part.k_lo + static_cast<i64>(t) - out.k_lo;
        out.min_x[idx] = std::min(out.min_x[idx], part.min_x[t]);
      }
    }
  }
  // The region below any reachable point is reachable (regions are
  // down-filled), so minima propagate downward.
  for (i64 idx = static_cast<i64>(out.min_x.size()) - 2; idx >= 0; --idx) {
    out.min_x[idx] = std::min(out.min_x[idx], out.min_x[idx + 1]);
  }
  for (i64 v : out.min_x) {
    if (v == kNoX) throw std::logic_error("combine_levels: uncovered level");
  }
  return out;
}

namespace {

MonotonePointSet staircase_from_levels(const LevelMinima& lm) {
  std::vector<Pt> pts;
  pts.reserve(2 * lm.min_x.size());
  for (size_t t = 0; t < lm.min_x.size(); ++t) {
    i64 y = checked_i64(i128(lm.k_lo + static_cast<i64>(t)) * lm.sigma,
                        "staircase y");
    i64 x = lm.min_x[t];
    if (pts.empty()) {
      pts.push_back({x, y});
    } else if (x == pts.back().x) {
      if (pts.size() >= 2 && pts[pts.size() - 2].x == x) {
        pts.back().y = y;  // extend the existing riser upward
      } else {
        pts.push_back({x, y});  // riser pair; keeps min_y at the base level
      }
    } else {
      pts.push_back({x, pts.back().y});
      pts.push_back({x, y});
    }
  }
  return make_mps(std::move(pts));
}

}  // namespace

MonotonePointSet combine(const MonotonePointSet& a, const MonotonePointSet& b,
                         i64 sigma) {
  return staircase_from_levels(combine_levels(a, b, sigma));
}

LevelMinima sample_levels(const MonotonePointSet& p, i64 sigma) {
  if (sigma <= 0) throw std::invalid_argument("sigma must be positive");
  LevelMinima out;
  out.sigma = sigma;
  out.k_lo = floor_div(p.pts.front().y, sigma);
  out.k_hi = floor_div(p.pts.back().y, sigma);
  out.min_x.reserve(out.k_hi - out.k_lo + 1);
  size_t e = 0;
  const auto& pts = p.pts;
  for (i64 k = out.k_lo; k <= out.k_hi; ++k) {
    i128 target = i128(k) * sigma;
    if (target <= pts.front().y) {
      out.min_x.push_back(pts.front().x);
      continue;
    }
    while (e + 1 < pts.size() && pts[e + 1].y < target) ++e;
    const Pt& u = pts[e];
    const Pt& v = pts[e + 1];
    if (v.x == u.x) {
      out.min_x.push_back(u.x);
    } else {
      // ceil(u.x + (target - u.y) * dx / dy)
      i128 num = (target - u.y) * (v.x - u.x);
      out.min_x.push_back(
          checked_i64(u.x + ceil_div(num, v.y - u.y), "sample x"));
    }
  }
  return out;
}

StepFn g_sample(const MonotonePointSet& p, i64 sigma, const Rat& grain) {
  LevelMinima lm = sample_levels(p, sigma);
  std::vector<std::pair<i64, i64>> steps;
  steps.reserve(lm.min_x.size());
  for (size_t t = 0; t < lm.min_x.size(); ++t) {
    i64 y = checked_i64(i128(lm.k_lo + static_cast<i64>(t)) * sigma, "g_sample y");
    i64 x = lm.min_x[t];
    if (!steps.empty() && steps.back().first == x) {
      steps.back().second = y;
    } else {
      steps.emplace_back(x, y);
    }
  }
  return make_step_fn(std::move(steps), grain);
}

std::optional<Rat> g_value(const MonotonePointSet& p, i64 x) {
  const auto& pts = p.pts;
  if (x < pts.front().x) return std::nullopt;
  if (x >= pts.back().x) return Rat(pts.back().y);
  // last index with pts[i].x <= x (top of a riser at x, if any)
  auto it = std::upper_bound(pts.begin(), pts.end(), x,
                             [](i64 v, const Pt& q) { return v < q.x; });
  size_t i = static_cast<size_t>(it - pts.begin()) - 1;
  if (pts[i].x == x) return Rat(pts[i].y);
  const Pt& u = pts[i];
  const Pt& v = pts[i + 1];
  i64 num = checked_i64(i128(x - u.x) * (v.y - u.y), "g_value");
  return Rat(u.y) + Rat(num, v.x - u.x);
}

std::optional<Rat> g_value_left(const MonotonePointSet& p, i64 x) {
  const auto& pts = p.pts;
  if (x < pts.front().x) return std::nullopt;
  // first index with pts[i].x >= x (bottom of a riser at x, if any)
  auto it = std::lower_bound(pts.begin(), pts.end(), x,
                             [](const Pt& q, i64 v) { return q.x < v; });
  if (it != pts.end() && it->x == x) return Rat(it->y);
  return g_value(p, x);
}

}  // namespace knap
