#include "knapcore/oracles.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace knap {

namespace {
constexpr i64 kInfW = std::numeric_limits<i64>::max() / 4;
constexpr i64 kDeskGuard = 100'000'000;
}  // namespace

std::optional<i64> exact_dp(const Instance& inst) {
  check_instance(inst);
  const i64 n = static_cast<i64>(inst.items.size());
  if (n == 0 || inst.capacity <= 0) {
    i64 base = 0;
    for (const Item& it : inst.items) {
      if (it.weight == 0) base += it.profit;
    }
    return base;
  }
  i128 sum_p = 0;
  for (const Item& it : inst.items) sum_p += it.profit;
  const bool weight_ok = i128(n) * inst.capacity <= kDeskGuard;
  const bool profit_ok = i128(n) * sum_p <= kDeskGuard;
  if (!weight_ok && !profit_ok) return std::nullopt;
  if (weight_ok && (!profit_ok || inst.capacity <= sum_p)) {
    // DP over the weight axis: best[w] = max profit within capacity w.
    std::vector<i64> best(inst.capacity + 1, 0);
    for (const Item& it : inst.items) {
      if (it.weight > inst.capacity) continue;
      for (i64 w = inst.capacity; w >= it.weight; --w) {
        best[w] = std::max(best[w], best[w - it.weight] + it.profit);
      }
    }
    return best[inst.capacity];
  }
  // DP over the profit axis: minw[t] = least weight achieving profit t.
  const i64 total = static_cast<i64>(sum_p);
  std::vector<i64> minw(total + 1, kInfW);
  minw[0] = 0;
  for (const Item& it : inst.items) {
    for (i64 t = total; t >= it.profit; --t) {
      if (minw[t - it.profit] < kInfW) {
        minw[t] = std::min(minw[t], minw[t - it.profit] + it.weight);
      }
    }
  }
  i64 best = 0;
  for (i64 t = 0; t <= total; ++t) {
    if (minw[t] <= inst.capacity) best = t;
  }
  return best;
}

std::optional<StepFn> exact_profit_fn(const std::vector<Item>& items,
                                      const Rat& grain) {
  i128 sum_p = 0;
  for (const Item& it : items) {
    if (it.profit <= 0 || it.weight < 0) {
      throw std::invalid_argument("exact_profit_fn: bad item");
    }
    sum_p += it.profit;
  }
  if (sum_p > 1'000'000) {
    // Fall back to subset enumeration for few items with wide profits.
    if (items.size() > 20) return std::nullopt;
    std::vector<std::pair<i64, i64>> combos;  // (weight, profit)
    combos.reserve(size_t{1} << items.size());
    combos.emplace_back(0, 0);
    for (const Item& it : items) {
      size_t m = combos.size();
      for (size_t s = 0; s < m; ++s) {
        combos.emplace_back(checked_i64(i128(combos[s].first) + it.weight, "enum w"),
                            checked_i64(i128(combos[s].second) + it.profit, "enum p"));
      }
    }
    std::sort(combos.begin(), combos.end());
    std::vector<std::pair<i64, i64>> steps;
    for (const auto& [w, p] : combos) {
      if (steps.empty() || (p > steps.back().second && w > steps.back().first)) {
        steps.emplace_back(w, p);
      } else if (p > steps.back().second && w == steps.back().first) {
        steps.back().second = p;
      }
    }
    return make_step_fn(std::move(steps), grain);
  }
  const i64 total = static_cast<i64>(sum_p);
  std::vector<i64> minw(total + 1, kInfW);
  minw[0] = 0;
  for (const Item& it : items) {
    for (i64 t = total; t >= it.profit; --t) {
      if (minw[t - it.profit] < kInfW) {
        minw[t] = std::min(minw[t], minw[t - it.profit] + it.weight);
      }
    }
  }
  // Suffix minima turn "exact profit t" into "profit >= t".
  for (i64 t = total - 1; t >= 0; --t) minw[t] = std::min(minw[t], minw[t + 1]);
  std::vector<std::pair<i64, i64>> steps;
  for (i64 t = 0; t <= total; ++t) {
    if (minw[t] >= kInfW) break;
    if (steps.empty() || minw[t] > steps.back().first) {
      steps.emplace_back(minw[t], t);
    } else {
      steps.back().second = t;
    }
  }
  return make_step_fn(std::move(steps), grain);
}

std::vector<Val> brute_maxplus_seq(const std::vector<Val>& a,
                                   const std::vector<Val>& b) {
  std::vector<Val> c(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      if (!a[i] || !b[j]) continue;
      i64 v = *a[i] + *b[j];
      if (!c[i + j] || v > *c[i + j]) c[i + j] = v;
    }
  }
  return c;
}

std::vector<Rat> brute_minplus_seq(const std::vector<Rat>& a,
                                   const std::vector<Rat>& b) {
  std::vector<Rat> c(a.size() + b.size() - 1);
  std::vector<bool> set(c.size(), false);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      Rat v = a[i] + b[j];
      if (!set[i + j] || v < c[i + j]) {
        c[i + j] = v;
        set[i + j] = true;
      }
    }
  }
  return c;
}

RatMps to_rat(const MonotonePointSet& p) {
  RatMps out;
  out.pts.reserve(p.pts.size());
  for (const Pt& q : p.pts) out.pts.push_back({Rat(q.x), Rat(q.y)});
  return out;
}

int orient_r(const RatPt& a, const RatPt& b, const RatPt& c) {
  // sign((b-a) x (c-a)) with each difference as an exact fraction; the
  // four-factor products stay well inside 128 bits at oracle scales.
  Rat ux = b.x - a.x, uy = b.y - a.y;
  Rat vx = c.x - a.x, vy = c.y - a.y;
  i128 lhs = i128(ux.numerator()) * vy.numerator() * uy.denominator() *
             vx.denominator();
  i128 rhs = i128(uy.numerator()) * vx.numerator() * ux.denominator() *
             vy.denominator();
  return (lhs > rhs) - (lhs < rhs);
}

std::vector<PointLabel> classify_r(const RatMps& p) {
  std::vector<PointLabel> labels(p.pts.size(), PointLabel::kApex);
  for (size_t i = 1; i + 1 < p.pts.size(); ++i) {
    int o = orient_r(p.pts[i - 1], p.pts[i + 1], p.pts[i]);
    labels[i] = o > 0   ? PointLabel::kApex
                : o < 0 ? PointLabel::kBase
                        : PointLabel::kDegenerate;
  }
  return labels;
}

i64 convex_number_r(const RatMps& p) {
  auto labels = classify_r(p);
  i64 runs = 0;
  std::optional<PointLabel> prev;
  for (PointLabel l : labels) {
    if (l == PointLabel::kDegenerate) continue;
    if (!prev || *prev != l) ++runs;
    prev = l;
  }
  return runs;
}

namespace {

std::optional<Rat> rat_eval(const std::vector<RatPt>& pts, const Rat& x,
                            bool left_limit) {
  if (pts.empty() || x < pts.front().x) return std::nullopt;
  if (left_limit) {
    // first index with pts[i].x >= x: bottom of a riser at x, if any
    size_t lo = 0, hi = pts.size();
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (pts[mid].x < x) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (lo < pts.size() && pts[lo].x == x) return pts[lo].y;
  }
  if (x >= pts.back().x) return pts.back().y;
  size_t lo = 0, hi = pts.size();
  while (lo < hi) {  // first index with pts[i].x > x
    size_t mid = (lo + hi) / 2;
    if (pts[mid].x <= x) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  size_t i = lo - 1;  // pts[i].x <= x < pts[i+1].x; top of any riser at x
  if (pts[i].x == x) return pts[i].y;
  const RatPt& u = pts[i];
  const RatPt& v = pts[i + 1];
  return u.y + (x - u.x) * (v.y - u.y) / (v.x - u.x);
}

}  // namespace

std::optional<Rat> g_value_r(const RatMps& p, const Rat& x) {
  return rat_eval(p.pts, x, false);
}

std::optional<Rat> g_value_left_r(const RatMps& p, const Rat& x) {
  return rat_eval(p.pts, x, true);
}

namespace {

struct RatChain {
  RatPt shift;
  const RatMps* base;
  Rat x_lo() const { return shift.x + base->pts.front().x; }
  Rat x_hi() const { return shift.x + base->pts.back().x; }
  bool covers(const Rat& x) const { return x >= x_lo() && x <= x_hi(); }
  std::optional<Rat> at(const Rat& x) const {
    if (!covers(x)) return std::nullopt;
    auto v = g_value_r(*base, x - shift.x);
    return v ? std::optional<Rat>(*v + shift.y) : std::nullopt;
  }
  std::optional<Rat> at_left(const Rat& x) const {
    if (!(x > x_lo() && x <= x_hi())) return std::nullopt;
    auto v = g_value_left_r(*base, x - shift.x);
    return v ? std::optional<Rat>(*v + shift.y) : std::nullopt;
  }
  // Linear form y = a + s*(x - x0) on an interval free of breakpoints;
  // nullopt when the chain does not span the whole open interval.
  struct Lin {
    Rat a, s, x0;
    Rat at(const Rat& x) const { return a + s * (x - x0); }
  };
  std::optional<Lin> linear_on(const Rat& xl, const Rat& xr) const {
    if (!(x_lo() <= xl && xr <= x_hi())) return std::nullopt;
    const auto& pts = base->pts;
    Rat lx = xl - shift.x;
    // segment with pts[i].x <= lx and pts[i+1].x >= xr - shift.x
    size_t lo = 0, hi = pts.size();
    while (lo < hi) {  // first index with pts[i].x > lx
      size_t mid = (lo + hi) / 2;
      if (pts[mid].x <= lx) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (lo == 0) return std::nullopt;
    size_t i = lo - 1;
    while (i + 1 < pts.size() && pts[i + 1].x == pts[i].x) ++i;  // riser top
    if (i + 1 >= pts.size()) return std::nullopt;
    const RatPt& u = pts[i];
    const RatPt& v = pts[i + 1];
    if (shift.x + v.x < xr) return std::nullopt;  // must span the interval
    Rat s = (v.y - u.y) / (v.x - u.x);
    Rat a = u.y + shift.y + (xl - (u.x + shift.x)) * s;
    return Lin{a, s, xl};
  }
};

}  // namespace

RatMps minkowski_sum_exact(const RatMps& a, const RatMps& b) {
  std::vector<RatChain> chains;
  chains.reserve(a.pts.size() + b.pts.size());
  for (const RatPt& p : a.pts) chains.push_back({p, &b});
  for (const RatPt& q : b.pts) chains.push_back({q, &a});
  std::set<Rat> xs;
  for (const RatPt& p : a.pts) {
    for (const RatPt& q : b.pts) xs.insert(p.x + q.x);
  }
  std::vector<Rat> cand(xs.begin(), xs.end());
  auto envelope_at = [&](const Rat& x) -> Rat {
    std::optional<Rat> g;
    for (const RatChain& c : chains) {
      auto v = c.at(x);
      if (v && (!g || *v > *g)) g = v;
    }
    return *g;  // candidates lie inside the sum's x-span
  };
  auto envelope_left = [&](const Rat& x) -> std::optional<Rat> {
    std::optional<Rat> g;
    for (const RatChain& c : chains) {
      auto v = c.at_left(x);
      if (v && (!g || *v > *g)) g = v;
    }
    return g;
  };
  std::vector<RatPt> raw;
  for (size_t ci = 0; ci < cand.size(); ++ci) {
    const Rat& x = cand[ci];
    Rat g = envelope_at(x);
    auto gl = envelope_left(x);
    if (gl && *gl < g) raw.push_back({x, *gl});
    raw.push_back({x, g});
    if (ci + 1 == cand.size()) break;
    // Between consecutive candidate x's every chain is linear, but the
    // envelope may still bend where translated segments cross.
    const Rat& xr = cand[ci + 1];
    std::vector<RatChain::Lin> lins;
    for (const RatChain& c : chains) {
      auto l = c.linear_on(x, xr);
      if (l) lins.push_back(*l);
    }
    if (lins.empty()) continue;
    Rat pos = x;
    // current winner just right of pos: max value, ties by max slope
    auto winner_at = [&](const Rat& p0) {
      size_t best = 0;
      for (size_t i = 1; i < lins.size(); ++i) {
        Rat d = lins[i].at(p0) - lins[best].at(p0);
        if (d > 0 || (d == 0 && lins[i].s > lins[best].s)) best = i;
      }
      return best;
    };
    size_t cur = winner_at(pos);
    for (;;) {
      // earliest strict crossing above the current line within (pos, xr)
      std::optional<Rat> next_x;
      for (size_t i = 0; i < lins.size(); ++i) {
        if (lins[i].s <= lins[cur].s) continue;
        Rat diff0 = lins[cur].at(pos) - lins[i].at(pos);
        if (diff0 < 0) continue;  // already above: ties resolved by slope
        Rat cross = pos + diff0 / (lins[i].s - lins[cur].s);
        if (cross > pos && cross < xr && (!next_x || cross < *next_x)) {
          next_x = cross;
        }
      }
      if (!next_x) break;
      raw.push_back({*next_x, lins[cur].at(*next_x)});
      pos = *next_x;
      cur = winner_at(pos);
    }
  }
  // Minimal vertex set: drop duplicates and collinear points.
  std::vector<RatPt> out;
  for (const RatPt& p : raw) {
    if (!out.empty() && p == out.back()) continue;
    out.push_back(p);
    while (out.size() >= 3 &&
           orient_r(out[out.size() - 3], out[out.size() - 1],
                    out[out.size() - 2]) == 0) {
      out.erase(out.end() - 2);
    }
  }
  return RatMps{std::move(out)};
}

RatMps reduce_r(const RatMps& p, i64 delta) {
  const auto& pts = p.pts;
  const size_t n = pts.size();
  if (n <= 2) return p;
  auto labels = classify_r(p);
  constexpr size_t kNone = std::numeric_limits<size_t>::max();
  std::vector<size_t> prev(n), next(n);
  std::vector<char> alive(n, 1);
  for (size_t i = 0; i < n; ++i) {
    prev[i] = (i == 0) ? kNone : i - 1;
    next[i] = (i + 1 == n) ? kNone : i + 1;
  }
  std::vector<size_t> stack;
  const Rat d(delta);
  for (size_t x = 0; x < n; ++x) {
    if (labels[x] != PointLabel::kApex) continue;
    while (!stack.empty()) {
      size_t y = stack.back();
      Rat gap = pts[x].y - pts[y].y;
      if (gap > d || gap == 0) break;
      for (size_t j = next[y]; j != x;) {
        size_t nj = next[j];
        alive[j] = 0;
        j = nj;
      }
      next[y] = x;
      prev[x] = y;
      if (prev[y] == kNone) break;
      int o = orient_r(pts[prev[y]], pts[x], pts[y]);
      if (o > 0) break;
      stack.pop_back();
      if (o == 0) {
        alive[y] = 0;
        next[prev[y]] = x;
        prev[x] = prev[y];
      }
    }
    stack.push_back(x);
  }
  RatMps out;
  out.pts.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (alive[i]) out.pts.push_back(pts[i]);
  }
  return out;
}

LevelMinima raster_minkowski_levels(const MonotonePointSet& a,
                                    const MonotonePointSet& b, i64 sigma) {
  if (sigma <= 0) throw std::invalid_argument("sigma must be positive");
  auto elements = [](const MonotonePointSet& p) {
    std::vector<std::pair<Pt, Pt>> segs;
    if (p.pts.size() == 1) {
      segs.emplace_back(p.pts[0], p.pts[0]);
    } else {
      for (size_t i = 1; i < p.pts.size(); ++i) {
        segs.emplace_back(p.pts[i - 1], p.pts[i]);
      }
    }
    return segs;
  };
  auto ea = elements(a), eb = elements(b);
  LevelMinima out;
  out.sigma = sigma;
  out.k_lo = floor_div(i128(a.pts.front().y) + b.pts.front().y, sigma);
  out.k_hi = floor_div(i128(a.pts.back().y) + b.pts.back().y, sigma);
  out.min_x.assign(out.k_hi - out.k_lo + 1, std::numeric_limits<i64>::max());
  auto fold_segment = [&](const Pt& u, const Pt& v) {
    const Pt* lo = &u;
    const Pt* hi = &v;
    if (lo->y > hi->y) std::swap(lo, hi);
    i64 k_from = ceil_div(lo->y, sigma);
    i64 k_to = floor_div(hi->y, sigma);
    for (i64 k = std::max(k_from, out.k_lo); k <= std::min(k_to, out.k_hi); ++k) {
      i128 y = i128(k) * sigma;
      i64 x;
      if (hi->y == lo->y) {
        x = std::min(lo->x, hi->x);
      } else if (hi->x == lo->x) {
        x = lo->x;
      } else {
        i128 num = (y - lo->y) * (hi->x - lo->x);
        x = checked_i64(lo->x + ceil_div(num, hi->y - lo->y), "raster x");
      }
      i64& slot = out.min_x[k - out.k_lo];
      slot = std::min(slot, x);
    }
  };
  for (const auto& [a1, a2] : ea) {
    for (const auto& [b1, b2] : eb) {
      Pt c11{a1.x + b1.x, a1.y + b1.y};
      Pt c12{a1.x + b2.x, a1.y + b2.y};
      Pt c21{a2.x + b1.x, a2.y + b1.y};
      Pt c22{a2.x + b2.x, a2.y + b2.y};
      fold_segment(c11, c12);
      fold_segment(c11, c21);
      fold_segment(c12, c22);
      fold_segment(c21, c22);
    }
  }
  for (i64 idx = static_cast<i64>(out.min_x.size()) - 2; idx >= 0; --idx) {
    out.min_x[idx] = std::min(out.min_x[idx], out.min_x[idx + 1]);
  }
  return out;
}

}  // namespace knap
