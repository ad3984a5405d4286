#include "knapcore/convolution.hpp"

#include <algorithm>
#include <map>

namespace knap {

StepFn maxplus_naive(const StepFn& f, const StepFn& g) {
  if (f.grain != g.grain) throw std::invalid_argument("maxplus: grain mismatch");
  std::vector<std::pair<i64, i64>> sums;
  sums.reserve(f.steps.size() * g.steps.size());
  for (const auto& [xa, ya] : f.steps) {
    for (const auto& [xb, yb] : g.steps) {
      sums.emplace_back(checked_i64(i128(xa) + xb, "maxplus x"),
                        checked_i64(i128(ya) + yb, "maxplus y"));
    }
  }
  std::sort(sums.begin(), sums.end());
  std::vector<std::pair<i64, i64>> out;
  for (const auto& [x, y] : sums) {
    if (!out.empty() && out.back().first == x) {
      out.back().second = std::max(out.back().second, y);
    } else if (out.empty() || y > out.back().second) {
      out.emplace_back(x, y);
    }
  }
  return make_step_fn(std::move(out), f.grain, f.right_extended && g.right_extended,
                      f.x_hi + g.x_hi);
}

namespace {

// Implicit matrix for c[k] = max_{i+j=k} a[k-j] + b[j]: row k, column j.
// A column is DEAD when b[j] is -inf or the row has passed its window
// (k - j >= |a|), LOW when the window has not started (k < j), VALID
// otherwise. The preference rule below keeps total monotonicity across the
// staircase of valid entries (a is concave), so SMAWK applies.
struct ConvMatrix {
  const std::vector<i64>& a;
  const std::vector<Val>& b;

  enum class State { kValid, kLow, kDead };

  State state(i64 row, i64 col) const {
    if (!b[col]) return State::kDead;
    i64 i = row - col;
    if (i >= static_cast<i64>(a.size())) return State::kDead;
    if (i < 0) return State::kLow;
    return State::kValid;
  }

  i64 value(i64 row, i64 col) const { return a[row - col] + *b[col]; }

  // True iff column c2 (> c1) is strictly preferred at this row.
  bool better(i64 row, i64 c1, i64 c2) const {
    State s1 = state(row, c1), s2 = state(row, c2);
    if (s1 == State::kDead) return true;
    if (s2 == State::kDead) return false;
    if (s2 == State::kLow) return false;  // s1 is LOW or VALID; keep c1
    // c1 < c2 and c2 valid implies c1 valid (its window started earlier).
    return value(row, c2) > value(row, c1);
  }

  Val result(i64 row, i64 col) const {
    return state(row, col) == State::kValid ? Val(value(row, col)) : std::nullopt;
  }
};

void smawk_rec(const ConvMatrix& m, const std::vector<i64>& rows,
               const std::vector<i64>& cols, std::vector<i64>& answer) {
  if (rows.empty()) return;
  // REDUCE: prune columns that cannot win any row.
  std::vector<i64> survive;
  survive.reserve(std::min(rows.size(), cols.size()));
  for (i64 col : cols) {
    while (!survive.empty()) {
      i64 r = rows[survive.size() - 1];
      if (m.better(r, survive.back(), col)) {
        survive.pop_back();
      } else {
        break;
      }
    }
    if (survive.size() < rows.size()) survive.push_back(col);
  }
  if (rows.size() == 1) {
    answer[rows[0]] = survive[0];
    return;
  }
  std::vector<i64> odd_rows;
  for (size_t i = 1; i < rows.size(); i += 2) odd_rows.push_back(rows[i]);
  smawk_rec(m, odd_rows, survive, answer);
  // INTERPOLATE even rows between neighbouring odd answers.
  std::map<i64, size_t> col_pos;
  for (size_t i = 0; i < survive.size(); ++i) col_pos[survive[i]] = i;
  for (size_t i = 0; i < rows.size(); i += 2) {
    i64 row = rows[i];
    size_t lo = (i == 0) ? 0 : col_pos[answer[rows[i - 1]]];
    size_t hi = (i + 1 < rows.size()) ? col_pos[answer[rows[i + 1]]]
                                      : survive.size() - 1;
    i64 best = survive[lo];
    for (size_t j = lo + 1; j <= hi; ++j) {
      if (m.better(row, best, survive[j])) best = survive[j];
    }
    answer[row] = best;
  }
}

}  // namespace

std::vector<Val> smawk_concave_maxplus(const std::vector<i64>& a,
                                       const std::vector<Val>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("smawk: empty input");
  for (size_t i = 2; i < a.size(); ++i) {
    if (a[i] - a[i - 1] > a[i - 1] - a[i - 2]) {
      throw std::invalid_argument("smawk: sequence a is not concave");
    }
  }
  for (const auto& v : a) check_width(v, "smawk a");
  for (const auto& v : b) {
    if (v) check_width(*v, "smawk b");
  }
  const i64 rows = static_cast<i64>(a.size() + b.size()) - 1;
  ConvMatrix m{a, b};
  std::vector<i64> row_ids(rows), col_ids(b.size());
  for (i64 k = 0; k < rows; ++k) row_ids[k] = k;
  for (size_t j = 0; j < b.size(); ++j) col_ids[j] = static_cast<i64>(j);
  std::vector<i64> answer(rows, -1);
  smawk_rec(m, row_ids, col_ids, answer);
  std::vector<Val> c(rows);
  for (i64 k = 0; k < rows; ++k) c[k] = m.result(k, answer[k]);
  return c;
}

namespace {

StepFn merge_dc_rec(const std::vector<StepFn>& fs, size_t lo, size_t hi,
                    const Rat& eps_level, i64 cap) {
  if (hi - lo == 1) return cap_values(fs[lo], cap);
  size_t mid = lo + (hi - lo + 1) / 2;
  StepFn left = merge_dc_rec(fs, lo, mid, eps_level, cap);
  StepFn right = merge_dc_rec(fs, mid, hi, eps_level, cap);
  StepFn merged = cap_values(maxplus_naive(left, right), cap);
  return round_down_geometric(merged, eps_level);
}

}  // namespace

StepFn merge_dc(const std::vector<StepFn>& fs, const Rat& eps, i64 cap) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("merge_dc: eps outside (0,1)");
  if (fs.empty()) return zero_step_fn(Rat(1));
  if (fs.size() == 1) return round_down_geometric(cap_values(fs[0], cap), eps);
  int levels = ilog2_ceil(static_cast<i64>(fs.size()));
  Rat eps_level = eps / levels;
  return merge_dc_rec(fs, 0, fs.size(), eps_level, cap);
}

UniformFn build_class_function(std::vector<i64> weights, i64 p_grains,
                               i64 cap_grains, const Rat& grain) {
  if (p_grains <= 0) throw std::invalid_argument("class profit must be positive");
  std::sort(weights.begin(), weights.end());
  UniformFn u;
  u.p = p_grains;
  u.cap = cap_grains;
  u.grain = grain;
  // Keep levels up to the first value reaching the cap; min(f, cap) needs
  // a step there, and anything past it is redundant.
  i64 max_levels = ceil_div(cap_grains, p_grains);
  if (static_cast<i64>(weights.size()) > max_levels) weights.resize(max_levels);
  u.weights = std::move(weights);
  return u;
}

std::vector<i64> uniform_levels(const UniformFn& u) {
  std::vector<i64> levels(u.weights.size() + 1);
  levels[0] = 0;
  for (size_t k = 0; k < u.weights.size(); ++k) {
    levels[k + 1] = checked_i64(i128(levels[k]) + u.weights[k], "class prefix sum");
  }
  return levels;
}

StepFn uniform_to_step_fn(const UniformFn& u) {
  auto levels = uniform_levels(u);
  std::vector<std::pair<i64, i64>> steps;
  steps.reserve(levels.size());
  for (size_t k = 0; k < levels.size(); ++k) {
    i64 v = checked_i64(i128(u.p) * k, "class value");
    steps.emplace_back(levels[k], std::min(v, u.cap));
  }
  return make_step_fn(std::move(steps), u.grain);
}

namespace {

// (min,+)-convolution of two convex level sequences, via SMAWK on the
// negated (concave) sequences.
std::vector<i64> minplus_convex(const std::vector<i64>& x1,
                                const std::vector<i64>& x2) {
  std::vector<i64> a(x1.size());
  for (size_t i = 0; i < x1.size(); ++i) a[i] = -x1[i];
  std::vector<Val> b(x2.size());
  for (size_t j = 0; j < x2.size(); ++j) b[j] = -x2[j];
  auto c = smawk_concave_maxplus(a, b);
  std::vector<i64> out(c.size());
  for (size_t k = 0; k < c.size(); ++k) out[k] = -*c[k];
  return out;
}

}  // namespace

StepFn merge_profit_classes(const std::vector<UniformFn>& classes, i64 B,
                            const Rat& eps) {
  if (classes.empty()) return zero_step_fn(Rat(1));
  const Rat grain = classes.front().grain;
  // Group by exact profit value; same-p classes convolve exactly and stay
  // p-uniform pseudo-concave.
  std::map<i64, std::vector<i64>> level_by_p;
  for (const auto& u : classes) {
    if (u.grain != grain) throw std::invalid_argument("class grain mismatch");
    auto levels = uniform_levels(u);
    auto it = level_by_p.find(u.p);
    if (it == level_by_p.end()) {
      level_by_p.emplace(u.p, std::move(levels));
    } else {
      it->second = minplus_convex(it->second, levels);
      i64 max_k = ceil_div(B, u.p);  // one level past the cap stays
      if (static_cast<i64>(it->second.size()) > max_k + 1) {
        it->second.resize(max_k + 1);
      }
    }
  }
  std::vector<StepFn> groups;
  groups.reserve(level_by_p.size());
  for (const auto& [p, levels] : level_by_p) {
    std::vector<std::pair<i64, i64>> steps;
    steps.reserve(levels.size());
    for (size_t k = 0; k < levels.size(); ++k) {
      i64 y = checked_i64(i128(p) * k, "group value");
      steps.emplace_back(levels[k], std::min(y, B));
      if (y >= B) break;
    }
    groups.push_back(make_step_fn(std::move(steps), grain));
  }
  if (groups.size() == 1) return cap_values(groups.front(), B);
  return merge_dc(groups, eps, B);
}

}  // namespace knap
