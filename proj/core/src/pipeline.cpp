#include "knapcore/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>

#include "knapcore/convolution.hpp"
#include "knapcore/sparse_solver.hpp"

namespace knap {

void check_instance(const Instance& inst) {
  i128 sum_w = 0, sum_p = 0;
  for (const Item& it : inst.items) {
    if (it.profit < 0 || it.weight < 0) {
      throw std::invalid_argument("negative item field");
    }
    sum_w += it.weight;
    sum_p += it.profit;
  }
  if (inst.capacity < 0) throw std::invalid_argument("negative capacity");
  checked_i64(sum_w, "sum of weights");
  checked_i64(sum_p, "sum of profits");
  check_width(inst.capacity, "capacity");
}

Rat ledger_factor_product(const ApproxReport& r) {
  Rat prod(1);
  for (const auto& e : r.budget_ledger) prod *= e.factor;
  return prod;
}

SortedItems sort_by_unit_profit(std::vector<Item> items) {
  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const Item& x = items[a];
    const Item& y = items[b];
    i128 lhs = i128(x.profit) * y.weight;
    i128 rhs = i128(y.profit) * x.weight;
    if (lhs != rhs) return lhs > rhs;  // higher unit profit first
    if (x.weight != y.weight) return x.weight < y.weight;
    return a < b;
  });
  SortedItems s;
  s.items.reserve(items.size());
  for (std::size_t i : idx) s.items.push_back(items[i]);
  return s;
}

DiversityResult diversity_prefix(const SortedItems& s, std::size_t i, i64 m) {
  if (i > s.items.size()) throw std::invalid_argument("prefix too long");
  std::map<i64, std::vector<std::size_t>> classes;  // profit -> positions
  for (std::size_t j = 0; j < i; ++j) classes[s.items[j].profit].push_back(j);
  // Delete whole classes, least multiplicity first (ties: lower profit),
  // while the total deleted stays within 2m items.
  std::vector<std::pair<i64, i64>> order;  // (multiplicity, profit)
  order.reserve(classes.size());
  for (const auto& [p, pos] : classes) {
    order.emplace_back(static_cast<i64>(pos.size()), p);
  }
  std::sort(order.begin(), order.end());
  DiversityResult out;
  i64 budget = 2 * m;
  std::size_t removed_classes = 0;
  for (const auto& [mult, p] : order) {
    if (mult > budget) break;
    budget -= mult;
    ++removed_classes;
    const auto& pos = classes[p];
    out.removed.insert(out.removed.end(), pos.begin(), pos.end());
  }
  out.d = static_cast<i64>(classes.size() - removed_classes);
  std::sort(out.removed.begin(), out.removed.end());
  return out;
}

std::size_t find_i_delta(const SortedItems& s, i64 threshold, i64 m) {
  std::size_t lo = 1, hi = s.items.size();  // D(1) = 0 <= threshold always
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo + 1) / 2;
    if (diversity_prefix(s, mid, m).d <= threshold) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

namespace {

// Unit-fraction eps as an integer reciprocal.
i64 unit_denominator(const Rat& eps) {
  if (eps <= 0 || eps >= 1 || eps.numerator() != 1) {
    throw std::invalid_argument("eps must be a unit fraction in (0,1)");
  }
  return eps.denominator();
}

// Rebase fs onto their common (gcd) grain.
std::vector<StepFn> to_common_grain(std::vector<StepFn> fs) {
  Rat common = fs.front().grain;
  for (const StepFn& f : fs) common = rat_gcd(common, f.grain);
  for (StepFn& f : fs) {
    if (f.grain != common) f = with_grain(f, common);
  }
  return fs;
}

// Best single item of profit <= cap per weight budget: the exact answer to
// Problem 4.1 once B < 2 (no two items fit under the cap).
StepFn single_item_profile(const SortedItems& s, i64 cap_grains,
                           const Rat& grain) {
  std::vector<Item> fit;
  for (const Item& it : s.items) {
    if (it.profit <= cap_grains) fit.push_back(it);
  }
  std::sort(fit.begin(), fit.end(), [](const Item& a, const Item& b) {
    return a.weight != b.weight ? a.weight < b.weight : a.profit > b.profit;
  });
  std::vector<std::pair<i64, i64>> steps{{0, 0}};
  i64 best = 0;
  for (const Item& it : fit) {
    if (it.profit > best) {
      best = it.profit;
      if (it.weight == 0 && steps.size() == 1 && steps[0].first == 0) {
        steps[0].second = best;
      } else {
        steps.emplace_back(it.weight, best);
      }
    }
  }
  return make_step_fn(std::move(steps), grain);
}

StepFn solve_capped_impl(const SortedItems& s, const CapParams& params,
                         const Rat& eps) {
  const i64 g = unit_denominator(eps);
  if (params.cap_grains < g || params.cap_grains > 2 * params.m * g) {
    throw std::invalid_argument("solve_capped: cap outside [1, 2m]");
  }
  if (s.items.empty()) return zero_step_fn(eps);
  if (params.cap_grains < 2 * g) {
    // B < 2: at most one item fits under the cap.
    return single_item_profile(s, params.cap_grains, eps);
  }
  if (params.depth <= 0) {
    throw std::runtime_error("solve_capped: recursion budget exhausted");
  }
  // Delta = ceil((1/eps / sqrt(B)) * log(2/eps)), realized exactly as
  // ceil(g^2 * L / isqrt(B_grains * g)) with L = ceil(log2(2g)).
  const i64 lg = ilog2_ceil(2 * g);
  const i64 root = std::max<i64>(1, isqrt(checked_i64(
                                      i128(params.cap_grains) * g, "B*g")));
  const i64 delta = ceil_div(i128(g) * g * lg, root);

  const std::size_t i_delta = find_i_delta(s, delta, params.m);
  DiversityResult div = diversity_prefix(s, i_delta, params.m);

  // Part 1: the removed classes J, solved by the sparse geometric solver.
  std::vector<Item> j_items;
  j_items.reserve(div.removed.size());
  for (std::size_t pos : div.removed) j_items.push_back(s.items[pos]);
  StepFn f1 = solve_sparse(j_items, eps);

  // Part 2: [i_delta] \ J has at most Delta distinct profit values.
  std::vector<bool> in_j(i_delta, false);
  for (std::size_t pos : div.removed) in_j[pos] = true;
  std::map<i64, std::vector<i64>> by_profit;
  for (std::size_t pos = 0; pos < i_delta; ++pos) {
    if (!in_j[pos]) by_profit[s.items[pos].profit].push_back(s.items[pos].weight);
  }
  std::vector<UniformFn> classes;
  classes.reserve(by_profit.size());
  for (auto& [p, ws] : by_profit) {
    classes.push_back(build_class_function(std::move(ws), p, params.cap_grains, eps));
  }
  StepFn f2 = merge_profit_classes(classes, params.cap_grains, eps);

  // Part 3: the low-efficiency suffix, capped at B' = c/(eps*Delta) by the
  // Greedy Exchange Lemma, recursively.
  StepFn f3 = zero_step_fn(eps);
  if (i_delta < s.items.size()) {
    i64 cap2 = ceil_div(i128(params.c_exchange.numerator()) * g * g,
                        i128(params.c_exchange.denominator()) * delta);
    cap2 = std::min(std::max(cap2, g), params.cap_grains);
    SortedItems suffix;
    suffix.items.assign(s.items.begin() + i_delta, s.items.end());
    CapParams rec = params;
    rec.cap_grains = cap2;
    rec.depth = params.depth - 1;
    f3 = solve_capped_impl(suffix, rec, eps);
  }

  auto fs = to_common_grain({std::move(f1), std::move(f2), std::move(f3)});
  i64 cap_common = checked_i64(
      i128(params.cap_grains) * exact_ratio(eps, fs.front().grain), "cap");
  return merge_dc(fs, eps, cap_common);
}

}  // namespace

StepFn solve_capped(const SortedItems& s, const CapParams& params,
                    const Rat& eps) {
  return solve_capped_impl(s, params, eps);
}

StepFn solve_additive(const SortedItems& s, i64 m, const Rat& eps,
                      const Rat& c_exchange) {
  const i64 g = unit_denominator(eps);
  if (m <= 0) throw std::invalid_argument("m must be positive");
  if (s.items.empty()) return zero_step_fn(eps);
  // Depth budget: B shrinks at least square-root-fast, so
  // ceil(log2 log2 (2m)) + 3 levels reach B < 2.
  const int k = ilog2_ceil(std::max<i64>(ilog2_ceil(2 * m), 1)) + 3;
  // Run at eps' = eps / (8k) so the C*k*m*eps' contract lands at m*eps.
  const i64 shrink = 8 * k;
  Rat eps2(1, checked_i64(i128(g) * shrink, "eps denominator"));
  SortedItems rebased;
  rebased.items.reserve(s.items.size());
  for (const Item& it : s.items) {
    rebased.items.push_back(
        {checked_i64(i128(it.profit) * shrink, "rebased profit"), it.weight});
  }
  CapParams params;
  params.m = m;
  params.cap_grains = checked_i64(i128(2) * m * g * shrink, "cap 2m");
  params.depth = k;
  params.c_exchange = c_exchange;
  return solve_capped_impl(rebased, params, eps2);
}

StepFn core_band_solver(const std::vector<Item>& items, const Rat& eps,
                        const Rat& c_exchange) {
  const i64 g = unit_denominator(eps);
  if (items.empty()) return zero_step_fn(eps);
  for (const Item& it : items) {
    if (it.profit < g || it.profit >= 2 * g) {
      throw std::invalid_argument("core_band_solver: profit outside [1,2)");
    }
  }
  // Split eps: m*eps'-additive bands up to 2m turn multiplicative at
  // values >= m; the fold rounding spends the other half. Item grains move
  // to eps/2 along with the parameter.
  Rat eps_half(1, 2 * g);
  std::vector<Item> rebased;
  rebased.reserve(items.size());
  for (const Item& it : items) {
    rebased.push_back({checked_i64(i128(it.profit) * 2, "band profit"), it.weight});
  }
  SortedItems s = sort_by_unit_profit(std::move(rebased));
  const i64 n = static_cast<i64>(items.size());
  const i64 vmax = std::min<i64>(2 * n, 2 * g);  // values above need no band
  std::vector<StepFn> folded;
  for (i64 m = 1; m < vmax; m *= 2) {
    StepFn fm = solve_additive(s, m, eps_half, c_exchange);
    folded.push_back(round_down_geometric(fm, eps_half));
  }
  return pointwise_max(to_common_grain(std::move(folded)));
}

StepFn greedy_profile(const SortedItems& s, const Rat& grain) {
  std::vector<std::pair<i64, i64>> steps{{0, 0}};
  i128 w = 0, p = 0;
  for (const Item& it : s.items) {
    w += it.weight;
    p += it.profit;
    i64 wi = checked_i64(w, "greedy weight");
    i64 pi = checked_i64(p, "greedy profit");
    if (steps.back().first == wi) {
      steps.back().second = std::max(steps.back().second, pi);
    } else {
      steps.emplace_back(wi, pi);
    }
  }
  return make_step_fn(std::move(steps), grain);
}

ApproxReport knapsack_fptas(const Instance& inst, const Rat& eps,
                            const FptasConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps outside (0,1)");
  check_instance(inst);
  ApproxReport report;
  auto finish = [&](Rat sol) {
    report.sol = sol;
    report.elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return report;
  };

  // Stage grains: 1/g8 for the tiny-profit discard, 1/g4 for per-group
  // rounding and the band solver (the band eps must divide the rounding
  // grain, so those two stages share 1/g4), 1/g16 each for the greedy fold
  // and the final group merge. The factors multiply to >= 1 - 3/4 eps.
  // Powers of two keep every grain dyadic, so rescaled profits with dyadic
  // fractions survive the group rounding exactly.
  const i64 g8 = i64{1} << ilog2_ceil(ceil_div(i128(8) * eps.denominator(),
                                               eps.numerator()));
  const i64 g4 = i64{1} << ilog2_ceil(ceil_div(i128(4) * eps.denominator(),
                                               eps.numerator()));
  const i64 g16 = i64{1} << ilog2_ceil(ceil_div(i128(16) * eps.denominator(),
                                                eps.numerator()));
  report.budget_ledger = {
      {"tiny-profit-discard", Rat(g8 - 1, g8), Rat(0)},
      {"group-rounding", Rat(g4 - 1, g4), Rat(0)},
      {"band-solver", Rat(g4 - 1, g4), Rat(0)},
      {"greedy-fold", Rat(g16 - 1, g16), Rat(0)},
      {"group-merge", Rat(g16 - 1, g16), Rat(0)},
  };

  // Zero-weight items are always taken; drop unusable items.
  i128 base = 0;
  std::vector<Item> items;
  for (const Item& it : inst.items) {
    if (it.profit <= 0 || it.weight > inst.capacity) continue;
    if (it.weight == 0) {
      base += it.profit;
    } else {
      items.push_back(it);
    }
  }
  Rat sol_base(checked_i64(base, "base profit"));
  if (items.empty() || inst.capacity <= 0) return finish(sol_base);

  const i64 n = static_cast<i64>(items.size());
  {
    i128 quartic = i128(eps.denominator()) / eps.numerator() + 1;
    if (i128(n) > quartic * quartic * quartic * quartic) {
      report.time_bound_void = true;
    }
  }

  // Discard items with p_i <= (eps/8/n) * max p.
  i64 maxp = 0;
  for (const Item& it : items) maxp = std::max(maxp, it.profit);
  std::erase_if(items, [&](const Item& it) {
    return i128(it.profit) * n * g8 <= i128(maxp);
  });

  // Group by floor(log2 p); rescale each group to [1,2) and round profits
  // down to multiples of 1/g4 of the scale.
  std::map<int, std::vector<Item>> groups;
  for (const Item& it : items) {
    int j = 0;
    while ((i64{1} << (j + 1)) <= it.profit) ++j;
    groups[j].push_back(it);
  }
  std::vector<StepFn> group_fns;
  std::vector<Item> rounded_all;  // rounded profits in the finest group grain
  int j_min = groups.begin()->first;
  for (auto& [j, members] : groups) {
    const Rat scale(i64{1} << j);        // group profits lie in [scale, 2*scale)
    const Rat grain = scale / g4;        // original units per grain
    std::vector<Item> local;
    local.reserve(members.size());
    for (const Item& it : members) {
      // floor(p / grain) = floor(p * g4 / 2^j), lands in [g4, 2*g4)
      i64 a = floor_div(i128(it.profit) * g4, i64{1} << j);
      local.push_back({a, it.weight});
      rounded_all.push_back(
          {checked_i64(i128(a) << (j - j_min), "global profit"), it.weight});
    }
    StepFn band = core_band_solver(local, Rat(1, g4), config.c_exchange);
    band.grain *= scale;  // back to original units
    StepFn greedy = greedy_profile(sort_by_unit_profit(local), grain);
    greedy = round_down_geometric(greedy, Rat(1, g16));
    group_fns.push_back(pointwise_max(to_common_grain({band, greedy})));
  }
  if (group_fns.empty()) return finish(sol_base);

  auto common = to_common_grain(std::move(group_fns));
  i128 cap_total = 0;
  for (const StepFn& f : common) cap_total += f.steps.back().second;
  StepFn final_fn =
      merge_dc(common, Rat(1, g16), checked_i64(cap_total, "merge cap"));
  // Exact greedy floor over the rounded items: feasible everywhere, so the
  // max stays a lower bound on f_I, and single-item optima survive exactly.
  StepFn global_greedy = greedy_profile(sort_by_unit_profit(rounded_all),
                                        Rat(i64{1} << j_min, g4));
  final_fn = pointwise_max(to_common_grain({final_fn, global_greedy}));
  Val at_w = eval(final_fn, inst.capacity);
  Rat sol = sol_base;
  if (at_w) sol += Rat(*at_w) * final_fn.grain;
  return finish(sol);
}

}  // namespace knap
