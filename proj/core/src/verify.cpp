#include "knapcore/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include "knapcore/convolution.hpp"
#include "knapcore/geometry.hpp"
#include "knapcore/io.hpp"
#include "knapcore/oracles.hpp"
#include "knapcore/pipeline.hpp"
#include "knapcore/sparse_solver.hpp"

namespace knap {

int worker_threads() {
  if (const char* env = std::getenv("KNAP_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(i64 n, const std::function<void(i64)>& fn) {
  int threads = worker_threads();
  if (threads <= 1 || n <= 1) {
    for (i64 i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<i64> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto body = [&] {
    for (;;) {
      i64 i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int spawn = static_cast<int>(std::min<i64>(threads, n));
  pool.reserve(spawn);
  for (int t = 0; t < spawn; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

// ---- deterministic random objects --------------------------------------

StepFn random_step_fn(Rng& rng, i64 max_steps, i64 max_dx, i64 max_dy,
                      const Rat& grain = Rat(1)) {
  i64 k = rng.uniform(1, max_steps);
  std::vector<std::pair<i64, i64>> steps;
  i64 x = rng.uniform(0, 3);
  i64 y = rng.uniform(0, 2);
  steps.emplace_back(x, y);
  for (i64 i = 1; i < k; ++i) {
    x += rng.uniform(1, max_dx);
    y += rng.uniform(1, max_dy);
    steps.emplace_back(x, y);
  }
  return make_step_fn(std::move(steps), grain);
}

// Removes collinear interior points so decompose/reduce preconditions hold.
MonotonePointSet strip_degenerate(std::vector<Pt> pts) {
  std::vector<Pt> out;
  for (const Pt& p : pts) {
    if (!out.empty() && p == out.back()) continue;
    out.push_back(p);
    while (out.size() >= 3 &&
           orient(out[out.size() - 3], out[out.size() - 1],
                  out[out.size() - 2]) == 0) {
      out.erase(out.end() - 2);
    }
  }
  return make_mps(std::move(out));
}

// Random monotone point set with y-coordinates on the sigma grid and no
// degenerate points.
MonotonePointSet random_mps(Rng& rng, i64 max_pts, i64 sigma) {
  i64 k = rng.uniform(1, max_pts);
  std::vector<Pt> pts;
  i64 x = rng.uniform(0, 4);
  i64 y = sigma * rng.uniform(0, 2);
  pts.push_back({x, y});
  bool last_vertical = false;
  for (i64 i = 1; i < k; ++i) {
    if (!last_vertical && rng.uniform(0, 3) == 0) {
      y += sigma * rng.uniform(1, 4);
      last_vertical = true;
    } else {
      x += rng.uniform(1, 6);
      y += sigma * rng.uniform(0, 4);
      last_vertical = false;
    }
    if (pts.back().x == x && pts.back().y == y) continue;
    pts.push_back({x, y});
  }
  return strip_degenerate(std::move(pts));
}

struct Tally {
  std::atomic<i64> passed{0};
  std::atomic<i64> total{0};
  void check(bool ok) {
    total.fetch_add(1);
    if (ok) passed.fetch_add(1);
  }
};

// sup of g over each f-constancy interval stays within slack of f, and
// g >= f at every step start. Both sides exact.
bool subtractive_ok(const RatMps& p, const StepFn& f, i64 slack) {
  const auto& steps = f.steps;
  for (size_t i = 0; i < steps.size(); ++i) {
    auto g = g_value_r(p, Rat(steps[i].first));
    if (!g || *g < Rat(steps[i].second)) return false;  // g >= f
    Rat bound = Rat(steps[i].second + slack);
    if (i + 1 < steps.size()) {
      auto gl = g_value_left_r(p, Rat(steps[i + 1].first));
      if (gl && *gl > bound) return false;
    } else {
      auto top = g_value_r(p, p.pts.back().x);
      if (top && *top > bound) return false;
    }
  }
  return true;
}

bool region_contained(const RatMps& inner, const RatMps& outer) {
  if (inner.pts.front().x != outer.pts.front().x) return false;
  if (inner.pts.back().x != outer.pts.back().x) return false;
  auto le_at = [&](const Rat& x) {
    auto a = g_value_r(inner, x);
    auto b = g_value_r(outer, x);
    if (!a) return true;
    return b && *a <= *b;
  };
  for (const RatPt& q : inner.pts) {
    if (!le_at(q.x)) return false;
  }
  for (const RatPt& q : outer.pts) {
    if (!le_at(q.x)) return false;
  }
  return true;
}

bool is_subset_points(const RatMps& sub, const RatMps& sup) {
  size_t j = 0;
  for (const RatPt& p : sub.pts) {
    while (j < sup.pts.size() && !(sup.pts[j] == p)) ++j;
    if (j == sup.pts.size()) return false;
    ++j;
  }
  return true;
}

}  // namespace

SuiteResult run_end2end_suite(const std::vector<Profile>& profiles,
                              const std::vector<Rat>& eps_list, i64 seeds,
                              i64 n_max) {
  SuiteResult res;
  res.name = "end2end";
  struct Case {
    Profile profile;
    Rat eps;
  };
  std::vector<Case> cases;
  for (Profile p : profiles) {
    for (const Rat& e : eps_list) cases.push_back({p, e});
  }
  std::vector<i64> passed(cases.size(), 0);
  for (size_t ci = 0; ci < cases.size(); ++ci) {
    const Case& c = cases[ci];
    // Weight scales chosen so exact_dp never refuses at these shapes:
    // scale-spread keeps profits small (profit-axis DP), others keep the
    // capacity axis within the guard.
    i64 max_w = c.profile == Profile::kScaleSpread ? 1'000'000 : 20'000;
    if (c.profile == Profile::kManyDistinctProfits) max_w = 3'000;
    std::atomic<i64> ok{0};
    parallel_for(seeds, [&](i64 seed) {
      try {
        Instance inst =
            gen_instance(static_cast<u64>(seed), c.profile, n_max, max_w);
        auto opt = exact_dp(inst);
        if (!opt) return;  // guard refused: counts as failure
        ApproxReport rep = knapsack_fptas(inst, c.eps);
        Rat lower = Rat(*opt) * (Rat(1) - c.eps);
        if (rep.sol <= Rat(*opt) && rep.sol >= lower &&
            ledger_factor_product(rep) >= Rat(1) - c.eps) {
          ok.fetch_add(1);
        }
      } catch (const std::exception&) {
        // any throw counts as a failed case
      }
    });
    passed[ci] = ok.load();
  }
  for (size_t ci = 0; ci < cases.size(); ++ci) {
    const Case& c = cases[ci];
    std::ostringstream line;
    line << "end2end profile=" << profile_name(c.profile)
         << " eps=" << format_rat(c.eps) << " n=" << n_max << " pass=" << passed[ci]
         << "/" << seeds;
    res.lines.push_back(line.str());
    res.passed += passed[ci];
    res.total += seeds;
  }
  return res;
}

SuiteResult run_sparse_suite(const std::vector<Rat>& eps_list, i64 seeds,
                             i64 n_max) {
  SuiteResult res;
  res.name = "sparse";
  for (const Rat& eps : eps_list) {
    const i64 g = eps.denominator();
    std::atomic<i64> ok{0};
    parallel_for(seeds, [&](i64 seed) {
      Rng rng(static_cast<u64>(seed) * 977 + g);
      i64 n = rng.uniform(1, n_max);
      std::vector<Item> items;
      items.reserve(n);
      for (i64 i = 0; i < n; ++i) {
        items.push_back({rng.uniform(g, 2 * g - 1), rng.uniform(0, 1000)});
      }
      StepFn approx = solve_sparse(items, eps);
      auto exact = exact_profit_fn(items, eps);
      if (!exact) return;
      StepFn exact_fine = with_grain(*exact, approx.grain);
      i64 delta_grains = n * exact_ratio(eps, approx.grain);
      if (verify_approx(approx, exact_fine, Rat(0), delta_grains, std::nullopt)) {
        ok.fetch_add(1);
      }
    });
    std::ostringstream line;
    line << "sparse eps=" << format_rat(eps) << " n<=" << n_max
         << " pass=" << ok.load() << "/" << seeds;
    res.lines.push_back(line.str());
    res.passed += ok.load();
    res.total += seeds;
  }
  return res;
}

SuiteResult run_geometry_suite(i64 seeds) {
  SuiteResult res;
  res.name = "geometry";

  // (a) combine sigma-accuracy equals the rasterization oracle.
  Tally acc;
  parallel_for(seeds, [&](i64 seed) {
    Rng rng(static_cast<u64>(seed) * 31 + 7);
    for (i64 sigma : {i64{1}, i64{2}, i64{4}}) {
      MonotonePointSet a = random_mps(rng, 30, sigma);
      MonotonePointSet b = random_mps(rng, 30, sigma);
      LevelMinima got = combine_levels(a, b, sigma);
      LevelMinima want = raster_minkowski_levels(a, b, sigma);
      bool ok = got.k_lo == want.k_lo && got.k_hi == want.k_hi &&
                got.min_x == want.min_x;
      // The staircase itself must reproduce the same per-level minima.
      MonotonePointSet q = combine(a, b, sigma);
      LevelMinima again = sample_levels(q, sigma);
      ok = ok && again.k_lo == got.k_lo && again.min_x == got.min_x;
      acc.check(ok);
    }
  });
  res.lines.push_back("geometry combine-vs-raster pass=" +
                      std::to_string(acc.passed.load()) + "/" +
                      std::to_string(acc.total.load()));
  res.passed += acc.passed.load();
  res.total += acc.total.load();

  // (b) reduce properties and the F-generatability invariant chain under
  // exact Operation-2/3 interleavings with exactly tracked functions. The
  // exact sums live on rational coordinates; apexes stay integral.
  Tally chain;
  parallel_for(seeds, [&](i64 seed) {
    Rng rng(static_cast<u64>(seed) * 131 + 3);
    i64 delta = rng.uniform(1, 12);
    std::vector<std::pair<StepFn, RatMps>> pool;
    for (int i = 0; i < 3; ++i) {
      StepFn f = random_step_fn(rng, 5, 8, 6);
      pool.emplace_back(f, to_rat(contour_of(f)));
    }
    bool ok = true;
    for (int op = 0; op < 6 && ok; ++op) {
      if (pool.size() >= 2 && rng.coin()) {
        size_t i = static_cast<size_t>(
            rng.uniform(0, static_cast<i64>(pool.size()) - 1));
        size_t j = static_cast<size_t>(
            rng.uniform(0, static_cast<i64>(pool.size()) - 2));
        if (j >= i) ++j;
        StepFn f = maxplus_naive(pool[i].first, pool[j].first);
        RatMps v = minkowski_sum_exact(pool[i].second, pool[j].second);
        if (i < j) std::swap(i, j);
        pool.erase(pool.begin() + i);
        pool.erase(pool.begin() + j);
        pool.emplace_back(std::move(f), std::move(v));
      } else {
        size_t i = static_cast<size_t>(
            rng.uniform(0, static_cast<i64>(pool.size()) - 1));
        const RatMps& before = pool[i].second;
        RatMps after = reduce_r(before, delta);
        Rat range = before.pts.back().y - before.pts.front().y;
        i64 bound =
            2 * ceil_div(range.numerator(), range.denominator() * delta) + 3;
        ok = ok && region_contained(before, after);
        ok = ok && is_subset_points(after, before);
        ok = ok && convex_number_r(after) <=
                       std::min<i64>(convex_number_r(before), bound);
        for (PointLabel l : classify_r(after)) {
          ok = ok && l != PointLabel::kDegenerate;
        }
        pool[i].second = std::move(after);
      }
      // Lemma 4.7 invariants for every tracked pair.
      for (const auto& [f, p] : pool) {
        ok = ok && subtractive_ok(p, f, delta);
        auto labels = classify_r(p);
        for (size_t t = 0; t < p.pts.size(); ++t) {
          if (labels[t] != PointLabel::kApex) continue;
          // apexes of generatable sets are integral and exact on f
          if (p.pts[t].x.denominator() != 1 || p.pts[t].y.denominator() != 1) {
            ok = false;
            continue;
          }
          Val v = eval(f, p.pts[t].x.numerator());
          ok = ok && v && *v == p.pts[t].y.numerator();
        }
      }
    }
    chain.check(ok);
  });
  res.lines.push_back("geometry invariant-chain pass=" +
                      std::to_string(chain.passed.load()) + "/" +
                      std::to_string(chain.total.load()));
  res.passed += chain.passed.load();
  res.total += chain.total.load();

  // (c) every apex of an exact sum decomposes into apexes of the operands.
  Tally apex;
  parallel_for(seeds, [&](i64 seed) {
    Rng rng(static_cast<u64>(seed) * 59 + 11);
    RatMps a = to_rat(random_mps(rng, 12, 1));
    RatMps b = to_rat(random_mps(rng, 12, 1));
    RatMps v = minkowski_sum_exact(a, b);
    auto ca = classify_r(a);
    auto cb = classify_r(b);
    auto cv = classify_r(v);
    bool ok = true;
    for (size_t t = 0; t < v.pts.size(); ++t) {
      if (cv[t] != PointLabel::kApex) continue;
      bool found = false;
      for (size_t i = 0; i < a.pts.size() && !found; ++i) {
        if (ca[i] != PointLabel::kApex) continue;
        for (size_t j = 0; j < b.pts.size() && !found; ++j) {
          if (cb[j] != PointLabel::kApex) continue;
          found = a.pts[i].x + b.pts[j].x == v.pts[t].x &&
                  a.pts[i].y + b.pts[j].y == v.pts[t].y;
        }
      }
      ok = ok && found;
    }
    apex.check(ok);
  });
  res.lines.push_back("geometry apex-composition pass=" +
                      std::to_string(apex.passed.load()) + "/" +
                      std::to_string(apex.total.load()));
  res.passed += apex.passed.load();
  res.total += apex.total.load();

  // (d) no accumulation: the m-fold merged g stays delta-subtractive (not
  // m*delta) against the exact m-fold convolution.
  Tally noacc;
  parallel_for(seeds, [&](i64 seed) {
    Rng rng(static_cast<u64>(seed) * 271 + 17);
    i64 m = rng.uniform(2, 6);
    i64 delta = rng.uniform(1, 10);
    StepFn f_all = random_step_fn(rng, 4, 6, 5);
    RatMps v = reduce_r(to_rat(reduce(contour_of(f_all), delta)), delta);
    StepFn acc_f = f_all;
    for (i64 t = 1; t < m; ++t) {
      StepFn f = random_step_fn(rng, 4, 6, 5);
      RatMps p = to_rat(reduce(contour_of(f), delta));
      v = minkowski_sum_exact(v, p);
      acc_f = maxplus_naive(acc_f, f);
    }
    noacc.check(subtractive_ok(v, acc_f, delta));
  });
  res.lines.push_back("geometry no-accumulation pass=" +
                      std::to_string(noacc.passed.load()) + "/" +
                      std::to_string(noacc.total.load()));
  res.passed += noacc.passed.load();
  res.total += noacc.total.load();
  return res;
}

SuiteResult run_convolution_suite(i64 seeds) {
  SuiteResult res;
  res.name = "convolution";

  Tally smawk;
  parallel_for(seeds, [&](i64 seed) {
    Rng rng(static_cast<u64>(seed) * 911 + 5);
    i64 na = rng.uniform(1, 64), nb = rng.uniform(1, 64);
    std::vector<i64> a(na);
    a[0] = rng.uniform(-20, 20);
    i64 diff = rng.uniform(-5, 15);
    for (i64 i = 1; i < na; ++i) {
      a[i] = a[i - 1] + diff;
      diff -= rng.uniform(0, 3);  // non-increasing differences: concave
    }
    std::vector<Val> b(nb);
    for (i64 j = 0; j < nb; ++j) {
      if (rng.uniform(0, 4) == 0) continue;  // -inf entry
      b[j] = rng.uniform(-30, 30);
    }
    std::vector<Val> a_vals(a.begin(), a.end());
    smawk.check(smawk_concave_maxplus(a, b) == brute_maxplus_seq(a_vals, b));
  });
  res.lines.push_back("convolution smawk-vs-brute pass=" +
                      std::to_string(smawk.passed.load()) + "/" +
                      std::to_string(smawk.total.load()));
  res.passed += smawk.passed.load();
  res.total += smawk.total.load();

  Tally conv;
  parallel_for(seeds, [&](i64 seed) {
    Rng rng(static_cast<u64>(seed) * 733 + 29);
    i64 nx = rng.uniform(1, 64), ny = rng.uniform(1, 64);
    // phi: non-decreasing with non-increasing differences, occasionally
    // rational-valued (denominators as chord samplings produce).
    std::vector<Rat> phi(nx);
    i64 den = rng.uniform(1, 3);
    Rat x0(rng.uniform(0, 5));
    Rat d(rng.uniform(2 * den, 6 * den), den);
    phi[0] = x0;
    for (i64 i = 1; i < nx; ++i) {
      phi[i] = phi[i - 1] + d;
      d = std::max(Rat(0), d - Rat(rng.uniform(0, 2), den));
    }
    std::vector<Rat> gamma(ny);
    Rat y0(rng.uniform(0, 4));
    gamma[0] = y0;
    for (i64 j = 1; j < ny; ++j) {
      gamma[j] = gamma[j - 1] + Rat(rng.uniform(0, 5 * den), den);
    }
    conv.check(convolve_lower_block(phi, gamma) == brute_minplus_seq(phi, gamma));
  });
  res.lines.push_back("convolution lower-block-vs-brute pass=" +
                      std::to_string(conv.passed.load()) + "/" +
                      std::to_string(conv.total.load()));
  res.passed += conv.passed.load();
  res.total += conv.total.load();

  Tally classes;
  parallel_for(seeds, [&](i64 seed) {
    Rng rng(static_cast<u64>(seed) * 389 + 41);
    const i64 g = 8;  // grain 1/8
    Rat eps(1, g);
    i64 k = rng.uniform(1, 8);
    std::vector<UniformFn> cls;
    std::vector<StepFn> fns;
    i64 cap = g * rng.uniform(2, 20);
    for (i64 c = 0; c < k; ++c) {
      i64 p = rng.uniform(g, 2 * g - 1);
      std::vector<i64> ws;
      i64 cnt = rng.uniform(1, 6);
      for (i64 t = 0; t < cnt; ++t) ws.push_back(rng.uniform(1, 30));
      cls.push_back(build_class_function(ws, p, cap, eps));
      fns.push_back(uniform_to_step_fn(cls.back()));
    }
    StepFn exact = fns.front();
    for (size_t i = 1; i < fns.size(); ++i) exact = maxplus_naive(exact, fns[i]);
    exact = cap_values(exact, cap);
    StepFn got = merge_profit_classes(cls, cap, eps);
    classes.check(verify_approx(got, exact, eps, 0, std::nullopt));
  });
  res.lines.push_back("convolution class-merge pass=" +
                      std::to_string(classes.passed.load()) + "/" +
                      std::to_string(classes.total.load()));
  res.passed += classes.passed.load();
  res.total += classes.total.load();

  Tally dc;
  parallel_for(seeds, [&](i64 seed) {
    Rng rng(static_cast<u64>(seed) * 173 + 2);
    i64 m = rng.uniform(1, 16);
    Rat eps(1, rng.uniform(4, 12));
    std::vector<StepFn> fs;
    for (i64 i = 0; i < m; ++i) fs.push_back(random_step_fn(rng, 5, 10, 8));
    StepFn exact = fs.front();
    for (i64 i = 1; i < m; ++i) exact = maxplus_naive(exact, fs[i]);
    i64 cap = exact.steps.back().second + 1;
    StepFn got = merge_dc(fs, eps, cap);
    bool ok = verify_approx(got, exact, eps, 0, std::nullopt);
    // Complexity stays within the geometric-grid budget.
    double b_over_a = static_cast<double>(std::max<i64>(exact.steps.back().second, 2));
    int levels = m > 1 ? ilog2_ceil(m) : 1;
    double inv_eps = static_cast<double>(eps.denominator()) * levels;
    double bound = 2 * inv_eps + 4 * inv_eps * std::log(b_over_a) + 4;
    ok = ok && static_cast<double>(complexity(got)) <= bound;
    dc.check(ok);
  });
  res.lines.push_back("convolution merge-dc pass=" +
                      std::to_string(dc.passed.load()) + "/" +
                      std::to_string(dc.total.load()));
  res.passed += dc.passed.load();
  res.total += dc.total.load();
  return res;
}

}  // namespace knap
