#include "knapcore/step_fn.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace knap {

Rat parse_rational(std::string_view text) {
  auto parse_i64 = [](std::string_view s) -> i64 {
    i64 v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw std::invalid_argument("bad number: " + std::string(s));
    }
    return v;
  };
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    i64 num = parse_i64(text.substr(0, slash));
    i64 den = parse_i64(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rat(parse_i64(text), 1);
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (frac.size() > 18) throw std::invalid_argument("too many decimals");
  i64 w = whole.empty() ? 0 : parse_i64(whole);
  i64 f = frac.empty() ? 0 : parse_i64(frac);
  i64 den = 1;
  for (size_t i = 0; i < frac.size(); ++i) den *= 10;
  bool neg = !whole.empty() && whole[0] == '-';
  i64 num_abs = (neg ? -w : w) * den + f;
  return Rat(neg ? -num_abs : num_abs, den);
}

Rat rat_gcd(const Rat& a, const Rat& b) {
  if (a <= 0 || b <= 0) throw std::invalid_argument("rat_gcd domain");
  // gcd(p/q, r/s) = gcd(p*s, r*q) / (q*s), reduced.
  i128 n = std::gcd(i128(a.numerator()) * b.denominator(),
                    i128(b.numerator()) * a.denominator());
  i128 d = i128(a.denominator()) * b.denominator();
  i128 g = std::gcd(n, d);
  return Rat(checked_i64(n / g, "rat_gcd num"), checked_i64(d / g, "rat_gcd den"));
}

i64 exact_ratio(const Rat& a, const Rat& b) {
  Rat q = a / b;
  if (q.denominator() != 1 || q.numerator() <= 0) {
    throw std::invalid_argument("grains are not exactly nested");
  }
  return q.numerator();
}

StepFn make_step_fn(std::vector<std::pair<i64, i64>> steps, Rat grain,
                    bool right_extended, std::optional<i64> x_hi) {
  if (grain <= 0) throw std::invalid_argument("grain must be positive");
  if (steps.empty()) throw std::invalid_argument("step function needs >= 1 step");
  const i64 last_input_x = steps.back().first;
  StepFn f;
  f.grain = grain;
  f.right_extended = right_extended;
  f.steps.reserve(steps.size());
  for (const auto& [x, y] : steps) {
    check_width(x, "step x");
    check_width(y, "step y");
    if (!f.steps.empty()) {
      if (x <= f.steps.back().first) {
        throw std::invalid_argument("step x not strictly increasing");
      }
      if (y < f.steps.back().second) {
        throw std::invalid_argument("step y decreasing");
      }
      if (y == f.steps.back().second) continue;  // merge equal values
    }
    f.steps.emplace_back(x, y);
  }
  f.x_hi = x_hi.value_or(last_input_x);
  if (f.x_hi < f.steps.back().first) {
    throw std::invalid_argument("x_hi left of last step");
  }
  return f;
}

StepFn zero_step_fn(Rat grain) {
  return make_step_fn({{0, 0}}, grain, /*right_extended=*/true);
}

void validate(const StepFn& f) {
  if (f.steps.empty()) throw std::invalid_argument("empty step function");
  if (f.grain <= 0) throw std::invalid_argument("non-positive grain");
  for (size_t i = 1; i < f.steps.size(); ++i) {
    if (f.steps[i].first <= f.steps[i - 1].first) {
      throw std::invalid_argument("x not strictly increasing");
    }
    if (f.steps[i].second <= f.steps[i - 1].second) {
      throw std::invalid_argument("y not strictly increasing");
    }
  }
  if (f.x_hi < f.steps.back().first) throw std::invalid_argument("bad x_hi");
}

i64 complexity(const StepFn& f) { return static_cast<i64>(f.steps.size()); }

Val eval(const StepFn& f, i64 x) {
  if (f.steps.empty() || x < f.steps.front().first) return std::nullopt;
  if (x > f.x_hi && !f.right_extended) return std::nullopt;
  auto it = std::upper_bound(
      f.steps.begin(), f.steps.end(), x,
      [](i64 v, const std::pair<i64, i64>& s) { return v < s.first; });
  return std::prev(it)->second;
}

StepFn with_grain(const StepFn& f, const Rat& new_grain) {
  i64 q = exact_ratio(f.grain, new_grain);
  StepFn g = f;
  g.grain = new_grain;
  for (auto& [x, y] : g.steps) {
    (void)x;
    y = checked_i64(i128(y) * q, "with_grain");
  }
  return g;
}

StepFn cap_values(const StepFn& f, i64 cap) {
  std::vector<std::pair<i64, i64>> out;
  for (const auto& [x, y] : f.steps) {
    out.emplace_back(x, std::min(y, cap));
  }
  return make_step_fn(std::move(out), f.grain, f.right_extended, f.x_hi);
}

StepFn shift_values_clipped(const StepFn& f, i64 delta) {
  std::vector<std::pair<i64, i64>> out;
  for (const auto& [x, y] : f.steps) {
    out.emplace_back(x, std::max<i64>(0, y + delta));
  }
  return make_step_fn(std::move(out), f.grain, f.right_extended, f.x_hi);
}

StepFn round_down_geometric(const StepFn& f, const Rat& eps) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps outside (0,1)");
  // Find the least positive value A; zero and -inf are untouched.
  i64 A = 0;
  for (const auto& [x, y] : f.steps) {
    (void)x;
    if (y > 0) {
      A = y;
      break;
    }
  }
  if (A == 0) return f;  // no positive values
  const i64 en = eps.numerator(), ed = eps.denominator();
  // r -> floor(r / (1-eps)) = floor(r*ed / (ed-en)), growth forced by +1.
  auto next_rep = [&](i64 r) {
    return std::max(r + 1, floor_div(i128(r) * ed, ed - en));
  };
  std::vector<std::pair<i64, i64>> out;
  i64 rep = A;        // current representative
  i64 rep_next = next_rep(A);
  for (const auto& [x, y] : f.steps) {
    i64 v = y;
    if (v > 0) {
      while (rep_next <= v) {
        rep = rep_next;
        rep_next = next_rep(rep);
      }
      v = rep;  // largest representative <= y
    }
    out.emplace_back(x, v);
  }
  return make_step_fn(std::move(out), f.grain, f.right_extended, f.x_hi);
}

StepFn round_up_grid_grains(const StepFn& f, i64 sigma_grains) {
  if (sigma_grains <= 0) throw std::invalid_argument("sigma must be positive");
  std::vector<std::pair<i64, i64>> out;
  for (const auto& [x, y] : f.steps) {
    out.emplace_back(x, ceil_div(y, sigma_grains) * sigma_grains);
  }
  return make_step_fn(std::move(out), f.grain, f.right_extended, f.x_hi);
}

StepFn round_up_grid(const StepFn& f, const Rat& sigma) {
  // Rejects sigma that is not an exact multiple of the grain: rounding to
  // an incommensurable grid would break exact integer arithmetic.
  i64 q = exact_ratio(sigma, f.grain);
  return round_up_grid_grains(f, q);
}

StepFn pointwise_max(const std::vector<StepFn>& fs) {
  if (fs.empty()) return zero_step_fn(Rat(1));
  if (fs.size() == 1) return fs.front();
  const Rat grain = fs.front().grain;
  bool ext = true;
  i64 x_hi = fs.front().x_hi;
  std::set<i64> xs;
  for (const auto& f : fs) {
    if (f.grain != grain) throw std::invalid_argument("pointwise_max: grain mismatch");
    for (const auto& [x, y] : f.steps) {
      (void)y;
      xs.insert(x);
    }
    x_hi = std::max(x_hi, f.x_hi);
    ext = ext && f.right_extended;
  }
  std::vector<std::pair<i64, i64>> out;
  for (i64 x : xs) {
    Val best;
    for (const auto& f : fs) {
      Val v = eval(f, x);
      if (v && (!best || *v > *best)) best = v;
    }
    if (!best) continue;  // all -inf here
    if (!out.empty() && *best <= out.back().second) continue;
    out.emplace_back(x, *best);
  }
  return make_step_fn(std::move(out), grain, ext, x_hi);
}

bool verify_approx(const StepFn& ft, const StepFn& f, const Rat& delta,
                   i64 Delta, std::optional<i64> t) {
  if (ft.grain != f.grain) throw std::invalid_argument("verify_approx: grain mismatch");
  if (ft.steps.front().first != f.steps.front().first) {
    throw std::invalid_argument("verify_approx: mismatched domains");
  }
  if (delta < 0 || delta >= 1 || Delta < 0) {
    throw std::invalid_argument("verify_approx: bad parameters");
  }
  std::set<i64> xs;
  for (const auto& [x, y] : ft.steps) (void)y, xs.insert(x);
  for (const auto& [x, y] : f.steps) (void)y, xs.insert(x);
  const i64 dn = delta.numerator(), dd = delta.denominator();
  for (i64 x : xs) {
    Val a = eval(ft, x);
    Val b = eval(f, x);
    if (!b) {
      if (a) return false;  // ft finite where f is -inf
      continue;
    }
    if (!a) {
      // ft is -inf: upper bound holds trivially; the lower bound applies
      // only where f <= t.
      if (!t || *b <= *t) return false;
      continue;
    }
    if (*a > *b) return false;
    if (t && *b > *t) continue;
    // a >= (1-delta)*b - Delta  <=>  a*dd >= (dd-dn)*b - Delta*dd
    if (i128(*a) * dd < i128(dd - dn) * (*b) - i128(Delta) * dd) return false;
  }
  return true;
}

}  // namespace knap
