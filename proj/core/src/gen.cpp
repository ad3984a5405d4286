#include "knapcore/gen.hpp"

#include <algorithm>
#include <stdexcept>

namespace knap {

Profile parse_profile(std::string_view name) {
  if (name == "uniform") return Profile::kUniform;
  if (name == "many-distinct-profits") return Profile::kManyDistinctProfits;
  if (name == "clustered-unit-profit") return Profile::kClusteredUnitProfit;
  if (name == "scale-spread") return Profile::kScaleSpread;
  throw std::invalid_argument("unknown profile: " + std::string(name));
}

std::string_view profile_name(Profile p) {
  switch (p) {
    case Profile::kUniform: return "uniform";
    case Profile::kManyDistinctProfits: return "many-distinct-profits";
    case Profile::kClusteredUnitProfit: return "clustered-unit-profit";
    case Profile::kScaleSpread: return "scale-spread";
  }
  throw std::logic_error("bad profile");
}

Instance gen_instance(u64 seed, Profile profile, i64 n, i64 max_w) {
  if (n < 0 || max_w < 1) throw std::invalid_argument("gen_instance: bad shape");
  Rng rng(seed * 4u + static_cast<u64>(profile));
  Instance inst;
  inst.items.reserve(n);
  switch (profile) {
    case Profile::kUniform:
      for (i64 i = 0; i < n; ++i) {
        inst.items.push_back({rng.uniform(1, 20'000), rng.uniform(1, max_w)});
      }
      break;
    case Profile::kManyDistinctProfits:
      // Profits spread over several powers of two with fine granularity, so
      // most survive the pipeline's per-group grid rounding as distinct
      // values and D(i) stays large.
      for (i64 i = 0; i < n; ++i) {
        inst.items.push_back({rng.uniform(8'192, 131'071), rng.uniform(1, max_w)});
      }
      break;
    case Profile::kClusteredUnitProfit: {
      // A few exact profit/weight ratios, each hit by many items: exercises
      // the cross-multiplication tie-breaks of the efficiency order.
      const int ratios = 5;
      std::vector<std::pair<i64, i64>> base;
      for (int r = 0; r < ratios; ++r) {
        base.emplace_back(rng.uniform(500, 1500), rng.uniform(1, 20));
      }
      for (i64 i = 0; i < n; ++i) {
        auto [a, b] = base[static_cast<size_t>(rng.uniform(0, ratios - 1))];
        i64 q = rng.uniform(1, std::max<i64>(1, std::min<i64>(50, max_w / b)));
        inst.items.push_back({q * a, q * b});
      }
      break;
    }
    case Profile::kScaleSpread:
      // Profits span >= 4 powers of two; weights may be large.
      for (i64 i = 0; i < n; ++i) {
        int j = static_cast<int>(rng.uniform(0, 5));
        i64 lo = i64{16} << j;
        inst.items.push_back({rng.uniform(lo, 2 * lo - 1), rng.uniform(1, max_w)});
      }
      break;
  }
  i64 sum_w = 0;
  for (const Item& it : inst.items) sum_w += it.weight;
  inst.capacity = rng.uniform(1, std::max<i64>(1, sum_w / 3));
  return inst;
}

}  // namespace knap
