#ifndef KNAPCORE_INSTANCE_HPP
#define KNAPCORE_INSTANCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "knapcore/numeric.hpp"

namespace knap {

// One item. `profit` counts whatever grain the surrounding context uses:
// original instances use grain 1 (integer profits); normalized
// sub-problems (profits that are multiples of eps in [1,2)) use grain eps,
// so profit is an integer in [1/eps, 2/eps).
struct Item {
  i64 profit = 0;
  i64 weight = 0;
};

struct Instance {
  std::vector<Item> items;
  i64 capacity = 0;
};

// Rejects instances whose coordinate sums would overflow the 2^62 width
// budget, and items with negative fields.
void check_instance(const Instance& inst);

struct LedgerEntry {
  std::string stage;
  Rat factor{1};     // multiplicative (1 - ...) factor this stage consumes
  Rat additive{0};   // additive slack in original profit units
};

// Result record of the end-to-end solver.
struct ApproxReport {
  Rat sol{0};                      // value in original profit units
  std::optional<bool> lower_ok;    // sol >= (1-eps)*reference, when known
  double elapsed = 0.0;            // seconds
  std::vector<LedgerEntry> budget_ledger;
  bool time_bound_void = false;    // n exceeded O(eps^-4); answer still valid
};

// Product of ledger factors; the solver guarantees it is >= 1 - eps.
Rat ledger_factor_product(const ApproxReport& r);

}  // namespace knap

#endif  // KNAPCORE_INSTANCE_HPP
