#ifndef KNAPCORE_GEN_HPP
#define KNAPCORE_GEN_HPP

#include <string_view>

#include "knapcore/instance.hpp"

namespace knap {

// Instance profiles. They stress, in order: the generic path, the D(i)
// diversity machinery (many distinct profit values survive rounding),
// unit-profit sorting tie-breaks (exact ratio ties), and the band
// decomposition (profits spanning several powers of two).
enum class Profile {
  kUniform,
  kManyDistinctProfits,
  kClusteredUnitProfit,
  kScaleSpread,
};

Profile parse_profile(std::string_view name);
std::string_view profile_name(Profile p);

// Deterministic for a fixed (seed, profile, n, max_w).
Instance gen_instance(u64 seed, Profile profile, i64 n, i64 max_w);

}  // namespace knap

#endif  // KNAPCORE_GEN_HPP
