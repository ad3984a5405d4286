#ifndef KNAPCORE_IO_HPP
#define KNAPCORE_IO_HPP

#include <optional>
#include <string>
#include <string_view>

#include "knapcore/instance.hpp"

namespace knap {

// Text format: first line "n W", then n lines "p w" (decimal integers).
// JSON alternative: {"capacity": W, "items": [{"p": .., "w": ..}, ...]},
// detected by a leading '{'. Throws std::invalid_argument on malformed
// input.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);
std::string serialize_instance(const Instance& inst);
std::string serialize_instance_json(const Instance& inst);

struct BenchRecord {
  std::string algo;
  Rat eps{0};
  i64 n = 0;
  u64 seed = 0;
  double elapsed_s = 0.0;
  Rat sol{0};
  std::optional<i64> opt;        // empty when the oracle refused
  std::optional<double> ratio;   // sol/opt
};

std::string bench_csv_header();
std::string bench_csv_row(const BenchRecord& rec);

// Deterministic decimal rendering used in CSV/JSON output.
std::string format_double(double v);
std::string format_rat(const Rat& r);

}  // namespace knap

#endif  // KNAPCORE_IO_HPP
