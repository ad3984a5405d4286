// Command-line interface: solve instances, run the seeded oracle suites,
// and emit benchmark CSV records.
//
// Exit codes: 0 success, 1 verification failure, 2 malformed input.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "knapcore/gen.hpp"
#include "knapcore/io.hpp"
#include "knapcore/oracles.hpp"
#include "knapcore/pipeline.hpp"
#include "knapcore/verify.hpp"

namespace {

using namespace knap;

int cmd_solve(const std::string& input, const std::string& eps_text,
              const std::string& algo, bool as_json) {
  Instance inst = load_instance(input);
  Rat eps = parse_rational(eps_text);
  if (algo == "exact") {
    auto opt = exact_dp(inst);
    if (!opt) {
      std::cerr << "exact oracle refused: instance exceeds the desk-scale guard\n";
      return 2;
    }
    if (as_json) {
      nlohmann::json j{{"algo", "exact"}, {"sol", *opt}, {"n", inst.items.size()}};
      std::cout << j.dump() << "\n";
    } else {
      std::cout << *opt << "\n";
    }
    return 0;
  }
  if (algo == "greedy") {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Item> usable;
    for (const Item& it : inst.items) {
      if (it.profit > 0 && it.weight <= inst.capacity) usable.push_back(it);
    }
    StepFn prof = greedy_profile(sort_by_unit_profit(usable), Rat(1));
    Val v = eval(prof, inst.capacity);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    i64 sol = v ? *v : 0;
    if (as_json) {
      nlohmann::json j{{"algo", "greedy"}, {"sol", sol}, {"elapsed_s", elapsed}};
      std::cout << j.dump() << "\n";
    } else {
      std::cout << sol << "\n";
    }
    return 0;
  }
  if (algo != "fptas") {
    std::cerr << "unknown algorithm: " << algo << "\n";
    return 2;
  }
  ApproxReport rep = knapsack_fptas(inst, eps);
  if (as_json) {
    nlohmann::json ledger = nlohmann::json::array();
    for (const auto& e : rep.budget_ledger) {
      ledger.push_back({{"stage", e.stage},
                        {"factor_num", e.factor.numerator()},
                        {"factor_den", e.factor.denominator()}});
    }
    nlohmann::json j{{"algo", "fptas"},
                     {"eps", format_rat(eps)},
                     {"sol", format_rat(rep.sol)},
                     {"sol_num", rep.sol.numerator()},
                     {"sol_den", rep.sol.denominator()},
                     {"elapsed_s", rep.elapsed},
                     {"time_bound_void", rep.time_bound_void},
                     {"ledger", ledger}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << format_rat(rep.sol) << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& eps_text, i64 seeds,
               i64 n_max) {
  std::vector<SuiteResult> results;
  Rat eps = parse_rational(eps_text);
  if (suite == "end2end" || suite == "all") {
    std::vector<Profile> profiles{
        Profile::kUniform, Profile::kManyDistinctProfits,
        Profile::kClusteredUnitProfit, Profile::kScaleSpread};
    results.push_back(run_end2end_suite(profiles, {eps}, seeds, n_max));
  }
  if (suite == "sparse" || suite == "all") {
    results.push_back(
        run_sparse_suite({Rat(1, 8), Rat(1, 16), Rat(1, 32)}, seeds,
                         std::min<i64>(n_max, 32)));
  }
  if (suite == "geometry" || suite == "all") {
    results.push_back(run_geometry_suite(seeds));
  }
  if (suite == "convolution" || suite == "all") {
    results.push_back(run_convolution_suite(seeds));
  }
  if (results.empty()) {
    std::cerr << "unknown suite: " << suite << "\n";
    return 2;
  }
  bool ok = true;
  for (const SuiteResult& r : results) {
    for (const std::string& line : r.lines) std::cout << line << "\n";
    ok = ok && r.ok();
  }
  return ok ? 0 : 1;
}

int cmd_bench(const std::string& eps_list_text, i64 reps, i64 seeds, i64 n,
              i64 max_w, const std::string& profile_name_text,
              const std::string& algo, const std::string& out_path) {
  std::vector<Rat> eps_list;
  {
    std::string cur;
    for (char ch : eps_list_text + ",") {
      if (ch == ',') {
        if (!cur.empty()) eps_list.push_back(parse_rational(cur));
        cur.clear();
      } else {
        cur += ch;
      }
    }
  }
  if (eps_list.empty()) {
    std::cerr << "empty --eps-list\n";
    return 2;
  }
  Profile profile = parse_profile(profile_name_text);
  std::vector<BenchRecord> records;
  for (const Rat& eps : eps_list) {
    for (i64 seed = 0; seed < seeds; ++seed) {
      Instance inst = gen_instance(static_cast<u64>(seed), profile, n, max_w);
      auto opt = exact_dp(inst);
      for (i64 rep = 0; rep < reps; ++rep) {
        BenchRecord rec;
        rec.algo = algo;
        rec.eps = eps;
        rec.n = n;
        rec.seed = static_cast<u64>(seed);
        if (algo == "fptas") {
          ApproxReport r = knapsack_fptas(inst, eps);
          rec.elapsed_s = r.elapsed;
          rec.sol = r.sol;
        } else if (algo == "greedy") {
          auto t0 = std::chrono::steady_clock::now();
          std::vector<Item> usable;
          for (const Item& it : inst.items) {
            if (it.profit > 0 && it.weight <= inst.capacity) usable.push_back(it);
          }
          Val v = eval(greedy_profile(sort_by_unit_profit(usable), Rat(1)),
                       inst.capacity);
          rec.elapsed_s = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
          rec.sol = Rat(v ? *v : 0);
        } else {
          std::cerr << "unknown algorithm: " << algo << "\n";
          return 2;
        }
        if (opt) {
          rec.opt = *opt;
          rec.ratio = *opt == 0 ? 1.0
                                : boost::rational_cast<double>(rec.sol) /
                                      static_cast<double>(*opt);
        }
        records.push_back(std::move(rec));
      }
    }
  }
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path, std::ios::binary);
    if (!file) {
      std::cerr << "cannot open " << out_path << "\n";
      return 2;
    }
    out = &file;
  }
  *out << bench_csv_header() << "\n";
  for (const BenchRecord& rec : records) *out << bench_csv_row(rec) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic knapsack approximation scheme"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "solve one instance file");
  std::string input, eps_text = "0.1", algo = "fptas";
  bool as_json = false;
  solve->add_option("--input", input, "instance file (text or JSON)")->required();
  solve->add_option("--eps", eps_text, "approximation parameter");
  solve->add_option("--algo", algo, "fptas|greedy|exact");
  solve->add_flag("--json", as_json, "emit a one-line JSON report");

  auto* verify = app.add_subcommand("verify", "run the seeded oracle suites");
  std::string suite = "all", veps = "0.1";
  i64 vseeds = 50, vn = 64;
  verify->add_option("--suite", suite, "end2end|sparse|geometry|convolution|all");
  verify->add_option("--eps", veps, "eps for the end-to-end suite");
  verify->add_option("--seeds", vseeds, "seeds per suite case");
  verify->add_option("--n", vn, "max instance size");

  auto* bench = app.add_subcommand("bench", "emit benchmark CSV records");
  std::string eps_list = "0.1", bprofile = "uniform", balgo = "fptas",
              out_path = "-";
  i64 reps = 3, bseeds = 1, bn = 100, bmax_w = 20000;
  bench->add_option("--eps-list", eps_list, "comma-separated eps values");
  bench->add_option("--reps", reps, "repetitions per case");
  bench->add_option("--seeds", bseeds, "instance seeds per eps");
  bench->add_option("--n", bn, "instance size");
  bench->add_option("--max-w", bmax_w, "max item weight");
  bench->add_option("--profile", bprofile, "instance profile");
  bench->add_option("--algo", balgo, "fptas|greedy");
  bench->add_option("--out", out_path, "output CSV path ('-' for stdout)");

  try {
    app.parse(argc, argv);
    if (solve->parsed()) return cmd_solve(input, eps_text, algo, as_json);
    if (verify->parsed()) return cmd_verify(suite, veps, vseeds, vn);
    if (bench->parsed()) {
      return cmd_bench(eps_list, reps, bseeds, bn, bmax_w, bprofile, balgo,
                       out_path);
    }
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
