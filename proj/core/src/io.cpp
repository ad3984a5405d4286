#include "knapcore/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace knap {

namespace {

Instance parse_instance_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Instance inst;
  inst.capacity = j.at("capacity").get<i64>();
  for (const auto& item : j.at("items")) {
    inst.items.push_back({item.at("p").get<i64>(), item.at("w").get<i64>()});
  }
  check_instance(inst);
  return inst;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    throw std::invalid_argument("empty instance file");
  }
  if (text[first] == '{') {
    try {
      return parse_instance_json(text);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("bad JSON instance: ") + e.what());
    }
  }
  std::istringstream in{std::string(text)};
  i64 n = 0;
  Instance inst;
  if (!(in >> n >> inst.capacity) || n < 0) {
    throw std::invalid_argument("bad instance header");
  }
  inst.items.reserve(n);
  for (i64 i = 0; i < n; ++i) {
    Item it;
    if (!(in >> it.profit >> it.weight)) {
      throw std::invalid_argument("bad item line");
    }
    inst.items.push_back(it);
  }
  check_instance(inst);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << inst.items.size() << ' ' << inst.capacity << '\n';
  for (const Item& it : inst.items) {
    out << it.profit << ' ' << it.weight << '\n';
  }
  return out.str();
}

std::string serialize_instance_json(const Instance& inst) {
  nlohmann::json j;
  j["capacity"] = inst.capacity;
  j["items"] = nlohmann::json::array();
  for (const Item& it : inst.items) {
    j["items"].push_back({{"p", it.profit}, {"w", it.weight}});
  }
  return j.dump();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_rat(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return format_double(static_cast<double>(r.numerator()) /
                       static_cast<double>(r.denominator()));
}

std::string bench_csv_header() {
  return "algo,eps,n,seed,elapsed_s,sol,opt,ratio";
}

std::string bench_csv_row(const BenchRecord& rec) {
  std::ostringstream out;
  out << rec.algo << ',' << format_rat(rec.eps) << ',' << rec.n << ','
      << rec.seed << ',';
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", rec.elapsed_s);
  out << buf << ',' << format_rat(rec.sol) << ',';
  if (rec.opt) out << *rec.opt;
  out << ',';
  if (rec.ratio) out << format_double(*rec.ratio);
  return out.str();
}

}  // namespace knap
