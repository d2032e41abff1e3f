#include <charconv>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <ostream>

#include "fbm2d/cli.hpp"

#ifndef FBM2D_VERSION
#define FBM2D_VERSION "dev"
#endif

namespace fbm2d::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_double(*d);
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  return csv_escape(std::get<std::string>(c));
}

}  // namespace

std::vector<std::pair<std::string, std::string>> base_meta(const RunConfig& c) {
  const auto& p = c.params;
  return {{"command", c.command},
          {"h1", format_double(p.h1)},
          {"h2", format_double(p.h2)},
          {"rho", format_double(p.rho)},
          {"sigma1", format_double(p.sigma1)},
          {"sigma2", format_double(p.sigma2)},
          {"variant", std::string(to_string(p.variant))},
          {"n", std::to_string(c.n)},
          {"num_traj", std::to_string(c.num_traj)},
          {"delta", format_double(c.delta)},
          {"seed", std::to_string(c.seed)},
          {"version", FBM2D_VERSION}};
}

void write_csv(std::ostream& os, const Table& t) {
  os << "# schema: " << t.schema << '\n';
  for (const auto& [k, v] : t.meta) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json j;
  j["schema"] = t.schema;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.meta) meta[k] = v;
  j["meta"] = meta;
  j["columns"] = t.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (auto d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) r.push_back(*d);
        else r.push_back(nullptr);
      } else if (auto i = std::get_if<long long>(&c)) {
        r.push_back(*i);
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  os << j.dump(1) << '\n';
}

void write_table(std::ostream& os, const Table& t, Format f) {
  if (f == Format::CSV) write_csv(os, t);
  else write_json(os, t);
}

}  // namespace fbm2d::cli
