#pragma once

#include "polarcc/bounds.hpp"
#include "polarcc/codec.hpp"
#include "polarcc/tree.hpp"
#include "polarcc/universal.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace polarcc {

/// Numbers print with 15 significant digits throughout the text interfaces.
inline std::string fmt15(double v) { return detail::fmt_g15(v); }

namespace detail {

// Fields containing commas (mixture channel specs) are double-quoted.
inline std::string csv_field(const std::string& s) {
  if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

}  // namespace detail

// ---- writers ----------------------------------------------------------

inline void write_profile_csv(std::ostream& os, const TreeProfile& p) {
  os << "index,sigma,capacity,bhattacharyya\n";
  for (Eigen::Index i = 0; i < p.size(); ++i)
    os << i << ',' << TreeType(p.n, static_cast<std::uint64_t>(i)).bits() << ','
       << fmt15(p.capacity[i]) << ',' << fmt15(p.bhattacharyya[i]) << '\n';
}

inline void write_bounds_csv(std::ostream& os, const std::vector<BoundRow>& rows) {
  os << "n,upper,lower,upper_slack,lower_slack\n";
  for (const BoundRow& r : rows)
    os << r.n << ',' << fmt15(r.upper) << ',' << fmt15(r.lower) << ','
       << fmt15(r.upper_slack) << ',' << fmt15(r.lower_slack) << '\n';
}

inline nlohmann::json bounds_json(const std::vector<BoundRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const BoundRow& r : rows)
    arr.push_back({{"n", r.n},
                   {"upper", r.upper},
                   {"lower", r.lower},
                   {"upper_slack", r.upper_slack},
                   {"lower_slack", r.lower_slack}});
  return arr;
}

inline nlohmann::json profile_json(const TreeProfile& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i)
    arr.push_back({{"index", i},
                   {"sigma", TreeType(p.n, static_cast<std::uint64_t>(i)).bits()},
                   {"capacity", p.capacity[i]},
                   {"bhattacharyya", p.bhattacharyya[i]}});
  return arr;
}

inline nlohmann::json universal_json(double var_max, double chk_max, double bound,
                                     int m, double delta) {
  return {{"var_max", var_max},
          {"chk_max", chk_max},
          {"bound", bound},
          {"m", m},
          {"delta", delta}};
}

inline nlohmann::json construct_json(const CompoundCode& built) {
  return {{"n", built.code.n},
          {"indices", built.selection.indices},
          {"rate", built.selection.rate},
          {"union_bound", built.selection.union_bound}};
}

inline void write_sim_csv(std::ostream& os, const std::vector<SimReport>& reports) {
  os << "channel,N,rate,trials,block_errors,seed\n";
  for (const SimReport& r : reports)
    os << detail::csv_field(r.channel) << ',' << (std::uint32_t(1) << r.n) << ','
       << fmt15(r.rate) << ',' << r.trials << ',' << r.block_errors << ',' << r.seed
       << '\n';
}

inline void write_functionals_csv(std::ostream& os, const std::string& channel,
                                  const Functionals& f) {
  os << "channel,capacity,entropy,bhattacharyya\n";
  os << detail::csv_field(channel) << ',' << fmt15(f.capacity) << ',' << fmt15(f.entropy)
     << ',' << fmt15(f.bhattacharyya) << '\n';
}

struct FunctionalsRow {
  std::string channel;
  double capacity;
  double entropy;
  double bhattacharyya;
};

// ---- readers (round-trip counterparts of the writers) -----------------

inline std::vector<BoundRow> read_bounds_csv(std::istream& is) {
  std::vector<BoundRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = detail::split_csv_line(line);
    if (f.size() != 5) throw std::invalid_argument("bad bounds row: '" + line + "'");
    rows.push_back({std::stoi(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3]),
                    std::stod(f[4])});
  }
  return rows;
}

struct ProfileRow {
  std::uint64_t index;
  std::string sigma;
  double capacity;
  double bhattacharyya;
};

inline std::vector<ProfileRow> read_profile_csv(std::istream& is) {
  std::vector<ProfileRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = detail::split_csv_line(line);
    if (f.size() != 4) throw std::invalid_argument("bad profile row: '" + line + "'");
    rows.push_back({std::stoull(f[0]), f[1], std::stod(f[2]), std::stod(f[3])});
  }
  return rows;
}

struct SimRow {
  std::string channel;
  std::uint32_t block_length;
  double rate;
  std::uint64_t trials;
  std::uint64_t block_errors;
  std::uint64_t seed;
};

inline std::vector<FunctionalsRow> read_functionals_csv(std::istream& is) {
  std::vector<FunctionalsRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = detail::split_csv_line(line);
    if (f.size() != 4) throw std::invalid_argument("bad functionals row: '" + line + "'");
    rows.push_back({f[0], std::stod(f[1]), std::stod(f[2]), std::stod(f[3])});
  }
  return rows;
}

inline std::vector<SimRow> read_sim_csv(std::istream& is) {
  std::vector<SimRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = detail::split_csv_line(line);
    if (f.size() != 6) throw std::invalid_argument("bad simulation row: '" + line + "'");
    rows.push_back({f[0], static_cast<std::uint32_t>(std::stoul(f[1])), std::stod(f[2]),
                    std::stoull(f[3]), std::stoull(f[4]), std::stoull(f[5])});
  }
  return rows;
}

}  // namespace polarcc
