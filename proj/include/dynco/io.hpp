#ifndef DYNCO_IO_HPP
#define DYNCO_IO_HPP

// Channel files and built-in channel names.
//
// File format: {"dim_in": n, "dim_out": m, "kraus": [K_1, ...]} with each K
// an m x n nested array of [re, im] pairs.
// Built-ins: hadamard, qft:<d>, mix:hadamard:<p1>, swap:<dA>:<dB>,
// identity:<d>, dephasing:<d>.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynco/channels.hpp"

namespace dynco {

/// Malformed input text (bad number, bad JSON, unknown URI scheme).
class ParseError : public Error {
 public:
  using Error::Error;
};

inline double parse_real(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first < last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) throw ParseError(what + ": '" + text + "' is not a number");
  return v;
}

inline long long parse_integer(const std::string& text, const std::string& what) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(what + ": '" + text + "' is not an integer");
  }
  return v;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

inline std::vector<double> parse_real_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_real(p, what));
  if (out.empty()) throw ParseError(what + ": empty list");
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw DimensionError("channel file: Kraus operator must have " + std::to_string(rows) + " rows");
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw DimensionError("channel file: Kraus operator rows must have " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ParseError("channel file: matrix entries must be [re, im] number pairs");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

inline nlohmann::json channel_to_json(const Channel& ch) {
  nlohmann::json j;
  j["dim_in"] = ch.dim_in();
  j["dim_out"] = ch.dim_out();
  j["kraus"] = nlohmann::json::array();
  for (const auto& k : to_kraus(ch).operators) j["kraus"].push_back(matrix_to_json(k));
  return j;
}

/// Parsed Kraus data, not yet checked for trace preservation.
inline LinearMap map_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim_in") || !j.contains("dim_out") || !j.contains("kraus")) {
    throw ParseError("channel file: expected an object with dim_in, dim_out and kraus");
  }
  if (!j["dim_in"].is_number_integer() || !j["dim_out"].is_number_integer() || !j["kraus"].is_array()) {
    throw ParseError("channel file: dim_in and dim_out must be integers and kraus an array");
  }
  const auto din = j["dim_in"].get<long long>();
  const auto dout = j["dim_out"].get<long long>();
  if (din < 1 || dout < 1) throw DimensionError("channel file: dimensions must be >= 1");
  if (j["kraus"].empty()) throw ValidationError("channel file: no Kraus operators");
  std::vector<ComplexMatrix> ops;
  for (const auto& k : j["kraus"]) ops.push_back(matrix_from_json(k, dout, din));
  for (const auto& k : ops) {
    if (!all_finite(k)) throw ValidationError("channel file: non-finite Kraus entry");
  }
  return LinearMap(din, dout, choi_from_kraus(ops));
}

// ---------------------------------------------------------------------------
// URIs

inline Eigen::Index parse_dimension(const std::string& text, const std::string& what) {
  const long long d = parse_integer(text, what);
  if (d < 1 || d > 64) throw ValidationError(what + ": dimension must be in [1, 64]");
  return static_cast<Eigen::Index>(d);
}

/// Built-in name or path to a channel file. Returns the map without the CPTP check.
inline LinearMap resolve_map(const std::string& uri) {
  const auto parts = split(uri, ':');
  if (uri == "hadamard") return hadamard();
  if (!parts.empty() && parts.size() == 2 && parts[0] == "qft") return qft(parse_dimension(parts[1], "qft"));
  if (parts.size() == 2 && parts[0] == "identity") return identity_channel(parse_dimension(parts[1], "identity"));
  if (parts.size() == 2 && parts[0] == "dephasing") return dephasing(parse_dimension(parts[1], "dephasing"));
  if (parts.size() == 3 && parts[0] == "swap") {
    return swap(parse_dimension(parts[1], "swap"), parse_dimension(parts[2], "swap"));
  }
  if (parts.size() == 3 && parts[0] == "mix" && parts[1] == "hadamard") {
    return hadamard_mixture(parse_real(parts[2], "mix:hadamard"));
  }
  std::ifstream in(uri);
  if (!in) {
    if (parts.size() > 1 && (parts[0] == "qft" || parts[0] == "swap" || parts[0] == "mix" || parts[0] == "identity" ||
                             parts[0] == "dephasing")) {
      throw ParseError("channel: malformed built-in '" + uri + "'");
    }
    throw ValidationError("channel: '" + uri + "' is neither a built-in name nor a readable file");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("channel file '" + uri + "': " + e.what());
  }
  return map_from_json(j);
}

inline Channel resolve_channel(const std::string& uri) { return Channel(resolve_map(uri)); }

}  // namespace dynco

#endif  // DYNCO_IO_HPP
