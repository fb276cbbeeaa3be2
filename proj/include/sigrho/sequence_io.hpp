#pragma once

// JSON form of an intrinsic-volume sequence:
//
//   {"n_max": N, "log_mu": [[ln mu_1(0), ln mu_1(1)], ..., [ln mu_N(0), ..., ln mu_N(N)]]}
//
// -inf is written as the string "-inf".  Finite values are written in
// shortest round-trip form, so write -> read reproduces every bit.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigrho/numerics.hpp"
#include "sigrho/subconvolutive.hpp"

namespace sigrho::sequence_io {

inline constexpr const char* kNegInfToken = "-inf";

inline nlohmann::json to_json(const IntrinsicVolumeSequence& seq) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : seq.rows()) {
    nlohmann::json out_row = nlohmann::json::array();
    for (double v : row) {
      if (v == kNegInf) {
        out_row.push_back(kNegInfToken);
      } else {
        out_row.push_back(v);
      }
    }
    rows.push_back(std::move(out_row));
  }
  return nlohmann::json{{"n_max", seq.n_max()}, {"log_mu", std::move(rows)}};
}

inline IntrinsicVolumeSequence from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("n_max") || !doc.contains("log_mu")) {
    throw ValidationError("sequence JSON: expected an object with keys n_max and log_mu");
  }
  const auto& n_field = doc.at("n_max");
  if (!n_field.is_number_integer() || n_field.get<long long>() < 1) {
    throw ValidationError("sequence JSON: n_max must be a positive integer");
  }
  const auto n_max = n_field.get<long long>();
  const auto& log_mu = doc.at("log_mu");
  if (!log_mu.is_array() || static_cast<long long>(log_mu.size()) != n_max) {
    throw ValidationError("sequence JSON: log_mu must be an array of n_max rows");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(log_mu.size());
  for (const auto& row : log_mu) {
    if (!row.is_array()) {
      throw ValidationError("sequence JSON: each log_mu row must be an array");
    }
    std::vector<double> values;
    values.reserve(row.size());
    for (const auto& entry : row) {
      if (entry.is_number()) {
        values.push_back(entry.get<double>());
      } else if (entry.is_string() && entry.get<std::string>() == kNegInfToken) {
        values.push_back(kNegInf);
      } else {
        throw ValidationError("sequence JSON: entries must be numbers or the string \"-inf\"");
      }
    }
    rows.push_back(std::move(values));
  }
  // The constructor enforces row lengths, finiteness of the end entries and no NaN.
  return IntrinsicVolumeSequence(std::move(rows));
}

inline std::string write_string(const IntrinsicVolumeSequence& seq) { return to_json(seq).dump(); }

inline IntrinsicVolumeSequence read_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("sequence JSON: parse error: ") + e.what());
  }
  return from_json(doc);
}

inline IntrinsicVolumeSequence read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("sequence JSON: cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_string(buffer.str());
}

inline void write_file(const IntrinsicVolumeSequence& seq, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("sequence JSON: cannot write " + path);
  }
  out << write_string(seq) << '\n';
}

}  // namespace sigrho::sequence_io
