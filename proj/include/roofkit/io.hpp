#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>

#include <json.hpp>

#include "roofkit/roof.hpp"

namespace roofkit {

/// Text matrix format: first non-comment line holds d, then d rows of d
/// whitespace-separated entries `re`, `re+imj`, `re-imj` or `imj`. Everything
/// after `#` on a line is ignored. Throws ParseError on malformed input.
Eigen::MatrixXcd parse_matrix(std::istream& in);
Eigen::MatrixXcd parse_matrix(const std::string& text);
Eigen::MatrixXcd read_matrix_file(const std::string& path);

/// Round-trip exact writer for the same format (17 significant digits).
std::string format_matrix(const Eigen::MatrixXcd& m);

std::string format_complex(std::complex<double> z);

/// FNV-1a 64-bit hash of the dimension and the raw entry bytes, as 16 hex digits.
std::string fingerprint(const Eigen::MatrixXcd& m);
std::string fingerprint(const std::string& bytes);

/// Provenance plus results of one CLI invocation. Wall time is kept out of
/// the serialized form so that identical runs produce identical files.
struct RunRecord {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::string input_fingerprint;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
  std::string version;
  double wall_time_s = 0;

  bool operator==(const RunRecord& other) const;
};

nlohmann::ordered_json to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::ordered_json& j);

std::string library_version();

}  // namespace roofkit
