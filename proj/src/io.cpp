#include "roofkit/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace roofkit {

namespace {

double parse_real(std::string_view s, const std::string& token) {
  if (s.empty()) throw Error(ErrorKind::ParseError, "malformed entry '" + token + "'");
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::ParseError, "malformed entry '" + token + "'");
  }
  return v;
}

std::complex<double> parse_entry(const std::string& token) {
  std::string_view s(token);
  if (s.back() != 'j') return {parse_real(s, token), 0.0};
  s.remove_suffix(1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) {
    if (s.empty() || s == "+" || s == "-") throw Error(ErrorKind::ParseError, "malformed entry '" + token + "'");
    return {0.0, parse_real(s, token)};
  }
  std::string_view im = s.substr(split);
  if (im == "+" || im == "-") throw Error(ErrorKind::ParseError, "malformed entry '" + token + "'");
  return {parse_real(s.substr(0, split), token), parse_real(im, token)};
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line.substr(0, line.find('#')));
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Eigen::MatrixXcd parse_matrix(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    auto t = tokens_of(line);
    if (!t.empty()) rows.push_back(std::move(t));
  }
  if (rows.empty()) throw Error(ErrorKind::ParseError, "empty matrix file");
  if (rows.front().size() != 1) throw Error(ErrorKind::ParseError, "first line must hold the dimension only");
  long d = 0;
  const std::string& head = rows.front().front();
  const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), d);
  if (ec != std::errc() || ptr != head.data() + head.size() || d <= 0) {
    throw Error(ErrorKind::ParseError, "invalid dimension '" + head + "'");
  }
  if (static_cast<long>(rows.size()) - 1 != d) {
    throw Error(ErrorKind::ParseError, "expected " + std::to_string(d) + " rows, found " +
                                           std::to_string(rows.size() - 1));
  }
  Eigen::MatrixXcd m(d, d);
  for (long r = 0; r < d; ++r) {
    const auto& row = rows[r + 1];
    if (static_cast<long>(row.size()) != d) {
      throw Error(ErrorKind::ParseError, "row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                                             " entries, expected " + std::to_string(d));
    }
    for (long c = 0; c < d; ++c) m(r, c) = parse_entry(row[c]);
  }
  return m;
}

Eigen::MatrixXcd parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix(in);
}

Eigen::MatrixXcd read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  return parse_matrix(in);
}

std::string format_complex(std::complex<double> z) {
  if (z.imag() == 0 && !std::signbit(z.imag())) return format_real(z.real());
  std::string im = format_real(z.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_real(z.real()) + im + "j";
}

std::string format_matrix(const Eigen::MatrixXcd& m) {
  std::string out = std::to_string(m.rows()) + "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += format_complex(m(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string fingerprint(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fingerprint(const Eigen::MatrixXcd& m) {
  std::string bytes(sizeof(std::int64_t), '\0');
  const std::int64_t d = m.rows();
  std::memcpy(bytes.data(), &d, sizeof d);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double parts[2] = {m(r, c).real(), m(r, c).imag()};
      bytes.append(reinterpret_cast<const char*>(parts), sizeof parts);
    }
  }
  return fingerprint(bytes);
}

bool RunRecord::operator==(const RunRecord& other) const {
  return command == other.command && config == other.config && input_fingerprint == other.input_fingerprint &&
         outputs == other.outputs && version == other.version;
}

nlohmann::ordered_json to_json(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["version"] = r.version;
  j["input_fingerprint"] = r.input_fingerprint;
  j["config"] = r.config;
  j["outputs"] = r.outputs;
  return j;
}

RunRecord run_record_from_json(const nlohmann::ordered_json& j) {
  try {
    RunRecord r;
    r.command = j.at("command").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.input_fingerprint = j.at("input_fingerprint").get<std::string>();
    r.config = j.at("config");
    r.outputs = j.at("outputs");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("run record: ") + e.what());
  }
}

std::string library_version() { return ROOFKIT_VERSION; }

}  // namespace roofkit
