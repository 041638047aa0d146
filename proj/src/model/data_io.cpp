#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <string>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/model/model.hpp"

namespace entropy_lab::model {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return trim(hash == std::string::npos ? line : line.substr(0, hash));
}

double parse_number(const std::string& token, const std::string& source, std::size_t line) {
  const std::string t = trim(token);
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(value)) {
    throw InputError(source + ":" + std::to_string(line) + ": not a finite number: '" + t + "'");
  }
  return value;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

}  // namespace

std::vector<double> read_column(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    values.push_back(parse_number(body, source, number));
  }
  return values;
}

std::vector<double> read_column_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_column(in, path);
}

TwoSampleData read_two_column_csv(std::istream& in, const std::string& source) {
  TwoSampleData data;
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    const auto comma = body.find(',');
    if (comma == std::string::npos || body.find(',', comma + 1) != std::string::npos) {
      throw InputError(source + ":" + std::to_string(number) + ": expected two comma-separated fields");
    }
    if (!header_seen) {
      if (trim(body.substr(0, comma)) != "sample1" || trim(body.substr(comma + 1)) != "sample2") {
        throw InputError(source + ":" + std::to_string(number) +
                         ": header must be 'sample1,sample2'");
      }
      header_seen = true;
      continue;
    }
    data.sample1.push_back(parse_number(body.substr(0, comma), source, number));
    data.sample2.push_back(parse_number(body.substr(comma + 1), source, number));
  }
  if (!header_seen) throw InputError(source + ": empty file");
  return data;
}

TwoSampleData read_two_column_csv_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_two_column_csv(in, path);
}

}  // namespace entropy_lab::model
