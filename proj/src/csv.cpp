#include "csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>

#include "bebplan/error.hpp"

namespace bebplan::csv {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  Table t;
  t.name = path.filename().string();
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (!have_header) {
      t.header = fields;
      for (std::size_t i = 0; i < fields.size(); ++i) t.column[fields[i]] = i;
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw Error(ErrorCode::InvalidInput, t.name + " line " + std::to_string(line_no) + ": expected " +
                                               std::to_string(t.header.size()) + " fields, got " +
                                               std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(line_no);
  }
  if (!have_header) throw Error(ErrorCode::InvalidInput, t.name + ": missing header row");
  return t;
}

void Table::require(const std::vector<std::string>& required, std::vector<std::string>& warnings) const {
  for (const auto& col : required) {
    if (!column.count(col)) throw Error(ErrorCode::InvalidInput, name + ": missing required column '" + col + "'");
  }
  std::set<std::string> known(required.begin(), required.end());
  for (const auto& col : header) {
    if (!known.count(col)) warnings.push_back(name + ": ignoring unknown column '" + col + "'");
  }
}

std::string Table::where(std::size_t row) const {
  return name + " line " + std::to_string(line_numbers[row]);
}

const std::string& Table::cell(std::size_t row, const std::string& col) const {
  return rows[row][column.at(col)];
}

double Table::number(std::size_t row, const std::string& col) const {
  const std::string& s = cell(row, col);
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidInput, where(row) + ": '" + s + "' is not a number in column " + col);
}

int Table::integer(std::size_t row, const std::string& col) const {
  const std::string& s = cell(row, col);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::InvalidInput, where(row) + ": '" + s + "' is not an integer in column " + col);
  }
  return v;
}

bool Table::boolean(std::size_t row, const std::string& col) const {
  std::string s = cell(row, col);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw Error(ErrorCode::InvalidInput, where(row) + ": '" + s + "' is not a boolean in column " + col);
}

}  // namespace bebplan::csv
