#pragma once

// Minimal reader for the header-row CSV files the dataset uses: comma
// separated, no quoting, surrounding whitespace trimmed.

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace bebplan::csv {

struct Table {
  std::string name;  // file name, for error messages
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
  std::unordered_map<std::string, std::size_t> column;

  // Throws InvalidInput when a required column is missing; unknown columns
  // are reported through `warnings`.
  void require(const std::vector<std::string>& required, std::vector<std::string>& warnings) const;
  const std::string& cell(std::size_t row, const std::string& col) const;
  double number(std::size_t row, const std::string& col) const;
  int integer(std::size_t row, const std::string& col) const;
  bool boolean(std::size_t row, const std::string& col) const;
  std::string where(std::size_t row) const;
};

Table read(const std::filesystem::path& path);

}  // namespace bebplan::csv
