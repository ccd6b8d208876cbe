#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace bootpls {

/// Numeric table with a header row.
struct CsvTable {
  std::vector<std::string> names;
  Eigen::MatrixXd values;  // rows x names.size()
};

/// Reads a comma-separated numeric file. Throws ParseError naming the line
/// and column of the first malformed cell, IoError when the file cannot be
/// read.
CsvTable read_csv(const std::filesystem::path& path);

/// Writes with 17 significant digits, so values survive a round trip exactly.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Predictors and response split out of a table.
struct LoadedData {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<std::string> predictor_names;
  std::string response_name;
};

/// Throws MissingColumn when `response` is not a column and InvalidArgument
/// for fewer than two rows or no predictor column.
LoadedData load_csv(const std::filesystem::path& path, const std::string& response);

void save_csv(const std::filesystem::path& path, const LoadedData& data);

}  // namespace bootpls
