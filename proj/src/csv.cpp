#include "bootpls/csv.h"

#include "bootpls/errors.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bootpls {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line, const std::string& column) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    fail(ErrorKind::ParseError, "line " + std::to_string(line) + ", column '" + column +
                                    "': cannot parse '" + cell + "' as a finite number");
  }
  return v;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) fail(ErrorKind::ParseError, path.string() + ": missing header row");
  table.names = split(line);

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.names.size()) {
      fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(table.names.size()) + " cells, found " +
                                      std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) row[c] = parse_cell(cells[c], line_no, table.names[c]);
    rows.push_back(std::move(row));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(table.names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return table;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
  for (std::size_t c = 0; c < table.names.size(); ++c) out << (c ? "," : "") << table.names[c];
  out << '\n';
  char buf[32];
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), table.values(r, c), std::chars_format::general, 17);
      out << (c ? "," : "") << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
  if (!out) fail(ErrorKind::IoError, "error while writing " + path.string());
}

LoadedData load_csv(const std::filesystem::path& path, const std::string& response) {
  const CsvTable table = read_csv(path);
  LoadedData out;
  out.response_name = response;
  int ycol = -1;
  for (std::size_t c = 0; c < table.names.size(); ++c) {
    if (table.names[c] == response) ycol = static_cast<int>(c);
  }
  if (ycol < 0) fail(ErrorKind::MissingColumn, path.string() + ": no column named '" + response + "'");
  if (table.values.rows() < 2) fail(ErrorKind::InvalidArgument, path.string() + ": at least two rows are required");
  if (table.names.size() < 2) fail(ErrorKind::InvalidArgument, path.string() + ": no predictor column");

  out.x.resize(table.values.rows(), static_cast<Eigen::Index>(table.names.size()) - 1);
  Eigen::Index j = 0;
  for (std::size_t c = 0; c < table.names.size(); ++c) {
    if (static_cast<int>(c) == ycol) continue;
    out.x.col(j++) = table.values.col(static_cast<Eigen::Index>(c));
    out.predictor_names.push_back(table.names[c]);
  }
  out.y = table.values.col(ycol);
  return out;
}

void save_csv(const std::filesystem::path& path, const LoadedData& data) {
  CsvTable t;
  t.names = data.predictor_names;
  t.names.push_back(data.response_name);
  t.values.resize(data.x.rows(), data.x.cols() + 1);
  t.values.leftCols(data.x.cols()) = data.x;
  t.values.col(data.x.cols()) = data.y;
  write_csv(path, t);
}

}  // namespace bootpls
