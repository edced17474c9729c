#include "gsvt/matrix_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>

#include "gsvt/errors.hpp"

namespace gsvt {

namespace {

std::vector<double> split_numbers(const std::string& line, std::size_t line_no) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string_view field(line.data() + start,
                           (comma == std::string::npos ? line.size() : comma) - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    double v = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc() || ptr != end) {
      throw DataError("csv line " + std::to_string(line_no) + ": bad number '" +
                      std::string(field) + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class F>
void for_each_line(std::istream& in, F&& f) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    f(split_numbers(line, line_no), line_no);
  }
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Matrix parse_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  for_each_line(in, [&](std::vector<double> values, std::size_t line_no) {
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw DataError("csv line " + std::to_string(line_no) + ": expected " +
                      std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(values));
  });
  if (rows.empty()) throw DataError("matrix csv is empty");
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format(m(r, c));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_matrix_csv(out, m);
}

std::vector<ObservedEntry> parse_entries_csv(std::istream& in) {
  std::vector<ObservedEntry> entries;
  for_each_line(in, [&](const std::vector<double>& v, std::size_t line_no) {
    if (v.size() != 3) {
      throw DataError("csv line " + std::to_string(line_no) + ": expected row,col,value");
    }
    const auto r = static_cast<Eigen::Index>(v[0]);
    const auto c = static_cast<Eigen::Index>(v[1]);
    if (static_cast<double>(r) != v[0] || static_cast<double>(c) != v[1] || r < 0 || c < 0) {
      throw DataError("csv line " + std::to_string(line_no) +
                      ": row and col must be nonnegative integers");
    }
    entries.push_back({r, c, v[2]});
  });
  return entries;
}

std::vector<ObservedEntry> read_entries_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_entries_csv(in);
}

void write_entries_csv(std::ostream& out, const std::vector<ObservedEntry>& entries) {
  for (const auto& e : entries) out << e.row << ',' << e.col << ',' << format(e.value) << '\n';
}

void write_entries_csv(const std::filesystem::path& path,
                       const std::vector<ObservedEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_entries_csv(out, entries);
}

}  // namespace gsvt
