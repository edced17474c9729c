#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

#include "gsvt/completion.hpp"

namespace gsvt {

/// Dense matrix CSV: one row per line, comma-separated, no header.
Matrix parse_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// Observation CSV: `row,col,value` per line, 0-based indices.
std::vector<ObservedEntry> parse_entries_csv(std::istream& in);
std::vector<ObservedEntry> read_entries_csv(const std::filesystem::path& path);
void write_entries_csv(std::ostream& out, const std::vector<ObservedEntry>& entries);
void write_entries_csv(const std::filesystem::path& path,
                       const std::vector<ObservedEntry>& entries);

}  // namespace gsvt
