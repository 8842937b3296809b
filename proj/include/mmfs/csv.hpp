#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mmfs {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Strict CSV reader: every row must match the header width. Errors name the
/// file and line.
CsvTable read_csv(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Parses a numeric cell; errors name the file, line and column.
double parse_numeric(const std::string& cell, const std::filesystem::path& file, std::size_t line,
                     const std::string& column);

/// Flat key = value file with '#' comments. Duplicate keys keep file order.
std::vector<std::pair<std::string, std::string>> read_kv_file(const std::filesystem::path& path);

void write_kv_file(const std::filesystem::path& path,
                   const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace mmfs
