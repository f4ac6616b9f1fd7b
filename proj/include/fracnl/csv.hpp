#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fracnl {

/// Shortest-safe decimal text for a double: 17 significant digits, '.' separator.
std::string format_double(double v);

/// Comma-separated writer with a fixed header row. Numbers are written with 17
/// significant digits so they parse back to the same double.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(std::span<const double> values);
    void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }
    /// Row whose first cell is a text label.
    void labeled_row(const std::string& label, std::span<const double> values);

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

/// Minimal reader for the files CsvWriter produces (numeric cells only).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace fracnl
