#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dlas::io {

/// Shortest round-trip decimal text for a double; deterministic across runs.
std::string format_double(double x);

std::uint64_t fnv1a(std::string_view s);

void write_text_file(const std::filesystem::path& p, const std::string& content);

std::string read_text_file(const std::filesystem::path& p);

/// Comma-separated row writer; fields are pre-formatted.
class CsvWriter {
public:
    explicit CsvWriter(char sep = ',') : sep_(sep) {}
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& fields);
    const std::string& text() const { return out_; }

private:
    char sep_;
    std::string out_;
};

/// One column of doubles from a CSV file (header row optional; the column is
/// selected by name when a header is present, else by index).
std::vector<double> read_csv_column(const std::filesystem::path& p, const std::string& column);

} // namespace dlas::io
