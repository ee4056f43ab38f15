#include "dlas/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dlas/common.hpp"

namespace dlas::io {

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) throw SimulationError("number formatting failed");
    return std::string(buf, end);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_text_file(const std::filesystem::path& p, const std::string& content) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + p.string());
    f << content;
}

std::string read_text_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot read " + p.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void CsvWriter::header(const std::vector<std::string>& cols) { row(cols); }

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ += sep_;
        out_ += fields[i];
    }
    out_ += '\n';
}

std::vector<double> read_csv_column(const std::filesystem::path& p, const std::string& column) {
    std::ifstream f(p);
    if (!f) throw ConfigError("cannot read " + p.string());
    std::string line;
    if (!std::getline(f, line)) throw ConfigError("empty csv: " + p.string());
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    };
    auto first = split(line);
    int col = -1;
    bool header_present = false;
    for (std::size_t i = 0; i < first.size(); ++i) {
        double v;
        auto res = std::from_chars(first[i].data(), first[i].data() + first[i].size(), v);
        if (res.ec != std::errc{} || res.ptr != first[i].data() + first[i].size()) {
            header_present = true;
            if (first[i] == column) col = static_cast<int>(i);
        }
    }
    std::vector<double> out;
    if (!header_present) {
        try {
            col = std::stoi(column);
        } catch (...) {
            col = 0;
        }
        auto fields = first;
        if (col < static_cast<int>(fields.size()))
            out.push_back(std::stod(fields[static_cast<std::size_t>(col)]));
    } else if (col < 0) {
        throw ConfigError("column '" + column + "' not found in " + p.string());
    }
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto fields = split(line);
        if (col >= 0 && col < static_cast<int>(fields.size()))
            out.push_back(std::stod(fields[static_cast<std::size_t>(col)]));
    }
    return out;
}

} // namespace dlas::io
