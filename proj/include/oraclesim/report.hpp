// Emission helpers shared by the command layer: aligned text tables and a
// tab-separated machine format. Delimited output starts with '#' comment
// lines carrying the seed and version, then a header line, then rows.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace oraclesim {

inline constexpr const char* kVersion = "0.1.0";

enum class OutputFormat { text, delim };

struct Table {
    std::vector<std::string> comments;  // without the leading '#'
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
};

std::string render_text(const Table& t);
std::string render_delim(const Table& t);
std::string render(const Table& t, OutputFormat f);

// Parses delimited output back into a table (comments, header, rows).
Table parse_delim(const std::string& content);

std::string fmt_double(double x);      // fixed, six decimals
std::string fmt_opt_int(const std::optional<int>& v);
std::string fmt_opt_double(const std::optional<double>& v);

}  // namespace oraclesim
