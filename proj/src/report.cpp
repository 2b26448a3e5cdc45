#include "oraclesim/report.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace oraclesim {

void Table::add_row(std::vector<std::string> row) {
    if (row.size() != header.size()) {
        throw std::logic_error(fmt::format("row with {} fields, header has {}",
                                           row.size(), header.size()));
    }
    rows.push_back(std::move(row));
}

std::string render_text(const Table& t) {
    std::string out;
    for (const std::string& c : t.comments) out += fmt::format("# {}\n", c);
    std::vector<size_t> width(t.header.size(), 0);
    for (size_t i = 0; i < t.header.size(); ++i) width[i] = t.header[i].size();
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            width[i] = std::max(width[i], row[i].size());
        }
    }
    auto line = [&](const std::vector<std::string>& row) {
        std::string s;
        for (size_t i = 0; i < row.size(); ++i) {
            s += fmt::format("{:<{}}", row[i], width[i] + (i + 1 < row.size() ? 2 : 0));
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        return s + "\n";
    };
    out += line(t.header);
    for (const auto& row : t.rows) out += line(row);
    return out;
}

std::string render_delim(const Table& t) {
    std::string out;
    for (const std::string& c : t.comments) out += fmt::format("# {}\n", c);
    auto line = [](const std::vector<std::string>& row) {
        std::string s;
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) s += '\t';
            s += row[i];
        }
        return s + "\n";
    };
    out += line(t.header);
    for (const auto& row : t.rows) out += line(row);
    return out;
}

std::string render(const Table& t, OutputFormat f) {
    return f == OutputFormat::text ? render_text(t) : render_delim(t);
}

Table parse_delim(const std::string& content) {
    Table t;
    std::istringstream in(content);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            size_t start = line.find_first_not_of("# ");
            t.comments.push_back(start == std::string::npos ? "" : line.substr(start));
            continue;
        }
        std::vector<std::string> fields;
        size_t pos = 0;
        while (true) {
            size_t tab = line.find('\t', pos);
            fields.push_back(line.substr(pos, tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        if (!header_seen) {
            t.header = std::move(fields);
            header_seen = true;
        } else {
            t.add_row(std::move(fields));
        }
    }
    return t;
}

std::string fmt_double(double x) { return fmt::format("{:.6f}", x); }

std::string fmt_opt_int(const std::optional<int>& v) {
    return v ? fmt::format("{}", *v) : "-";
}

std::string fmt_opt_double(const std::optional<double>& v) {
    return v ? fmt_double(*v) : "-";
}

}  // namespace oraclesim
