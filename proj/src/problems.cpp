#include "oraclesim/problems.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace oraclesim {

const char* family_name(Family f) {
    switch (f) {
        case Family::grover: return "grover";
        case Family::deutsch_jozsa: return "dj";
        case Family::simon: return "simon";
        case Family::custom: return "custom";
    }
    return "?";
}

OracleProblem::OracleProblem(std::string name, Family family, SolutionView view,
                             int arg_width, int value_width, CellSpec cells,
                             std::vector<BitString> settings,
                             std::vector<std::vector<std::uint32_t>> table,
                             std::vector<BitString> solutions)
    : name_(std::move(name)),
      family_(family),
      view_(view),
      arg_width_(arg_width),
      value_width_(value_width),
      cells_(cells),
      settings_(std::move(settings)),
      table_(std::move(table)),
      solutions_(std::move(solutions)) {
    if (settings_.empty()) {
        throw std::invalid_argument("problem with no settings");
    }
    if (table_.size() != settings_.size() || solutions_.size() != settings_.size()) {
        throw std::invalid_argument("table/solution size does not match σ");
    }
    for (size_t i = 0; i < settings_.size(); ++i) {
        if (!index_.emplace(settings_[i].value(), static_cast<int>(i)).second) {
            throw std::invalid_argument(
                fmt::format("duplicate setting {}", settings_[i].str()));
        }
    }
}

std::optional<int> OracleProblem::setting_index(const BitString& b) const {
    auto it = index_.find(b.value());
    if (it == index_.end() || settings_[static_cast<size_t>(it->second)].width() != b.width()) {
        return std::nullopt;
    }
    return it->second;
}

std::uint32_t OracleProblem::value(int idx, std::uint64_t arg) const {
    return table_[static_cast<size_t>(idx)][static_cast<size_t>(arg)];
}

BitString OracleProblem::value_bits(int idx, std::uint64_t arg) const {
    return BitString(value(idx, arg), value_width_);
}

const BitString& OracleProblem::solution_of(const BitString& b) const {
    auto idx = setting_index(b);
    if (!idx) {
        throw std::invalid_argument(fmt::format("setting {} not in σ", b.str()));
    }
    return solutions_[static_cast<size_t>(*idx)];
}

BitString OracleProblem::rule_solution(int idx) const {
    const BitString& s = solutions_[static_cast<size_t>(idx)];
    if (view_ == SolutionView::zero_test) {
        return BitString(s.all_zero() ? 0 : 1, 1);
    }
    return s;
}

int OracleProblem::rule_solution_width() const {
    return view_ == SolutionView::zero_test ? 1 : solution_width();
}

bool OracleProblem::table_structured() const {
    if (cells_.cell_width != value_width_) return false;
    if (cells_.cell_count != arg_count()) return false;
    for (size_t i = 0; i < settings_.size(); ++i) {
        for (int a = 0; a < arg_count(); ++a) {
            if (cell_value(settings_[i], cells_, a).value() !=
                value(static_cast<int>(i), static_cast<std::uint64_t>(a))) {
                return false;
            }
        }
    }
    return true;
}

// Family is a generator tag, not data; the text format does not carry it.
bool OracleProblem::operator==(const OracleProblem& rhs) const {
    return name_ == rhs.name_ && view_ == rhs.view_ &&
           arg_width_ == rhs.arg_width_ && value_width_ == rhs.value_width_ &&
           cells_.cell_count == rhs.cells_.cell_count &&
           cells_.cell_width == rhs.cells_.cell_width && settings_ == rhs.settings_ &&
           table_ == rhs.table_ && solutions_ == rhs.solutions_;
}

// --- generators --------------------------------------------------------------

OracleProblem OracleProblem::make_grover(int n) {
    if (n < 1 || n > 10) {
        throw std::invalid_argument("drawer-search size n must be in [1,10]");
    }
    const int count = 1 << n;
    std::vector<BitString> settings;
    std::vector<std::vector<std::uint32_t>> table;
    std::vector<BitString> solutions;
    settings.reserve(static_cast<size_t>(count));
    for (int b = 0; b < count; ++b) {
        BitString setting(static_cast<std::uint64_t>(b), n);
        std::vector<std::uint32_t> row(static_cast<size_t>(count), 0);
        row[static_cast<size_t>(b)] = 1;  // f_b(a) = δ(b,a)
        settings.push_back(setting);
        table.push_back(std::move(row));
        solutions.push_back(setting);
    }
    return OracleProblem(fmt::format("grover:{}", n), Family::grover,
                         SolutionView::direct, n, 1, CellSpec{n, 1},
                         std::move(settings), std::move(table), std::move(solutions));
}

namespace {

// Output label of the n-bit constant/balanced circuit: the unique A word
// carrying all the amplitude when one exists, otherwise the smallest word
// with nonzero amplitude. Complement tables share the label either way.
BitString dj_solution_label(const std::vector<std::uint32_t>& f, int n) {
    const int count = 1 << n;
    for (int y = 0; y < count; ++y) {
        int acc = 0;
        for (int a = 0; a < count; ++a) {
            int sign = (static_cast<int>(f[static_cast<size_t>(a)]) +
                        std::popcount(static_cast<unsigned>(a & y))) & 1;
            acc += sign ? -1 : 1;
        }
        if (acc != 0) return BitString(static_cast<std::uint64_t>(y), n);
    }
    throw std::logic_error("table with empty output support");
}

}  // namespace

OracleProblem OracleProblem::make_deutsch_jozsa(int n) {
    if (n < 1 || n > 3) {
        throw std::invalid_argument("constant/balanced table size n must be in [1,3]");
    }
    const int rows = 1 << n;
    std::vector<BitString> settings;
    std::vector<std::vector<std::uint32_t>> table;
    std::vector<BitString> solutions;
    // σ = the two constant tables plus every balanced table, in increasing
    // numeric order of the table string.
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << rows); ++t) {
        int ones = std::popcount(t);
        if (ones != 0 && ones != rows && ones != rows / 2) continue;
        BitString setting(t, rows);
        std::vector<std::uint32_t> row(static_cast<size_t>(rows));
        for (int a = 0; a < rows; ++a) {
            row[static_cast<size_t>(a)] = static_cast<std::uint32_t>(setting.bit(a));
        }
        solutions.push_back(dj_solution_label(row, n));
        settings.push_back(setting);
        table.push_back(std::move(row));
    }
    return OracleProblem(fmt::format("dj:{}", n), Family::deutsch_jozsa,
                         SolutionView::zero_test, n, 1, CellSpec{rows, 1},
                         std::move(settings), std::move(table), std::move(solutions));
}

OracleProblem OracleProblem::make_simon(int n) {
    if (n < 2 || n > 3) {
        throw std::invalid_argument("periodic table size n must be in [2,3]");
    }
    const int rows = 1 << n;
    const int vw = n - 1;
    const int vcount = 1 << vw;
    std::vector<BitString> settings;
    std::vector<std::vector<std::uint32_t>> table;
    std::vector<BitString> solutions;
    // Tables with f(a) = f(c) iff a⊕c ∈ {0,p}: pick a nonzero period p and
    // assign pairwise-distinct values to the cosets of {0,p} in increasing
    // order of the coset representative.
    for (int p = 1; p < rows; ++p) {
        std::vector<int> reps;
        for (int a = 0; a < rows; ++a) {
            if (a < (a ^ p)) reps.push_back(a);
        }
        std::vector<int> assign(static_cast<size_t>(vcount));
        std::iota(assign.begin(), assign.end(), 0);
        std::sort(assign.begin(), assign.end());
        do {
            std::vector<std::uint32_t> row(static_cast<size_t>(rows));
            for (size_t i = 0; i < reps.size(); ++i) {
                row[static_cast<size_t>(reps[i])] =
                    static_cast<std::uint32_t>(assign[i]);
                row[static_cast<size_t>(reps[i] ^ p)] =
                    static_cast<std::uint32_t>(assign[i]);
            }
            BitString setting;
            for (int a = 0; a < rows; ++a) {
                setting = setting.concat(BitString(row[static_cast<size_t>(a)], vw));
            }
            settings.push_back(setting);
            table.push_back(std::move(row));
            solutions.push_back(BitString(static_cast<std::uint64_t>(p), n));
        } while (std::next_permutation(assign.begin(), assign.end()));
    }
    // Keep σ sorted by the table string for a deterministic order.
    std::vector<int> order(settings.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return settings[static_cast<size_t>(a)] < settings[static_cast<size_t>(b)];
    });
    std::vector<BitString> s2;
    std::vector<std::vector<std::uint32_t>> t2;
    std::vector<BitString> sol2;
    for (int i : order) {
        s2.push_back(settings[static_cast<size_t>(i)]);
        t2.push_back(std::move(table[static_cast<size_t>(i)]));
        sol2.push_back(solutions[static_cast<size_t>(i)]);
    }
    return OracleProblem(fmt::format("simon:{}", n), Family::simon,
                         SolutionView::direct, n, vw, CellSpec{rows, vw},
                         std::move(s2), std::move(t2), std::move(sol2));
}

// --- validation --------------------------------------------------------------

std::vector<std::string> OracleProblem::validate() const {
    std::vector<std::string> out;
    std::set<BitString> seen;
    for (const BitString& s : settings_) {
        if (!seen.insert(s).second) {
            out.push_back(fmt::format("duplicate setting {}", s.str()));
        }
        if (s.width() != cells_.total_width()) {
            out.push_back(fmt::format("setting {} width {} != cell layout width {}",
                                      s.str(), s.width(), cells_.total_width()));
        }
    }
    for (size_t i = 0; i < settings_.size(); ++i) {
        if (table_[i].size() != static_cast<size_t>(arg_count())) {
            out.push_back(fmt::format("table of {} is not total over the arguments",
                                      settings_[i].str()));
            continue;
        }
        for (int a = 0; a < arg_count(); ++a) {
            if (table_[i][static_cast<size_t>(a)] >>
                static_cast<unsigned>(value_width_)) {
                out.push_back(fmt::format("value of {} at {} exceeds {} bits",
                                          settings_[i].str(), a, value_width_));
            }
        }
        if (solutions_[i].width() != solutions_.front().width()) {
            out.push_back(fmt::format("solution widths are inconsistent at {}",
                                      settings_[i].str()));
        }
    }
    // Ill-posed instances: identical tables must not demand distinct answers.
    for (size_t i = 0; i < settings_.size(); ++i) {
        for (size_t j = i + 1; j < settings_.size(); ++j) {
            if (table_[i] == table_[j] && rule_solution(static_cast<int>(i)) !=
                                              rule_solution(static_cast<int>(j))) {
                out.push_back(fmt::format(
                    "settings {} and {} share a table but not a solution",
                    settings_[i].str(), settings_[j].str()));
            }
        }
    }
    switch (family_) {
        case Family::grover:
            for (size_t i = 0; i < settings_.size(); ++i) {
                int ones = 0;
                for (int a = 0; a < arg_count(); ++a) ones += value(static_cast<int>(i), a);
                bool hit = value(static_cast<int>(i), settings_[i].value()) == 1;
                if (ones != 1 || !hit) {
                    out.push_back(fmt::format("table of {} is not δ(b,a)",
                                              settings_[i].str()));
                }
                if (solutions_[i] != settings_[i]) {
                    out.push_back(fmt::format("solution of {} is not the setting",
                                              settings_[i].str()));
                }
            }
            break;
        case Family::deutsch_jozsa:
            for (size_t i = 0; i < settings_.size(); ++i) {
                int ones = 0;
                for (int a = 0; a < arg_count(); ++a) ones += value(static_cast<int>(i), a);
                if (ones != 0 && ones != arg_count() && ones != arg_count() / 2) {
                    out.push_back(fmt::format("table {} is neither constant nor balanced",
                                              settings_[i].str()));
                }
            }
            break;
        case Family::simon:
            for (size_t i = 0; i < settings_.size(); ++i) {
                const BitString& p = solutions_[i];
                if (p.all_zero()) {
                    out.push_back(fmt::format("period of {} is zero", settings_[i].str()));
                    continue;
                }
                for (int a = 0; a < arg_count(); ++a) {
                    for (int c = 0; c < arg_count(); ++c) {
                        bool same = value(static_cast<int>(i), a) ==
                                    value(static_cast<int>(i), c);
                        std::uint64_t x = static_cast<std::uint64_t>(a ^ c);
                        bool related = (x == 0) || (x == p.value());
                        if (same != related) {
                            out.push_back(fmt::format(
                                "table {} breaks f(a)=f(c) ⇔ a⊕c ∈ {{0,p}} at a={}, c={}",
                                settings_[i].str(), a, c));
                        }
                    }
                }
            }
            break;
        case Family::custom:
            break;
    }
    // Every solution value attained by at least one setting is tautological
    // for a total map; flag unattained declared widths only via width checks.
    return out;
}

// --- text format -------------------------------------------------------------

void OracleProblem::save(std::ostream& out) const {
    out << "problem " << name_ << "\n";
    out << "argwidth " << arg_width_ << "  valwidth " << value_width_
        << "  cellwidth " << cells_.cell_width << "\n";
    if (view_ == SolutionView::zero_test) {
        out << "view zerotest\n";
    }
    for (size_t i = 0; i < settings_.size(); ++i) {
        out << "setting " << settings_[i].str() << " solution " << solutions_[i].str()
            << "\n";
    }
    for (size_t i = 0; i < settings_.size(); ++i) {
        for (int a = 0; a < arg_count(); ++a) {
            out << "row " << settings_[i].str() << " "
                << BitString(static_cast<std::uint64_t>(a), arg_width_).str() << " "
                << value_bits(static_cast<int>(i), static_cast<std::uint64_t>(a)).str()
                << "\n";
        }
    }
}

void OracleProblem::save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) {
        throw std::runtime_error(fmt::format("cannot write {}", path));
    }
    save(f);
}

OracleProblem OracleProblem::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error(fmt::format("cannot read {}", path));
    }
    return parse(f, path);
}

namespace {
[[noreturn]] void parse_fail(const std::string& source, int line, const std::string& what) {
    throw std::runtime_error(fmt::format("{}:{}: {}", source, line, what));
}
}  // namespace

OracleProblem OracleProblem::parse(std::istream& in, const std::string& source_name) {
    std::string name;
    int arg_width = -1, value_width = -1, cell_width = -1;
    SolutionView view = SolutionView::direct;
    std::vector<BitString> settings;
    std::vector<BitString> solutions;
    std::vector<std::vector<std::uint32_t>> table;
    std::vector<std::vector<bool>> covered;
    std::unordered_map<std::uint64_t, int> index;

    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "problem") {
            if (!(ls >> name)) parse_fail(source_name, lineno, "missing problem name");
        } else if (kw == "argwidth") {
            // argwidth <int>  valwidth <int>  cellwidth <int>
            std::string k2, k3;
            if (!(ls >> arg_width >> k2 >> value_width >> k3 >> cell_width) ||
                k2 != "valwidth" || k3 != "cellwidth") {
                parse_fail(source_name, lineno,
                           "expected 'argwidth <int> valwidth <int> cellwidth <int>'");
            }
            if (arg_width < 1 || value_width < 1 || cell_width < 1) {
                parse_fail(source_name, lineno, "widths must be positive");
            }
        } else if (kw == "view") {
            std::string v;
            if (!(ls >> v) || (v != "direct" && v != "zerotest")) {
                parse_fail(source_name, lineno, "view must be 'direct' or 'zerotest'");
            }
            view = v == "zerotest" ? SolutionView::zero_test : SolutionView::direct;
        } else if (kw == "setting") {
            std::string b, kws, s;
            if (!(ls >> b >> kws >> s) || kws != "solution") {
                parse_fail(source_name, lineno, "expected 'setting <bits> solution <bits>'");
            }
            BitString setting, solution;
            try {
                setting = BitString::parse(b);
                solution = BitString::parse(s);
            } catch (const std::exception& e) {
                parse_fail(source_name, lineno, e.what());
            }
            if (!settings.empty() && setting.width() != settings.front().width()) {
                parse_fail(source_name, lineno,
                           fmt::format("setting width {} differs from {}",
                                       setting.width(), settings.front().width()));
            }
            if (!solutions.empty() && solution.width() != solutions.front().width()) {
                parse_fail(source_name, lineno, "solution widths are inconsistent");
            }
            if (index.contains(setting.value())) {
                parse_fail(source_name, lineno,
                           fmt::format("duplicate setting {}", setting.str()));
            }
            index.emplace(setting.value(), static_cast<int>(settings.size()));
            settings.push_back(setting);
            solutions.push_back(solution);
        } else if (kw == "row") {
            if (arg_width < 0) {
                parse_fail(source_name, lineno, "row before the width declaration");
            }
            std::string b, a, v;
            if (!(ls >> b >> a >> v)) {
                parse_fail(source_name, lineno, "expected 'row <b-bits> <a-bits> <value-bits>'");
            }
            BitString setting, arg, val;
            try {
                setting = BitString::parse(b);
                arg = BitString::parse(a);
                val = BitString::parse(v);
            } catch (const std::exception& e) {
                parse_fail(source_name, lineno, e.what());
            }
            auto it = index.find(setting.value());
            if (it == index.end()) {
                parse_fail(source_name, lineno,
                           fmt::format("row for undeclared setting {}", setting.str()));
            }
            if (arg.width() != arg_width) {
                parse_fail(source_name, lineno,
                           fmt::format("argument width {} != argwidth {}", arg.width(),
                                       arg_width));
            }
            if (val.width() != value_width) {
                parse_fail(source_name, lineno,
                           fmt::format("value width {} != valwidth {}", val.width(),
                                       value_width));
            }
            size_t si = static_cast<size_t>(it->second);
            if (table.size() <= si) {
                table.resize(settings.size());
                covered.resize(settings.size());
            }
            size_t args = size_t{1} << arg_width;
            if (table[si].empty()) {
                table[si].assign(args, 0);
                covered[si].assign(args, false);
            }
            if (covered[si][arg.value()]) {
                parse_fail(source_name, lineno,
                           fmt::format("duplicate row ({}, {})", setting.str(), arg.str()));
            }
            covered[si][arg.value()] = true;
            table[si][arg.value()] = static_cast<std::uint32_t>(val.value());
        } else {
            parse_fail(source_name, lineno, fmt::format("unknown keyword '{}'", kw));
        }
        std::string extra;
        if (ls >> extra) {
            parse_fail(source_name, lineno, fmt::format("trailing token '{}'", extra));
        }
    }
    if (name.empty()) throw std::runtime_error(source_name + ": missing 'problem' line");
    if (arg_width < 0) throw std::runtime_error(source_name + ": missing width line");
    if (settings.empty()) throw std::runtime_error(source_name + ": no settings");
    table.resize(settings.size());
    covered.resize(settings.size());
    for (size_t i = 0; i < settings.size(); ++i) {
        size_t args = size_t{1} << arg_width;
        if (table[i].size() != args) {
            throw std::runtime_error(fmt::format("{}: table of {} is missing rows",
                                                 source_name, settings[i].str()));
        }
        for (size_t a = 0; a < args; ++a) {
            if (!covered[i][a]) {
                throw std::runtime_error(
                    fmt::format("{}: table of {} is missing argument {}", source_name,
                                settings[i].str(),
                                BitString(a, arg_width).str()));
            }
        }
    }
    if (settings.front().width() % cell_width != 0) {
        throw std::runtime_error(
            fmt::format("{}: cell width {} does not divide setting width {}",
                        source_name, cell_width, settings.front().width()));
    }
    CellSpec cells{settings.front().width() / cell_width, cell_width};
    return OracleProblem(name, Family::custom, view, arg_width, value_width, cells,
                         std::move(settings), std::move(table), std::move(solutions));
}

}  // namespace oraclesim
