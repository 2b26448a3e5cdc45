// Oracle problem families: the setting set σ, the function tables f_b, the
// solution map s(b), and the cell structure of register B.
//
// Three built-in generators (drawer search, constant-vs-balanced tables,
// periodic tables) plus a line-oriented text format for ingesting arbitrary
// problems.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "oraclesim/bitstring.hpp"

namespace oraclesim {

enum class Family { grover, deutsch_jozsa, simon, custom };

// How the advanced-knowledge rule reads the solution map. `direct` uses
// s(b) itself. `zero_test` classes settings by whether s(b) is all zeros —
// the constant/balanced verdict of the table problems, where the solution
// string in register A is a pre-solution and the answer is its zero-ness.
enum class SolutionView { direct, zero_test };

const char* family_name(Family f);

class OracleProblem {
  public:
    static OracleProblem make_grover(int n);
    static OracleProblem make_deutsch_jozsa(int n);
    static OracleProblem make_simon(int n);

    static OracleProblem load(const std::string& path);
    static OracleProblem parse(std::istream& in, const std::string& source_name);
    void save(std::ostream& out) const;
    void save(const std::string& path) const;

    // Empty iff all type invariants and family-specific constraints hold.
    std::vector<std::string> validate() const;

    const std::string& name() const { return name_; }
    Family family() const { return family_; }
    SolutionView view() const { return view_; }
    int arg_width() const { return arg_width_; }
    int value_width() const { return value_width_; }
    int solution_width() const { return solutions_.front().width(); }
    int setting_width() const { return settings_.front().width(); }
    const CellSpec& cells() const { return cells_; }

    const std::vector<BitString>& settings() const { return settings_; }
    int setting_count() const { return static_cast<int>(settings_.size()); }
    int arg_count() const { return 1 << arg_width_; }
    std::optional<int> setting_index(const BitString& b) const;

    // f_b(a) for the setting with index `idx`.
    std::uint32_t value(int idx, std::uint64_t arg) const;
    BitString value_bits(int idx, std::uint64_t arg) const;

    const BitString& solution(int idx) const { return solutions_[static_cast<size_t>(idx)]; }
    const BitString& solution_of(const BitString& b) const;

    // Solution label as seen by the advanced-knowledge rule and the
    // query-counting oracles (applies the view).
    BitString rule_solution(int idx) const;
    int rule_solution_width() const;

    // True when the setting string is literally the function table: one
    // cell per argument, cell values equal to f_b. Half-table shortcuts
    // only make sense for such problems.
    bool table_structured() const;

    OracleProblem(std::string name, Family family, SolutionView view, int arg_width,
                  int value_width, CellSpec cells, std::vector<BitString> settings,
                  std::vector<std::vector<std::uint32_t>> table,
                  std::vector<BitString> solutions);

    bool operator==(const OracleProblem& rhs) const;

  private:
    std::string name_;
    Family family_;
    SolutionView view_;
    int arg_width_;
    int value_width_;
    CellSpec cells_;
    std::vector<BitString> settings_;
    std::vector<std::vector<std::uint32_t>> table_;  // [setting index][arg]
    std::vector<BitString> solutions_;
    std::unordered_map<std::uint64_t, int> index_;
};

}  // namespace oraclesim
