// Command layer behind the CLI binary, kept as a library so the exact
// byte-for-byte output can be exercised in tests.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "oraclesim/problems.hpp"
#include "oraclesim/query_complexity.hpp"
#include "oraclesim/report.hpp"

namespace oraclesim {

struct RunConfig {
    std::string problem_selector;  // grover:N | dj:N | simon:N | path
    int n_override = -1;           // --n companion for bare family names
    std::string b_c;               // optional single-setting focus
    std::uint64_t seed = 1;
    OutputFormat format = OutputFormat::text;
    std::uint64_t budget_nodes = SearchBudget{}.max_nodes;
    std::uint64_t trials = 2000;
    std::string out_dir;
    int iterations = -1;           // drawer search only
    std::string inject_corruption; // verify negative control (test hook)
};

OracleProblem select_problem(const RunConfig& config);

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_advknow(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_complexity(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full argv-style entry point (without the program name).
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace oraclesim
