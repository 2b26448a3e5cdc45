#include "oraclesim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "oraclesim/advanced_knowledge.hpp"
#include "oraclesim/circuits.hpp"
#include "oraclesim/histories.hpp"
#include "oraclesim/rng.hpp"
#include "oraclesim/two_time.hpp"

namespace oraclesim {

namespace {

std::string cells_mask(const std::vector<int>& cells, int cell_count) {
    std::string s(static_cast<size_t>(cell_count), '0');
    for (int c : cells) s[static_cast<size_t>(c)] = '1';
    return s;
}

std::string subset_names(const OracleProblem& p, const std::vector<int>& subset) {
    std::string s = "{";
    for (size_t i = 0; i < subset.size(); ++i) {
        if (i) s += ",";
        s += p.settings()[static_cast<size_t>(subset[i])].str();
    }
    return s + "}";
}

std::vector<BitString> chosen_settings(const OracleProblem& p, const RunConfig& c) {
    if (c.b_c.empty()) return p.settings();
    BitString b = BitString::parse(c.b_c);
    if (!p.setting_index(b)) {
        throw std::invalid_argument(fmt::format("--bc {} is not a setting of {}",
                                                c.b_c, p.name()));
    }
    return {b};
}

}  // namespace

OracleProblem select_problem(const RunConfig& config) {
    std::string sel = config.problem_selector;
    std::string family = sel;
    int n = config.n_override;
    if (auto colon = sel.find(':'); colon != std::string::npos) {
        family = sel.substr(0, colon);
        n = std::stoi(sel.substr(colon + 1));
    }
    if (family == "grover") {
        if (n < 0) throw std::invalid_argument("drawer search needs :n or --n");
        return OracleProblem::make_grover(n);
    }
    if (family == "dj") {
        if (n < 0) throw std::invalid_argument("dj needs :n or --n");
        return OracleProblem::make_deutsch_jozsa(n);
    }
    if (family == "simon") {
        if (n < 0) throw std::invalid_argument("simon needs :n or --n");
        return OracleProblem::make_simon(n);
    }
    return OracleProblem::load(sel);
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    (void)err;
    OracleProblem p = select_problem(config);
    Table t;
    t.comments.push_back(fmt::format("oraclesim {} simulate", kVersion));
    t.comments.push_back(fmt::format("problem {}  seed {}", p.name(), config.seed));
    switch (p.family()) {
        case Family::grover: {
            t.header = {"bc", "iterations", "success_p"};
            int iters = config.iterations >= 0
                            ? config.iterations
                            : static_cast<int>(std::lround(grover_k(p.arg_width())));
            for (const BitString& b : chosen_settings(p, config)) {
                GroverRun r = run_grover(p.arg_width(), iters, b);
                t.add_row({b.str(), fmt::format("{}", iters),
                           fmt_double(r.success_probability)});
            }
            break;
        }
        case Family::deutsch_jozsa: {
            t.header = {"bc", "outcome", "p_outcome", "verdict"};
            for (const BitString& b : chosen_settings(p, config)) {
                DeutschJozsaRun r = run_deutsch_jozsa(p.arg_width(), b);
                t.add_row({b.str(), r.outcome.str(), fmt_double(r.outcome_probability),
                           r.balanced ? "balanced" : "constant"});
            }
            break;
        }
        case Family::simon: {
            t.header = {"bc", "outcome", "count", "orthogonal"};
            int shots = static_cast<int>(config.trials);
            std::uint64_t i = 0;
            for (const BitString& b : chosen_settings(p, config)) {
                auto counts = run_simon_quantum_part(
                    p.arg_width(), b, shots, split_seed(config.seed, "simulate", i++));
                for (auto& [y, c] : counts) {
                    t.add_row({b.str(), y.str(), fmt::format("{}", c),
                               y.dot2(p.solution_of(b)) == 0 ? "yes" : "NO"});
                }
            }
            break;
        }
        case Family::custom: {
            t.header = {"bc", "outcome"};
            for (const BitString& b : chosen_settings(p, config)) {
                AlgorithmRun r = run_collapsed(p, b);
                auto [y, rest] = measure_a(r.output(), split_seed(config.seed, "simulate"));
                (void)rest;
                t.add_row({b.str(), y.str()});
            }
            break;
        }
    }
    out << render(t, config.format);
    // Output-state branch table of the postponed-projection run.
    if (config.format == OutputFormat::text) {
        BitString focus = config.b_c.empty() ? p.settings().front()
                                             : BitString::parse(config.b_c);
        AlgorithmRun run = run_postponed(p, focus);
        out << "\noutput state (projection of the initial measurement postponed):\n";
        out << format_trace({run.trace.back()});
    }
    return 0;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::vector<LabeledStateCheck> checks =
        grover_labeled_states(config.inject_corruption);
    Table t;
    t.comments.push_back(fmt::format("oraclesim {} verify", kVersion));
    t.comments.push_back(
        "four-drawer walkthrough: outcome 10, chosen setting 01, split B0/A1");
    t.header = {"state", "fidelity", "status"};
    int failures = 0;
    for (const LabeledStateCheck& c : checks) {
        t.add_row({c.name, fmt::format("{:.12f}", c.fidelity), c.pass ? "PASS" : "FAIL"});
        if (!c.pass) ++failures;
    }
    out << render(t, config.format);
    if (config.format == OutputFormat::text) {
        OracleProblem p = OracleProblem::make_grover(2);
        TwoRepRun run = build_two_reps(p, BitString::parse("01"), BitString::parse("10"));
        out << "\nsetter trace:\n" << format_trace(run.bob_trace);
        out << "\nsolver trace:\n" << format_trace(run.alice_trace);
    }
    if (failures > 0) {
        err << fmt::format("verify: {} of {} labeled states failed\n", failures,
                           checks.size());
        for (const LabeledStateCheck& c : checks) {
            if (!c.pass) err << fmt::format("  FAIL {} fidelity {:.12f}\n", c.name, c.fidelity);
        }
        return 1;
    }
    return 0;
}

int cmd_advknow(const RunConfig& config, std::ostream& out, std::ostream& err) {
    OracleProblem p = select_problem(config);
    int failures = 0;
    Table t;
    t.comments.push_back(fmt::format("oraclesim {} advknow", kVersion));
    t.comments.push_back(fmt::format("problem {}  seed {}", p.name(), config.seed));
    t.header = {"bc", "cells_i", "cells_j", "sigma_i", "sigma_j", "h", "status"};
    std::vector<std::string> extra_lines;
    for (const BitString& b : chosen_settings(p, config)) {
        SplitEnumeration splits = enumerate_splits(p, b);
        for (const SplitCandidate& c : splits.candidates) {
            std::string h = std::abs(c.h_i - c.h_j) < 1e-9
                                ? fmt_double(c.h_i)
                                : fmt::format("{}/{}", fmt_double(c.h_i), fmt_double(c.h_j));
            t.add_row({b.str(), cells_mask(c.cells_i, p.cells().cell_count),
                       cells_mask(c.cells_j, p.cells().cell_count),
                       fmt::format("{}", c.sigma_i.size()),
                       fmt::format("{}", c.sigma_j.size()), h,
                       c.accepted ? "accepted"
                                  : fmt::format("rejected({})", c.reject_reason)});
        }
        auto instances = advanced_knowledge_instances(p, b);
        std::string inst_line = fmt::format("bc {} instances:", b.str());
        for (const AkInstance& inst : instances) {
            inst_line += " " + subset_names(p, inst.subset);
        }
        extra_lines.push_back(inst_line);
        CrosscheckReport cc = crosscheck_shortcut(p, b);
        if (!cc.applicable) {
            extra_lines.push_back(fmt::format("bc {} crosscheck: {}", b.str(), cc.note));
        } else {
            extra_lines.push_back(fmt::format(
                "bc {} crosscheck: {} ({} good halves, {} rule subsets, one-to-one {})",
                b.str(), cc.exact_match ? "exact correspondence" : "MISMATCH",
                cc.good_halves, cc.half_origin_instances, cc.one_to_one ? "yes" : "no"));
            if (!cc.exact_match || !cc.one_to_one) {
                ++failures;
                for (const std::string& m : cc.mismatches) {
                    err << fmt::format("advknow bc {}: {}\n", b.str(), m);
                }
            }
        }
    }
    out << render(t, config.format);
    if (config.format == OutputFormat::text) {
        for (const std::string& l : extra_lines) out << l << "\n";
    }
    return failures > 0 ? 1 : 0;
}

namespace {

Table complexity_table(const ComplexityReport& rep) {
    Table t;
    t.comments.push_back(fmt::format("oraclesim {} complexity", kVersion));
    t.comments.push_back(fmt::format("problem {}  seed {}", rep.problem_name, rep.seed));
    t.header = {"name", "b_c",      "instances", "N_max",  "N_min",
                "k_n",  "baseline", "avg_ii",    "avg_iii", "seed"};
    for (const ComplexityRecord& r : rep.records) {
        t.add_row({r.problem, r.b_c.str(), fmt::format("{}", r.instances),
                   fmt_opt_int(r.n_max), fmt_opt_int(r.n_min), fmt_opt_double(r.k_n),
                   fmt::format("{}", r.baseline), fmt_double(r.avg_ii),
                   fmt_double(r.avg_iii), fmt::format("{}", r.seed)});
    }
    return t;
}

}  // namespace

int cmd_complexity(const RunConfig& config, std::ostream& out, std::ostream& err) {
    (void)err;
    OracleProblem p = select_problem(config);
    SearchBudget budget;
    budget.max_nodes = config.budget_nodes;
    ComplexityReport rep =
        build_report(p, config.trials, split_seed(config.seed, "complexity"), budget);
    if (!config.b_c.empty()) {
        BitString b = BitString::parse(config.b_c);
        std::erase_if(rep.records,
                      [&](const ComplexityRecord& r) { return r.b_c != b; });
    }
    out << render(complexity_table(rep), config.format);
    return 0;
}

int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.out_dir.empty()) {
        err << "report: --out <dir> is required\n";
        return 2;
    }
    std::filesystem::create_directories(config.out_dir);
    SearchBudget budget;
    budget.max_nodes = config.budget_nodes;
    const std::vector<std::string> selectors = {"grover:2", "grover:4", "dj:2",
                                                "dj:3",     "simon:2",  "simon:3"};
    int failures = 0;
    for (const std::string& sel : selectors) {
        RunConfig sub = config;
        sub.problem_selector = sel;
        OracleProblem p = select_problem(sub);
        std::string stem = p.name();
        std::replace(stem.begin(), stem.end(), ':', '_');

        ComplexityReport rep =
            build_report(p, config.trials, split_seed(config.seed, "report-" + sel), budget);
        std::string cpath =
            (std::filesystem::path(config.out_dir) / (stem + "_complexity.tsv")).string();
        std::ofstream cf(cpath);
        cf << render(complexity_table(rep), OutputFormat::delim);
        out << fmt::format("wrote {}\n", cpath);

        RunConfig adv = sub;
        adv.format = OutputFormat::delim;
        std::ostringstream advout;
        if (cmd_advknow(adv, advout, err) != 0) ++failures;
        std::string apath =
            (std::filesystem::path(config.out_dir) / (stem + "_advknow.tsv")).string();
        std::ofstream af(apath);
        af << advout.str();
        out << fmt::format("wrote {}\n", apath);
    }
    std::ostringstream vout;
    RunConfig vconf = config;
    vconf.format = OutputFormat::text;
    if (cmd_verify(vconf, vout, err) != 0) ++failures;
    std::string vpath =
        (std::filesystem::path(config.out_dir) / "verify.txt").string();
    std::ofstream vf(vpath);
    vf << vout.str();
    out << fmt::format("wrote {}\n", vpath);
    return failures > 0 ? 1 : 0;
}

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
    CLI::App app{"workbench for oracle problems, their query complexity, and the "
                 "two-representation projection calculus"};
    app.require_subcommand(1);
    RunConfig config;
    std::string format = "text";

    auto add_common = [&](CLI::App* cmd, bool needs_problem) {
        if (needs_problem) {
            cmd->add_option("--problem", config.problem_selector,
                            "grover:n | dj:n | simon:n | problem file path")
                ->required();
            cmd->add_option("--n", config.n_override, "size for bare family names");
            cmd->add_option("--bc", config.b_c, "restrict to one problem setting");
        }
        cmd->add_option("--seed", config.seed, "root random seed");
        cmd->add_option("--format", format, "text | delim")
            ->check(CLI::IsMember({"text", "delim"}));
        cmd->add_option("--budget-nodes", config.budget_nodes,
                        "decision-tree node budget");
        cmd->add_option("--trials", config.trials, "Monte-Carlo trials / shots");
        cmd->add_option("--out", config.out_dir, "output directory");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run an algorithm");
    add_common(simulate, true);
    simulate->add_option("--iterations", config.iterations,
                         "search iterations (drawer search)");
    CLI::App* verify = app.add_subcommand(
        "verify", "reconstruct the labeled four-drawer states");
    add_common(verify, false);
    verify->add_option("--inject-corruption", config.inject_corruption,
                       "drop the named solver step (negative control)")
        ->group("");  // hidden
    CLI::App* advknow =
        app.add_subcommand("advknow", "enumerate advanced-knowledge splits");
    add_common(advknow, true);
    CLI::App* complexity =
        app.add_subcommand("complexity", "predicted vs actual query counts");
    add_common(complexity, true);
    CLI::App* report =
        app.add_subcommand("report", "full pipeline over the built-in problems");
    add_common(report, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    config.format = format == "delim" ? OutputFormat::delim : OutputFormat::text;
    try {
        if (simulate->parsed()) return cmd_simulate(config, out, err);
        if (verify->parsed()) return cmd_verify(config, out, err);
        if (advknow->parsed()) return cmd_advknow(config, out, err);
        if (complexity->parsed()) return cmd_complexity(config, out, err);
        if (report->parsed()) return cmd_report(config, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no command\n";
    return 2;
}

}  // namespace oraclesim
