#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>

#include "oraclesim/advanced_knowledge.hpp"
#include "oraclesim/circuits.hpp"
#include "oraclesim/ensemble.hpp"

using namespace oraclesim;

namespace {

std::vector<int> indices_of(const OracleProblem& p,
                            std::initializer_list<const char*> names) {
    std::vector<int> out;
    for (const char* n : names) {
        out.push_back(*p.setting_index(BitString::parse(n)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::set<std::vector<int>> instance_subsets(const OracleProblem& p, const char* bc) {
    std::set<std::vector<int>> out;
    for (const AkInstance& inst :
         advanced_knowledge_instances(p, BitString::parse(bc))) {
        out.insert(inst.subset);
    }
    return out;
}

}  // namespace

TEST_CASE("drawer search n=2: the single bipartition is accepted") {
    OracleProblem p = OracleProblem::make_grover(2);
    SplitEnumeration splits = enumerate_splits(p, BitString::parse("01"));
    REQUIRE(splits.candidates.size() == 1);
    const SplitCandidate& c = splits.candidates.front();
    CHECK(c.accepted);
    CHECK(c.cells_i == std::vector<int>{0});
    CHECK(c.cells_j == std::vector<int>{1});
    CHECK(c.sigma_i == indices_of(p, {"00", "01"}));
    CHECK(c.sigma_j == indices_of(p, {"01", "11"}));
    CHECK(c.h_i == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.h_j == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(instance_subsets(p, "01") ==
          std::set<std::vector<int>>{indices_of(p, {"00", "01"}),
                                     indices_of(p, {"01", "11"})});
}

TEST_CASE("drawer search n=4: accepted splits take two cells each side") {
    OracleProblem p = OracleProblem::make_grover(4);
    for (const char* bc : {"0000", "0110", "1111"}) {
        SplitEnumeration splits = enumerate_splits(p, BitString::parse(bc));
        int accepted = 0;
        for (const SplitCandidate& c : splits.candidates) {
            if (!c.accepted) continue;
            ++accepted;
            CHECK(c.cells_i.size() == 2);
            CHECK(c.cells_j.size() == 2);
            CHECK(c.sigma_i.size() == 4);
            CHECK(c.sigma_j.size() == 4);
        }
        CHECK(accepted == 3);  // C(4,2)/2
        // Every instance has exactly 2^{n/2} = 4 elements.
        for (const AkInstance& inst :
             advanced_knowledge_instances(p, BitString::parse(bc))) {
            CHECK(inst.subset.size() == 4);
        }
    }
}

TEST_CASE("constant/balanced n=2: one bipartition for balanced settings") {
    OracleProblem p = OracleProblem::make_deutsch_jozsa(2);
    SplitEnumeration splits = enumerate_splits(p, BitString::parse("0011"));
    auto accepted = splits.accepted();
    REQUIRE(accepted.size() == 1);
    CHECK(accepted.front()->cells_i == std::vector<int>{0, 1});
    CHECK(accepted.front()->cells_j == std::vector<int>{2, 3});
    CHECK(accepted.front()->sigma_i == indices_of(p, {"0011", "0000"}));
    CHECK(accepted.front()->sigma_j == indices_of(p, {"0011", "1111"}));
    // The other half-half bipartitions leave both sides balanced-only.
    for (const SplitCandidate& c : splits.candidates) {
        if (c.accepted) continue;
        if (c.cells_i.size() == 2) {
            CHECK(c.reject_reason == "redundant");
            CHECK(c.h_i == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("constant/balanced n=2: constant settings accept strictly more") {
    OracleProblem p = OracleProblem::make_deutsch_jozsa(2);
    auto balanced = enumerate_splits(p, BitString::parse("0011")).accepted();
    auto constant = enumerate_splits(p, BitString::parse("0000")).accepted();
    CHECK(constant.size() > balanced.size());
    CHECK(constant.size() == 3);
    // More instances than the balanced case's two.
    CHECK(instance_subsets(p, "0000").size() > 2);
    CHECK(instance_subsets(p, "0000").size() == 6);
}

TEST_CASE("periodic n=2: accepted and rejected bipartitions") {
    OracleProblem p = OracleProblem::make_simon(2);
    SplitEnumeration splits = enumerate_splits(p, BitString::parse("0011"));
    bool saw_accepted_01 = false, saw_rejected_rows01 = false;
    for (const SplitCandidate& c : splits.candidates) {
        if (c.cells_i == std::vector<int>{0, 2}) {
            // rows {00,10} vs {01,11}
            CHECK(c.accepted);
            CHECK(c.sigma_i == indices_of(p, {"0011", "0110"}));
            CHECK(c.sigma_j == indices_of(p, {"0011", "1001"}));
            CHECK(c.h_i == doctest::Approx(1.0).epsilon(1e-12));
            saw_accepted_01 = true;
        }
        if (c.cells_i == std::vector<int>{0, 1}) {
            // rows {00,01} vs {10,11}: either half alone pins the table.
            CHECK(!c.accepted);
            CHECK(c.h_i == doctest::Approx(0.0));
            CHECK(c.reject_reason == "redundant");
            saw_rejected_rows01 = true;
        }
    }
    CHECK(saw_accepted_01);
    CHECK(saw_rejected_rows01);
}

TEST_CASE("condition invariants hold for every accepted split") {
    for (OracleProblem p : {OracleProblem::make_grover(2),
                            OracleProblem::make_grover(4),
                            OracleProblem::make_deutsch_jozsa(2),
                            OracleProblem::make_deutsch_jozsa(3),
                            OracleProblem::make_simon(2),
                            OracleProblem::make_simon(3)}) {
        int checked = 0;
        for (const BitString& b : p.settings()) {
            SplitEnumeration splits = enumerate_splits(p, b);
            auto bidx = *p.setting_index(b);
            for (const SplitCandidate& c : splits.candidates) {
                // Condition (I): the two selections meet exactly at b_c.
                std::vector<int> meet;
                std::set_intersection(c.sigma_i.begin(), c.sigma_i.end(),
                                      c.sigma_j.begin(), c.sigma_j.end(),
                                      std::back_inserter(meet));
                CHECK(meet == std::vector<int>{bidx});
                if (c.accepted) {
                    CHECK(std::abs(c.h_i - c.h_j) < 1e-9);
                    CHECK(c.h_i > 1e-9);
                    // Advanced knowledge strictly lowers the solution-string
                    // uncertainty below complete ignorance.
                    CHECK(c.h_string_i < splits.total_string_entropy - 1e-9);
                    CHECK(c.h_string_j < splits.total_string_entropy - 1e-9);
                } else {
                    // Rejection soundness: the logged reason re-evaluates.
                    if (c.reject_reason == "uneven") {
                        CHECK(std::abs(c.h_i - c.h_j) >= 1e-9);
                    } else {
                        CHECK(c.reject_reason == "redundant");
                        CHECK(c.h_i <= 1e-9);
                        CHECK(c.h_j <= 1e-9);
                    }
                }
                ++checked;
            }
            if (checked > 4000) break;  // plenty of coverage per problem
        }
    }
}

TEST_CASE("instances contain their setting and are deduplicated") {
    for (OracleProblem p : {OracleProblem::make_grover(2),
                            OracleProblem::make_deutsch_jozsa(2),
                            OracleProblem::make_simon(2)}) {
        for (const BitString& b : p.settings()) {
            auto instances = advanced_knowledge_instances(p, b);
            std::set<std::vector<int>> seen;
            for (const AkInstance& inst : instances) {
                CHECK(std::binary_search(inst.subset.begin(), inst.subset.end(),
                                         *p.setting_index(b)));
                CHECK(inst.subset.size() >= 1);
                CHECK(seen.insert(inst.subset).second);  // no duplicates
            }
        }
    }
}

TEST_CASE("rule entropy equals the von Neumann entropy of the idealized output") {
    // The combinatorial entropy h and the reduced density operator of A in
    // the idealized output state agree, subset by subset.
    for (OracleProblem p : {OracleProblem::make_grover(2),
                            OracleProblem::make_deutsch_jozsa(2),
                            OracleProblem::make_simon(2)}) {
        DephasedEnsemble out = canonical_rule_output_state(p);
        for (const BitString& b : p.settings()) {
            for (const SplitCandidate& c :
                 enumerate_splits(p, b).candidates) {
                if (!c.accepted) continue;
                BitString outcome = extract_cells(b, p.cells(), c.cells_i);
                auto [prob, sub] = measure_b_cells(out, p.cells(), c.cells_i, outcome);
                (void)prob;
                CHECK(vn_entropy_bits(reduced_density_a(sub)) ==
                      doctest::Approx(c.h_i).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("good half tables by family value criterion") {
    OracleProblem dj = OracleProblem::make_deutsch_jozsa(2);
    // rows {00,01} (values 0,0) good; rows {00,10} (values 0,1) not good.
    BitString bc = BitString::parse("0011");
    auto halves = good_half_tables(dj, bc);
    std::set<std::vector<int>> set(halves.begin(), halves.end());
    CHECK(set.contains(std::vector<int>{0, 1}));
    CHECK(set.contains(std::vector<int>{2, 3}));
    CHECK(!set.contains(std::vector<int>{0, 2}));
    CHECK(halves.size() == 2);
    CHECK(half_table_value_criterion(dj, bc, {0, 1}));
    CHECK(!half_table_value_criterion(dj, bc, {0, 2}));

    // Constant table: all C(4,2) = 6 halves are good.
    CHECK(good_half_tables(dj, BitString::parse("0000")).size() == 6);

    OracleProblem simon = OracleProblem::make_simon(2);
    auto shalves = good_half_tables(simon, bc);
    std::set<std::vector<int>> sset(shalves.begin(), shalves.end());
    CHECK(sset.contains(std::vector<int>{0, 2}));   // values 0,1 distinct
    CHECK(!sset.contains(std::vector<int>{0, 1}));  // values 0,0
    CHECK(half_table_value_criterion(simon, bc, {0, 2}));
    CHECK(!half_table_value_criterion(simon, bc, {0, 1}));
}

TEST_CASE("periodic n=3: distinct-value halves can still reveal the period") {
    // One row per coset of {0,p} makes all values distinct, yet when the
    // four sample points exhaust every pairwise xor the half pins the
    // table. Those halves are excluded from the good set.
    OracleProblem p = OracleProblem::make_simon(3);
    const BitString bc = p.settings().front();
    int value_criterion = 0;
    const int cc = p.cells().cell_count;
    for (std::uint32_t mask = 1; mask + 1 < (1u << cc); ++mask) {
        if (std::popcount(mask) != cc / 2) continue;
        std::vector<int> cells;
        for (int c = 0; c < cc; ++c) {
            if (mask & (1u << c)) cells.push_back(c);
        }
        if (half_table_value_criterion(p, bc, cells)) ++value_criterion;
    }
    auto good = good_half_tables(p, bc);
    CHECK(value_criterion == 16);  // one row per coset: 2^4
    CHECK(good.size() == 8);       // half of them leave the period open
    for (const auto& cells : good) {
        CHECK(half_table_value_criterion(p, bc, cells));
    }
}

TEST_CASE("crosscheck: half tables and rule subsets coincide one to one") {
    for (OracleProblem p : {OracleProblem::make_deutsch_jozsa(2),
                            OracleProblem::make_deutsch_jozsa(3),
                            OracleProblem::make_simon(2),
                            OracleProblem::make_simon(3)}) {
        for (const BitString& b : p.settings()) {
            CrosscheckReport cc = crosscheck_shortcut(p, b);
            REQUIRE(cc.applicable);
            CHECK(cc.exact_match);
            CHECK(cc.one_to_one);
            CHECK(cc.good_halves == cc.half_origin_instances);
        }
    }
}

TEST_CASE("crosscheck on the drawer problem reports not applicable") {
    OracleProblem p = OracleProblem::make_grover(2);
    CrosscheckReport cc = crosscheck_shortcut(p, BitString::parse("01"));
    CHECK(!cc.applicable);
    CHECK(cc.note.find("not applicable") != std::string::npos);
    CHECK_THROWS(good_half_tables(p, BitString::parse("01")));
}

TEST_CASE("split enumeration is deterministic and covers each pair once") {
    OracleProblem p = OracleProblem::make_deutsch_jozsa(2);
    SplitEnumeration a = enumerate_splits(p, BitString::parse("0101"));
    SplitEnumeration b = enumerate_splits(p, BitString::parse("0101"));
    REQUIRE(a.candidates.size() == b.candidates.size());
    CHECK(a.candidates.size() == 7);  // 2^(4-1) - 1 bipartitions
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    for (size_t i = 0; i < a.candidates.size(); ++i) {
        CHECK(a.candidates[i].cells_i == b.candidates[i].cells_i);
        CHECK(a.candidates[i].accepted == b.candidates[i].accepted);
        // Each unordered bipartition appears exactly once, cell 0 on side i.
        CHECK(a.candidates[i].cells_i.front() == 0);
        CHECK(seen.emplace(a.candidates[i].cells_i, a.candidates[i].cells_j).second);
        // Sides are disjoint and covering.
        std::vector<int> all;
        std::set_union(a.candidates[i].cells_i.begin(), a.candidates[i].cells_i.end(),
                       a.candidates[i].cells_j.begin(), a.candidates[i].cells_j.end(),
                       std::back_inserter(all));
        CHECK(all == std::vector<int>{0, 1, 2, 3});
    }
}
