#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "oraclesim/problems.hpp"

using namespace oraclesim;

TEST_CASE("drawer search: delta tables over all settings") {
    OracleProblem p = OracleProblem::make_grover(2);
    CHECK(p.setting_count() == 4);
    CHECK(p.settings()[1].str() == "01");
    // f_01(01) = 1, f_01(11) = 0
    CHECK(p.value(1, 0b01) == 1);
    CHECK(p.value(1, 0b11) == 0);
    CHECK(p.solution(1).str() == "01");
    CHECK(p.cells().cell_count == 2);
    CHECK(p.cells().cell_width == 1);
    CHECK(p.validate().empty());

    OracleProblem p1 = OracleProblem::make_grover(1);
    CHECK(p1.setting_count() == 2);
    CHECK(p1.value(0, 0) == 1);

    OracleProblem p3 = OracleProblem::make_grover(3);
    CHECK(p3.setting_count() == 8);
    for (int i = 0; i < p3.setting_count(); ++i) {
        int ones = 0;
        for (int a = 0; a < p3.arg_count(); ++a) ones += static_cast<int>(p3.value(i, a));
        CHECK(ones == 1);  // exactly one ball per table
    }
    CHECK_THROWS(OracleProblem::make_grover(0));
    CHECK_THROWS(OracleProblem::make_grover(11));
}

TEST_CASE("constant/balanced tables: counts and the suffix convention") {
    OracleProblem p = OracleProblem::make_deutsch_jozsa(2);
    CHECK(p.setting_count() == 8);  // 2 constant + 6 balanced
    CHECK(p.view() == SolutionView::zero_test);
    // The setting string is the table read for increasing arguments.
    auto idx = p.setting_index(BitString::parse("0011"));
    REQUIRE(idx.has_value());
    CHECK(p.value(*idx, 0b00) == 0);
    CHECK(p.value(*idx, 0b10) == 1);
    CHECK(p.table_structured());
    CHECK(p.validate().empty());

    // Pre-solution labels: constants map to all-zero, complements share.
    CHECK(p.solution_of(BitString::parse("0000")).str() == "00");
    CHECK(p.solution_of(BitString::parse("1111")).str() == "00");
    CHECK(p.solution_of(BitString::parse("0011")).str() == "10");
    CHECK(p.solution_of(BitString::parse("1100")).str() == "10");
    CHECK(p.solution_of(BitString::parse("0101")).str() == "01");
    CHECK(p.solution_of(BitString::parse("0110")).str() == "11");

    OracleProblem p1 = OracleProblem::make_deutsch_jozsa(1);
    CHECK(p1.setting_count() == 4);  // tables 00, 11, 01, 10

    OracleProblem p3 = OracleProblem::make_deutsch_jozsa(3);
    CHECK(p3.setting_count() == 72);
    for (int i = 0; i < p3.setting_count(); ++i) {
        int ones = 0;
        for (int a = 0; a < p3.arg_count(); ++a) ones += static_cast<int>(p3.value(i, a));
        CHECK((ones == 0 || ones == 8 || ones == 4));
        if (ones == 4) {
            CHECK(!p3.solution(i).all_zero());  // balanced pre-solutions are nonzero
        }
    }
}

TEST_CASE("periodic tables: structure of sigma") {
    OracleProblem p = OracleProblem::make_simon(2);
    CHECK(p.setting_count() == 6);
    CHECK(p.cells().cell_count == 4);
    CHECK(p.cells().cell_width == 1);
    CHECK(p.table_structured());
    CHECK(p.validate().empty());
    // b=0011 has period 01: f(00)=f(01)=0.
    CHECK(p.solution_of(BitString::parse("0011")).str() == "01");
    CHECK(p.solution_of(BitString::parse("0101")).str() == "10");
    CHECK(p.solution_of(BitString::parse("0110")).str() == "11");

    // "each value of the function appears exactly twice in each table"
    for (int i = 0; i < p.setting_count(); ++i) {
        std::map<std::uint32_t, int> freq;
        for (int a = 0; a < p.arg_count(); ++a) ++freq[p.value(i, a)];
        for (auto& [v, c] : freq) CHECK(c == 2);
    }

    OracleProblem p3 = OracleProblem::make_simon(3);
    CHECK(p3.setting_count() == 168);
    CHECK(p3.value_width() == 2);
    CHECK(p3.validate().empty());
    for (int i = 0; i < p3.setting_count(); ++i) {
        const BitString& period = p3.solution(i);
        for (int a = 0; a < p3.arg_count(); ++a) {
            for (int c = 0; c < p3.arg_count(); ++c) {
                bool same = p3.value(i, a) == p3.value(i, c);
                bool related = (a ^ c) == 0 ||
                               static_cast<std::uint64_t>(a ^ c) == period.value();
                CHECK(same == related);
            }
        }
    }
    CHECK_THROWS(OracleProblem::make_simon(1));
}

TEST_CASE("save and load round-trip bit-exactly") {
    for (const OracleProblem& p :
         {OracleProblem::make_grover(2), OracleProblem::make_deutsch_jozsa(2),
          OracleProblem::make_simon(2), OracleProblem::make_simon(3)}) {
        std::ostringstream buffer;
        p.save(buffer);
        std::istringstream in(buffer.str());
        OracleProblem back = OracleProblem::parse(in, "roundtrip");
        CHECK(back == p);
        std::ostringstream again;
        back.save(again);
        CHECK(again.str() == buffer.str());
    }
}

TEST_CASE("parser reports malformed inputs with line numbers") {
    auto expect_error = [](const std::string& text, const std::string& needle) {
        std::istringstream in(text);
        try {
            OracleProblem::parse(in, "test");
            FAIL("expected a parse error for: " << needle);
        } catch (const std::exception& e) {
            std::string msg = e.what();
            INFO(msg);
            CHECK(msg.find(needle) != std::string::npos);
        }
    };
    std::string good =
        "problem tiny\n"
        "argwidth 1  valwidth 1  cellwidth 1\n"
        "setting 00 solution 0\n"
        "setting 01 solution 1\n"
        "row 00 0 0\nrow 00 1 0\nrow 01 0 0\nrow 01 1 1\n";
    {
        std::istringstream in(good);
        OracleProblem p = OracleProblem::parse(in, "test");
        CHECK(p.setting_count() == 2);
        CHECK(p.cells().cell_count == 2);
        CHECK(p.family() == Family::custom);
    }
    expect_error("problem x\nargwidth 1 valwidth 1 cellwidth 1\n"
                 "setting 00 solution 0\nsetting 00 solution 1\n",
                 "test:4: duplicate setting");
    expect_error("problem x\nargwidth 1 valwidth 1 cellwidth 1\n"
                 "setting 00 solution 0\nrow 00 0 0\n",
                 "missing argument");
    expect_error("problem x\nargwidth 1 valwidth 1 cellwidth 1\n"
                 "wibble 3\n",
                 "test:3: unknown keyword 'wibble'");
    expect_error("problem x\nargwidth 1 valwidth 1 cellwidth 1\n"
                 "setting 00 solution 0\nrow 00 00 0\n",
                 "test:4: argument width");
    expect_error("problem x\nargwidth 1 valwidth 1 cellwidth 1\n"
                 "setting 000 solution 0\nsetting 00 solution 0\n",
                 "test:4: setting width");
    expect_error("problem x\nargwidth 1 valwidth 1 cellwidth 3\n"
                 "setting 00 solution 0\nrow 00 0 0\nrow 00 1 0\n",
                 "cell width 3 does not divide");
}

TEST_CASE("comments and the view keyword survive a round-trip") {
    std::string text =
        "# a comment line\n"
        "problem demo\n"
        "argwidth 1  valwidth 1  cellwidth 2  # trailing comment\n"
        "view zerotest\n"
        "setting 00 solution 0\n"
        "setting 11 solution 1\n"
        "row 00 0 0\nrow 00 1 0\nrow 11 0 1\nrow 11 1 1\n";
    std::istringstream in(text);
    OracleProblem p = OracleProblem::parse(in, "demo");
    CHECK(p.view() == SolutionView::zero_test);
    CHECK(p.rule_solution(0).str() == "0");
    CHECK(p.rule_solution(1).str() == "1");
}

TEST_CASE("validate flags contradictory custom problems") {
    // Two settings with identical tables but different solutions.
    std::string text =
        "problem clash\n"
        "argwidth 1  valwidth 1  cellwidth 1\n"
        "setting 00 solution 0\n"
        "setting 01 solution 1\n"
        "row 00 0 1\nrow 00 1 1\nrow 01 0 1\nrow 01 1 1\n";
    std::istringstream in(text);
    OracleProblem p = OracleProblem::parse(in, "clash");
    auto violations = p.validate();
    REQUIRE(!violations.empty());
    CHECK(violations.front().find("share a table") != std::string::npos);
}
