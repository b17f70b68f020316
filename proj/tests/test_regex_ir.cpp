#include "support.hpp"
#include "xpfilter/errors.hpp"

#include <doctest.h>

#include <random>

using namespace xpfilter;

TEST_SUITE("regex_ir") {

TEST_CASE("descendant step lowers to gap plus negation") {
    const auto ir = lower_profile(parse_profile("a0//b0", 0));
    CHECK(dump_line(ir) == "P0: OPEN(a0) GAP NEG(/a0) OPEN(b0)");
    CHECK_FALSE(ir.uses_stack);
}

TEST_CASE("child step adds the stack directive") {
    const auto ir = lower_profile(parse_profile("a0/b0", 3));
    CHECK(dump_line(ir) == "P3: OPEN(a0) GAP NEG(/a0) TOS(a0) OPEN(b0)");
    CHECK(ir.uses_stack);
    const std::vector<RegexAtom> expected{OpenTagMatch{TagCode::parse("a0")}, GapPattern{},
                                          NegationGuard{TagCode::parse("a0")}, StackCheck{TagCode::parse("a0")},
                                          OpenTagMatch{TagCode::parse("b0")}};
    CHECK(ir.atoms == expected);
}

TEST_CASE("single step has no gap") {
    const auto ir = lower_profile(parse_profile("a0", 0));
    CHECK(dump_line(ir) == "P0: OPEN(a0)");
    CHECK_FALSE(ir.uses_stack);
}

TEST_CASE("unanchored first step starts with a gap") {
    const auto ir = lower_profile(parse_profile("//a0/b0//c0", 2));
    CHECK(dump_line(ir) == "P2: GAP OPEN(a0) GAP NEG(/a0) TOS(a0) OPEN(b0) GAP NEG(/b0) OPEN(c0)");
    CHECK(sort_key(ir) == "//a0/b0//c0");
}

TEST_CASE("sort key restores separators") {
    CHECK(sort_key(lower_profile(parse_profile("a0/b0//c0//d0", 0))) == "a0/b0//c0//d0");
    CHECK(sort_key(lower_profile(parse_profile("a0", 0))) == "a0");
}

TEST_CASE("axis fidelity and guard placement over random profiles") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> steps(1, 6), coin(0, 1), idx(0, 259);
    for (int trial = 0; trial < 1000; ++trial) {
        ProfileAst ast;
        const int n = steps(rng);
        bool child_after_first = false;
        for (int i = 0; i < n; ++i) {
            const Axis axis = coin(rng) ? Axis::Child : Axis::Descendant;
            if (i > 0 && axis == Axis::Child) child_after_first = true;
            ast.steps.push_back({axis, TagCode::from_sequence_index(static_cast<std::size_t>(idx(rng)))});
        }
        const auto ir = lower_profile(ast);
        CHECK(ir.uses_stack == child_after_first);
        CHECK(ir.uses_stack == atoms_use_stack(ir.atoms));

        // One guard per segment, naming the preceding step's tag; stack checks
        // sit directly before an open match.
        const auto parts = split_steps(ir.atoms);
        REQUIRE(parts.size() == ast.steps.size());
        for (std::size_t s = 1; s < parts.size(); ++s) {
            std::size_t guards = 0;
            for (const auto& atom : parts[s]) {
                if (const auto* g = std::get_if<NegationGuard>(&atom)) {
                    ++guards;
                    CHECK(g->tag == ast.steps[s - 1].tag);
                }
            }
            CHECK(guards == 1);
        }
        for (std::size_t i = 0; i < ir.atoms.size(); ++i) {
            if (std::holds_alternative<StackCheck>(ir.atoms[i])) {
                REQUIRE(i + 1 < ir.atoms.size());
                CHECK(std::holds_alternative<OpenTagMatch>(ir.atoms[i + 1]));
            }
        }
        CHECK(raise_profile(ir) == ast);
    }
}

TEST_CASE("raise rejects atom lists lowering never produces") {
    StackRegexIr ir;
    ir.atoms = {GapPattern{}, NegationGuard{TagCode::parse("a0")}, OpenTagMatch{TagCode::parse("b0")}};
    CHECK_THROWS_AS(raise_profile(ir), InvalidArgument);
    ir.atoms = {OpenTagMatch{TagCode::parse("a0")}, GapPattern{}};
    CHECK_THROWS_AS(raise_profile(ir), InvalidArgument);
}

}  // TEST_SUITE
