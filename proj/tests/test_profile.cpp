#include "xpfilter/errors.hpp"
#include "xpfilter/profile.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace xpfilter;

namespace {

TagCode tc(const char* s) { return TagCode::parse(s); }

}  // namespace

TEST_SUITE("profile") {

TEST_CASE("basic profiles") {
    const auto ast = parse_profile("a0//b0", 0);
    REQUIRE(ast.steps.size() == 2);
    CHECK(ast.steps[0] == LocationStep{Axis::Child, tc("a0")});
    CHECK(ast.steps[1] == LocationStep{Axis::Descendant, tc("b0")});

    const auto single = parse_profile("a0", 4);
    CHECK(single.profile_id == 4);
    CHECK(single.steps == std::vector<LocationStep>{{Axis::Child, tc("a0")}});

    const auto mixed = parse_profile("a0/b0//c0", 1);
    CHECK(mixed.steps == std::vector<LocationStep>{
                             {Axis::Child, tc("a0")}, {Axis::Child, tc("b0")}, {Axis::Descendant, tc("c0")}});
}

TEST_CASE("leading separators") {
    CHECK(parse_profile("/a0/b0", 0).steps == parse_profile("a0/b0", 0).steps);
    const auto desc = parse_profile("//a0/b0", 0);
    CHECK(desc.steps[0].axis == Axis::Descendant);
    CHECK(unparse_profile(desc) == "//a0/b0");
    CHECK(unparse_profile(parse_profile("/a0//b0", 0)) == "a0//b0");
}

TEST_CASE("dictionary application") {
    const auto d = Dictionary::build({"catalog", "test.document", "item"});
    const auto ast = parse_profile("catalog//test.document/item", d, 9);
    CHECK(ast.steps[0].tag == tc("a0"));
    CHECK(ast.steps[1].tag == tc("a1"));
    CHECK(ast.steps[2].tag == tc("a2"));
    CHECK(unparse_profile(ast, d) == "catalog//test.document/item");
    CHECK_THROWS_AS(parse_profile("catalog/missing", d, 0), UnknownTag);
    CHECK_THROWS_AS(parse_profile("catalog", 0), UnknownTag);  // not a tag code
}

TEST_CASE("syntax errors carry positions") {
    const auto position_of = [](const char* raw) -> std::size_t {
        try {
            parse_profile(raw, 0);
        } catch (const SyntaxError& e) {
            return *e.position();
        }
        FAIL("expected SyntaxError for " << raw);
        return 0;
    };
    CHECK(position_of("") == 0);
    CHECK(position_of("a0/") == 3);
    CHECK(position_of("a0///b0") == 4);
    CHECK(position_of("a0/ b0") == 3);
    CHECK(position_of("//") == 2);
}

TEST_CASE("unsupported XPath constructs are always rejected") {
    for (const char* raw : {"a0[b0]", "a0/*", "a0/@id", "child::a0", "a0/text()", "a0|b0", "a0/..", "a0/.",
                            "a0[@x='1']", "a0/b0[2]"}) {
        CAPTURE(raw);
        CHECK_THROWS_AS(parse_profile(raw, 0), UnsupportedFeature);
    }
}

TEST_CASE("unparse inverts parse on the supported grammar") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> steps(1, 6), axis(0, 1), sym(0, 35);
    const auto symbol = [&] {
        const int s = sym(rng);
        return static_cast<char>(s < 26 ? 'a' + s : '0' + (s - 26));
    };
    for (int trial = 0; trial < 500; ++trial) {
        ProfileAst ast;
        ast.profile_id = static_cast<ProfileId>(trial);
        const int n = steps(rng);
        for (int i = 0; i < n; ++i) {
            ast.steps.push_back({axis(rng) ? Axis::Child : Axis::Descendant,
                                 TagCode::parse(std::string{symbol(), symbol()})});
        }
        CHECK(parse_profile(unparse_profile(ast), ast.profile_id) == ast);
    }
}

TEST_CASE("profile files") {
    std::istringstream in("a0//b0\n\n  a0/b0  \nc0\n");
    const auto lines = read_profile_lines(in);
    REQUIRE(lines.size() == 3);
    const auto asts = parse_profiles(lines, nullptr);
    CHECK(asts[1].profile_id == 1);
    CHECK(unparse_profile(asts[1]) == "a0/b0");
    CHECK(asts[2].profile_id == 2);
}

}  // TEST_SUITE
