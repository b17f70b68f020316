#include "xpfilter/errors.hpp"
#include "xpfilter/oracle.hpp"
#include "xpfilter/profile.hpp"
#include "xpfilter/workload.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace xpfilter;
using namespace xpfilter::workload;

namespace {

std::size_t child_steps(const ProfileAst& a) {
    std::size_t n = 0;
    for (std::size_t i = 1; i < a.steps.size(); ++i) n += a.steps[i].axis == Axis::Child;
    return n;
}

std::size_t tree_depth(const oracle::ElementTree& t, std::size_t node) {
    std::size_t d = 1;
    for (int p = t.nodes[node].parent; p >= 0; p = t.nodes[static_cast<std::size_t>(p)].parent) ++d;
    return d;
}

}  // namespace

TEST_SUITE("workload") {

TEST_CASE("schema basics") {
    const auto s = make_schema({32, 3, 7});
    CHECK(s.names.size() == 32);
    CHECK(s.names[0] == "tag000");
    CHECK(s.dict.code_of("tag000") == TagCode::parse("a0"));
    CHECK(s.dict.code_of("tag031") == TagCode::from_sequence_index(31));
    REQUIRE(s.children.size() == 32);
    for (std::size_t t = 0; t < s.children.size(); ++t)
        for (const auto c : s.children[t]) CHECK(c != t);
    CHECK_THROWS_AS(make_schema({1, 3, 1}), InvalidArgument);
    CHECK_THROWS_AS(make_schema({261, 3, 1}), InvalidArgument);
    CHECK_THROWS_AS(make_schema({8, 0, 1}), InvalidArgument);
}

TEST_CASE("smallest experiment configuration") {
    const auto s = make_schema({});
    const auto ps = gen_profiles(s, {16, 2, 0.5, 0.5, 0.25, 1});
    REQUIRE(ps.size() == 16);
    for (const auto& raw : ps) CHECK(parse_profile(raw, s.dict, 0).steps.size() == 2);
}

TEST_CASE("one single-tag profile") {
    const auto s = make_schema({});
    for (std::uint64_t seed : {1u, 2u, 99u}) {
        const auto ps = gen_profiles(s, {1, 1, 0.0, 0.5, 0.25, seed});
        REQUIRE(ps.size() == 1);
        CHECK(parse_profile(ps[0], s.dict, 0).steps.size() == 1);
    }
}

TEST_CASE("profiles are deterministic under seed") {
    const auto s = make_schema({});
    const ProfileParams p{256, 6, 0.5, 0.5, 0.25, 42};
    CHECK(gen_profiles(s, p) == gen_profiles(s, p));
    auto q = p;
    q.seed = 43;
    CHECK(gen_profiles(s, p) != gen_profiles(s, q));
}

TEST_CASE("exact child-step count") {
    const auto s = make_schema({});
    for (const double mix : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        for (const std::size_t len : {1u, 2u, 4u, 6u}) {
            const auto expected = static_cast<std::size_t>(std::lround(mix * static_cast<double>(len - 1)));
            for (const auto& raw : gen_profiles(s, {64, len, mix, 0.5, 0.25, 3})) {
                const auto a = parse_profile(raw, s.dict, 0);
                CHECK(a.steps.size() == len);
                CHECK(child_steps(a) == expected);
            }
        }
    }
}

TEST_CASE("zero prefix share keeps first steps distinct while the pool lasts") {
    const auto s = make_schema({});
    const auto ps = gen_profiles(s, {16, 4, 0.5, 0.0, 0.0, 5});
    std::set<std::string> firsts;
    for (const auto& raw : ps) firsts.insert(parse_profile(raw, s.dict, 0).steps[0].tag.str());
    CHECK(firsts.size() == ps.size());
}

TEST_CASE("invalid profile parameters") {
    const auto s = make_schema({});
    CHECK_THROWS_AS(gen_profiles(s, {0, 2, 0.5, 0.5, 0.25, 1}), InvalidArgument);
    CHECK_THROWS_AS(gen_profiles(s, {4, 0, 0.5, 0.5, 0.25, 1}), InvalidArgument);
    CHECK_THROWS_AS(gen_profiles(s, {4, 2, 1.5, 0.5, 0.25, 1}), InvalidArgument);
    CHECK_THROWS_AS(gen_profiles(s, {4, 2, 0.5, -0.1, 0.25, 1}), InvalidArgument);
}

TEST_CASE("documents hit the target size exactly") {
    const auto s = make_schema({});
    for (const std::size_t size : {9u, 10u, 100u, 4096u, 65536u, 1000000u}) {
        const auto doc = gen_document(s, {size, 10, size});
        CHECK(doc.size() == size);
        CHECK_NOTHROW(oracle::parse_tree(doc));
    }
}

TEST_CASE("minimal document") {
    const auto doc = gen_document(make_schema({}), {9, 10, 1});
    CHECK(doc == "<a0></a0>");
    CHECK_THROWS_AS(gen_document(make_schema({}), {8, 10, 1}), InvalidArgument);
    CHECK_THROWS_AS(gen_document(make_schema({}), {100, 0, 1}), InvalidArgument);
}

TEST_CASE("documents are deterministic, parse, respect depth and never self-nest") {
    const auto s = make_schema({24, 3, 11});
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const DocumentParams p{8192, 1 + seed % 10, seed};
        const auto doc = gen_document(s, p);
        CHECK(doc == gen_document(s, p));
        const auto tree = oracle::parse_tree(doc);
        CHECK(tree.roots.size() == 1);
        CHECK(tree.nodes[0].tag == TagCode::parse("a0"));
        for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
            CHECK(tree_depth(tree, n) <= p.max_depth);
            for (int a = tree.nodes[n].parent; a >= 0; a = tree.nodes[static_cast<std::size_t>(a)].parent)
                CHECK(tree.nodes[static_cast<std::size_t>(a)].tag != tree.nodes[n].tag);
        }
    }
}

TEST_CASE("random helpers") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) CHECK(uniform_index(rng, 7) < 7);
    CHECK_THROWS_AS(uniform_index(rng, 0), InvalidArgument);
    CHECK_FALSE(bernoulli(rng, 0.0));
    CHECK(bernoulli(rng, 1.0));
}

}  // TEST_SUITE
