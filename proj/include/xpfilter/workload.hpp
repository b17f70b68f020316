#pragma once

#include "xpfilter/dictionary.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace xpfilter::workload {

// Stand-in for a DTD: a tag universe plus the children each tag may have.
// Element 0 is the document root. Documents never nest a tag inside itself.
struct Schema {
    std::vector<std::string> names;              // original (unencoded) names
    Dictionary dict;                             // name -> code, a0 onwards
    std::vector<std::vector<std::size_t>> children;
    std::size_t root = 0;
};

struct SchemaParams {
    std::size_t alphabet = 32;  // distinct tags, at most 260
    std::size_t fanout = 3;     // allowed children per tag
    std::uint64_t seed = 1;
};

Schema make_schema(const SchemaParams& params);

struct ProfileParams {
    std::size_t count = 16;
    std::size_t length = 2;
    double axis_mix = 0.5;      // fraction of non-first steps using '/'
    double prefix_share = 0.5;  // chance a profile branches off an earlier one
    double root_anchor = 0.25;  // chance a fresh profile starts at the root
    std::uint64_t seed = 1;
};

// Every profile has exactly round(axis_mix * (length - 1)) child steps. Fresh
// (non-branching) profiles draw their first step without replacement while
// unused first steps remain, so prefix_share = 0 yields no shared prefixes
// until the first-step pool is exhausted. Profiles use original tag names.
std::vector<std::string> gen_profiles(const Schema& schema, const ProfileParams& params);

struct DocumentParams {
    std::size_t size_bytes = 4096;
    std::size_t max_depth = 10;
    std::uint64_t seed = 1;
};

// Encoded, well-formed, non-recursive document of exactly `size_bytes`
// bytes (text padding absorbs the remainder). Throws InvalidArgument when the
// size cannot hold a root element.
std::string gen_document(const Schema& schema, const DocumentParams& params);

// Deterministic helpers over the raw 64-bit engine output.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);
bool bernoulli(std::mt19937_64& rng, double p);

}  // namespace xpfilter::workload
