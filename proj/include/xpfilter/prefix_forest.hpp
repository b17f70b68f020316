#pragma once

#include "xpfilter/regex_ir.hpp"

#include <string>
#include <vector>

namespace xpfilter {

// One node of a common-prefix tree. `shared_atoms` always covers whole steps
// (it ends in an OpenTagMatch); a profile whose atom list ends exactly here is
// listed in `terminal_profiles`.
struct PrefixNode {
    std::vector<RegexAtom> shared_atoms;
    std::vector<PrefixNode> children;
    std::vector<ProfileId> terminal_profiles;
    bool operator==(const PrefixNode&) const = default;
};

struct PrefixForest {
    std::vector<PrefixNode> trees;
    bool empty() const noexcept { return trees.empty(); }
    bool operator==(const PrefixForest&) const = default;
};

// Sorts IRs by their XPath rendering and grows shared prefixes one step at a
// time. Siblings (and tree roots) never start with the same step. Throws
// InvalidArgument on an empty input or duplicate profile ids.
PrefixForest build_prefix_forest(const std::vector<StackRegexIr>& irs);

// One IR per terminal, ordered by profile id.
std::vector<StackRegexIr> expand_forest(const PrefixForest& forest);

// Indented text rendering, one node per line: `OPEN(a0) ... => P0 P3`.
std::string dump_forest(const PrefixForest& forest);

struct ForestStats {
    std::size_t trees = 0;
    std::size_t nodes = 0;
    std::size_t open_atoms = 0;  // tag matchers needed after sharing
};
ForestStats forest_stats(const PrefixForest& forest);

}  // namespace xpfilter
