#pragma once

#include "xpfilter/profile.hpp"
#include "xpfilter/simulator.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace xpfilter::oracle {

struct Span {
    std::size_t open_start = 0;  // offset of '<' of the open tag
    std::size_t close_end = 0;   // offset one past '>' of the close tag
    bool operator==(const Span&) const = default;
};

struct Node {
    TagCode tag;
    int parent = -1;
    std::vector<std::size_t> children;
    Span span;
};

// Nodes are stored in document (open-tag) order.
struct ElementTree {
    std::vector<Node> nodes;
    std::vector<std::size_t> roots;
};

// Strict parser for encoded documents: `<xy>`, `</xy>`, opaque text, at most
// one root element. Throws MalformedDocument.
ElementTree parse_tree(std::string_view doc);

struct Evaluation {
    bool matched = false;
    std::vector<Span> witness;  // one span per step, root-most first
};

// Exhaustive search; the witness has the earliest final node.
Evaluation evaluate(const ElementTree& tree, const ProfileAst& ast);

// One event per matched profile, at the '>' of the witness' final open tag.
std::vector<MatchEvent> match_document(const ElementTree& tree, const std::vector<ProfileAst>& profiles,
                                       std::size_t doc_id);

}  // namespace xpfilter::oracle
