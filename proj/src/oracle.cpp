#include "xpfilter/oracle.hpp"

#include "xpfilter/errors.hpp"

#include <algorithm>
#include <tuple>

namespace xpfilter::oracle {

ElementTree parse_tree(std::string_view doc) {
    ElementTree tree;
    std::vector<std::size_t> open;
    std::size_t i = 0;
    while (i < doc.size()) {
        if (doc[i] != '<') {
            ++i;
            continue;
        }
        const bool closing = i + 1 < doc.size() && doc[i + 1] == '/';
        const std::size_t len = closing ? 5 : 4;
        const std::size_t sym = i + (closing ? 2 : 1);
        if (i + len > doc.size()) throw MalformedDocument("truncated tag", i);
        const auto code = TagCode::try_parse(doc.substr(sym, 2));
        if (!code || doc[i + len - 1] != '>') throw MalformedDocument("bad tag", i);
        if (closing) {
            if (open.empty() || tree.nodes[open.back()].tag != *code) throw MalformedDocument("mismatched close", i);
            tree.nodes[open.back()].span.close_end = i + len;
            open.pop_back();
        } else {
            Node node;
            node.tag = *code;
            node.span.open_start = i;
            const std::size_t idx = tree.nodes.size();
            if (open.empty()) {
                if (!tree.roots.empty()) throw MalformedDocument("second root element", i);
                tree.roots.push_back(idx);
            } else {
                node.parent = static_cast<int>(open.back());
                tree.nodes[open.back()].children.push_back(idx);
            }
            tree.nodes.push_back(node);
            open.push_back(idx);
        }
        i += len;
    }
    if (!open.empty()) throw MalformedDocument("unclosed element", doc.size());
    return tree;
}

Evaluation evaluate(const ElementTree& tree, const ProfileAst& ast) {
    const std::size_t n = tree.nodes.size();
    constexpr int kNone = -2;
    // via[k][v]: predecessor chosen for v at step k, kNone when v does not match
    // the first k+1 steps (-1 marks a first-step match).
    std::vector<std::vector<int>> via(ast.steps.size(), std::vector<int>(n, kNone));

    for (std::size_t k = 0; k < ast.steps.size(); ++k) {
        const auto& step = ast.steps[k];
        for (std::size_t v = 0; v < n; ++v) {
            const Node& node = tree.nodes[v];
            if (node.tag != step.tag) continue;
            if (k == 0) {
                if (step.axis == Axis::Descendant || node.parent < 0) via[0][v] = -1;
                continue;
            }
            // Earliest qualifying ancestor; for Child only the parent qualifies.
            int best = kNone;
            for (int a = node.parent; a >= 0; a = tree.nodes[static_cast<std::size_t>(a)].parent) {
                if (via[k - 1][static_cast<std::size_t>(a)] != kNone) best = a;
                if (step.axis == Axis::Child) break;
            }
            via[k][v] = best;
        }
    }

    Evaluation result;
    const auto& last = via.back();
    for (std::size_t v = 0; v < n; ++v) {
        if (last[v] == kNone) continue;
        result.matched = true;
        int cur = static_cast<int>(v);
        for (std::size_t k = ast.steps.size(); k-- > 0;) {
            result.witness.push_back(tree.nodes[static_cast<std::size_t>(cur)].span);
            cur = via[k][static_cast<std::size_t>(cur)];
        }
        std::reverse(result.witness.begin(), result.witness.end());
        break;
    }
    return result;
}

std::vector<MatchEvent> match_document(const ElementTree& tree, const std::vector<ProfileAst>& profiles,
                                       std::size_t doc_id) {
    std::vector<MatchEvent> events;
    for (const auto& profile : profiles) {
        const auto eval = evaluate(tree, profile);
        if (eval.matched) {
            events.push_back({doc_id, profile.profile_id, eval.witness.back().open_start + TagCode::kOpenTagBytes - 1});
        }
    }
    std::sort(events.begin(), events.end(), [](const MatchEvent& a, const MatchEvent& b) {
        return std::tie(a.doc_id, a.byte_offset, a.profile_id) < std::tie(b.doc_id, b.byte_offset, b.profile_id);
    });
    return events;
}

}  // namespace xpfilter::oracle
