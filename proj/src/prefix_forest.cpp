#include "xpfilter/prefix_forest.hpp"

#include "xpfilter/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <span>

namespace xpfilter {

namespace {

struct Item {
    const StackRegexIr* ir;
    std::vector<std::span<const RegexAtom>> steps;
};

std::vector<PrefixNode> grow(const std::vector<const Item*>& items, std::size_t depth) {
    // Items arrive sorted; groups keep the order of their first member.
    std::vector<std::pair<std::string, std::vector<const Item*>>> groups;
    std::map<std::string, std::size_t> group_of;
    for (const Item* item : items) {
        const std::string key = to_string(item->steps[depth]);
        auto [it, inserted] = group_of.emplace(key, groups.size());
        if (inserted) groups.push_back({key, {}});
        groups[it->second].second.push_back(item);
    }

    std::vector<PrefixNode> nodes;
    nodes.reserve(groups.size());
    for (const auto& [key, members] : groups) {
        PrefixNode node;
        const auto step = members.front()->steps[depth];
        node.shared_atoms.assign(step.begin(), step.end());
        std::vector<const Item*> longer;
        for (const Item* item : members) {
            if (item->steps.size() == depth + 1) {
                node.terminal_profiles.push_back(item->ir->profile_id);
            } else {
                longer.push_back(item);
            }
        }
        if (!longer.empty()) node.children = grow(longer, depth + 1);

        // Path compression: a lone child with no terminal split point merges up.
        while (node.terminal_profiles.empty() && node.children.size() == 1) {
            PrefixNode child = std::move(node.children.front());
            node.shared_atoms.insert(node.shared_atoms.end(), child.shared_atoms.begin(), child.shared_atoms.end());
            node.children = std::move(child.children);
            node.terminal_profiles = std::move(child.terminal_profiles);
        }
        nodes.push_back(std::move(node));
    }
    return nodes;
}

void expand_node(const PrefixNode& node, std::vector<RegexAtom>& path, std::vector<StackRegexIr>& out) {
    const std::size_t mark = path.size();
    path.insert(path.end(), node.shared_atoms.begin(), node.shared_atoms.end());
    for (const ProfileId id : node.terminal_profiles) {
        StackRegexIr ir;
        ir.profile_id = id;
        ir.atoms = path;
        ir.uses_stack = atoms_use_stack(path);
        out.push_back(std::move(ir));
    }
    for (const auto& child : node.children) expand_node(child, path, out);
    path.resize(mark);
}

void dump_node(const PrefixNode& node, std::size_t indent, std::string& out) {
    out.append(indent * 2, ' ');
    out += to_string(std::span<const RegexAtom>(node.shared_atoms));
    if (!node.terminal_profiles.empty()) {
        out += " =>";
        for (const ProfileId id : node.terminal_profiles) out += " P" + std::to_string(id);
    }
    out += '\n';
    for (const auto& child : node.children) dump_node(child, indent + 1, out);
}

void count_node(const PrefixNode& node, ForestStats& stats) {
    ++stats.nodes;
    for (const auto& atom : node.shared_atoms) {
        if (std::holds_alternative<OpenTagMatch>(atom)) ++stats.open_atoms;
    }
    for (const auto& child : node.children) count_node(child, stats);
}

}  // namespace

PrefixForest build_prefix_forest(const std::vector<StackRegexIr>& irs) {
    if (irs.empty()) throw InvalidArgument("cannot build a prefix forest from zero profiles");
    std::set<ProfileId> ids;
    for (const auto& ir : irs) {
        if (!ids.insert(ir.profile_id).second) {
            throw InvalidArgument("duplicate profile id " + std::to_string(ir.profile_id));
        }
    }

    std::vector<Item> items;
    items.reserve(irs.size());
    for (const auto& ir : irs) items.push_back({&ir, split_steps(ir.atoms)});
    std::vector<std::pair<std::string, const Item*>> keyed;
    keyed.reserve(items.size());
    for (const auto& item : items) keyed.emplace_back(sort_key(*item.ir), &item);
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second->ir->profile_id < b.second->ir->profile_id;
    });

    std::vector<const Item*> sorted;
    sorted.reserve(keyed.size());
    for (const auto& [key, item] : keyed) sorted.push_back(item);

    PrefixForest forest;
    forest.trees = grow(sorted, 0);
    return forest;
}

std::vector<StackRegexIr> expand_forest(const PrefixForest& forest) {
    std::vector<StackRegexIr> out;
    std::vector<RegexAtom> path;
    for (const auto& tree : forest.trees) expand_node(tree, path, out);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.profile_id < b.profile_id; });
    return out;
}

std::string dump_forest(const PrefixForest& forest) {
    std::string out;
    for (std::size_t i = 0; i < forest.trees.size(); ++i) {
        out += "T" + std::to_string(i) + ":\n";
        dump_node(forest.trees[i], 1, out);
    }
    return out;
}

ForestStats forest_stats(const PrefixForest& forest) {
    ForestStats stats;
    stats.trees = forest.trees.size();
    for (const auto& tree : forest.trees) count_node(tree, stats);
    return stats;
}

}  // namespace xpfilter
