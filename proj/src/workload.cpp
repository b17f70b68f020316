#include "xpfilter/workload.hpp"

#include "xpfilter/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace xpfilter::workload {

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    if (n == 0) throw InvalidArgument("uniform_index over an empty range");
    return static_cast<std::size_t>(rng() % n);
}

bool bernoulli(std::mt19937_64& rng, double p) {
    const double u = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
    return u < p;
}

namespace {

std::string tag_name(std::size_t i) {
    std::string digits = std::to_string(i);
    if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
    return "tag" + digits;
}

template <class T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

// Descendant steps skip 0, 1 or 2 intermediate levels (60/30/10).
std::size_t descendant_edges(std::mt19937_64& rng) {
    const std::size_t r = uniform_index(rng, 10);
    return r < 6 ? 1 : (r < 9 ? 2 : 3);
}

struct GenStep {
    bool child_axis = false;  // for the first step: root-anchored
    std::size_t tag = 0;
};

// Picks a tag reachable from `from` in `edges` schema edges without touching
// `path`; falls back to any tag outside `path` when the walk gets stuck.
std::size_t walk(const Schema& schema, std::size_t from, std::size_t edges, std::set<std::size_t>& path,
                 std::mt19937_64& rng) {
    std::size_t cur = from;
    for (std::size_t e = 0; e < edges; ++e) {
        std::vector<std::size_t> options;
        for (const auto c : schema.children[cur]) {
            if (!path.count(c)) options.push_back(c);
        }
        if (options.empty()) break;
        cur = options[uniform_index(rng, options.size())];
        path.insert(cur);
    }
    if (cur == from) {
        std::vector<std::size_t> options;
        for (std::size_t t = 0; t < schema.names.size(); ++t) {
            if (!path.count(t)) options.push_back(t);
        }
        cur = options.empty() ? uniform_index(rng, schema.names.size()) : options[uniform_index(rng, options.size())];
        path.insert(cur);
    }
    return cur;
}

std::string random_text(std::mt19937_64& rng, std::size_t len) {
    static constexpr char kChars[] = "abcdefghijklmnopqrstuvwxyz      0123456789";
    std::string s;
    s.reserve(len);
    for (std::size_t i = 0; i < len; ++i) s.push_back(kChars[uniform_index(rng, sizeof(kChars) - 1)]);
    return s;
}

class DocBuilder {
public:
    DocBuilder(const Schema& schema, const DocumentParams& params)
        : schema_(schema), params_(params), rng_(params.seed ^ 0x9e3779b97f4a7c15ULL) {}

    std::string build() {
        constexpr std::size_t kMinElement = TagCode::kOpenTagBytes + TagCode::kCloseTagBytes;
        if (params_.size_bytes < kMinElement) {
            throw InvalidArgument("document size " + std::to_string(params_.size_bytes) + " is below the minimum of " +
                                  std::to_string(kMinElement) + " bytes");
        }
        if (params_.max_depth == 0) throw InvalidArgument("document depth must be at least 1");
        const TagCode root = code(schema_.root);
        std::string out = root.open_tag();
        std::size_t budget = params_.size_bytes - kMinElement;
        path_.assign(schema_.names.size(), 0);
        path_[schema_.root] = 1;
        std::size_t stalls = 0;
        while (budget >= kMinElement && stalls < 8) {
            std::string part = maybe_text(budget);
            std::string sub = element_under(schema_.root, 2, budget - part.size());
            if (sub.empty()) {
                ++stalls;
                continue;
            }
            out += part;
            out += sub;
            budget -= part.size() + sub.size();
        }
        out += random_text(rng_, budget);
        out += root.close_tag();
        return out;
    }

private:
    TagCode code(std::size_t tag) const { return schema_.dict.entries()[tag].code; }

    std::string maybe_text(std::size_t budget) {
        if (!bernoulli(rng_, 0.6)) return {};
        return random_text(rng_, std::min<std::size_t>(budget / 4, 1 + uniform_index(rng_, 12)));
    }

    std::string element_under(std::size_t parent, std::size_t depth, std::size_t budget) {
        constexpr std::size_t kMinElement = TagCode::kOpenTagBytes + TagCode::kCloseTagBytes;
        if (depth > params_.max_depth || budget < kMinElement) return {};
        std::vector<std::size_t> options;
        for (const auto c : schema_.children[parent]) {
            if (!path_[c]) options.push_back(c);
        }
        if (options.empty()) return {};
        const std::size_t tag = options[uniform_index(rng_, options.size())];

        path_[tag] = 1;
        std::string out = code(tag).open_tag();
        std::size_t remaining = budget - kMinElement;
        std::string text = maybe_text(remaining);
        remaining -= text.size();
        out += text;
        const std::size_t kids = uniform_index(rng_, 4);
        for (std::size_t k = 0; k < kids; ++k) {
            std::string sub = element_under(tag, depth + 1, remaining);
            if (sub.empty()) break;
            remaining -= sub.size();
            out += sub;
            std::string tail = maybe_text(remaining);
            remaining -= tail.size();
            out += tail;
        }
        out += code(tag).close_tag();
        path_[tag] = 0;
        return out;
    }

    const Schema& schema_;
    const DocumentParams& params_;
    std::mt19937_64 rng_;
    std::vector<char> path_;
};

}  // namespace

Schema make_schema(const SchemaParams& params) {
    if (params.alphabet < 2 || params.alphabet > TagCode::kSequenceLength) {
        throw InvalidArgument("schema alphabet must be in [2, 260]");
    }
    if (params.fanout == 0) throw InvalidArgument("schema fanout must be positive");
    Schema schema;
    for (std::size_t i = 0; i < params.alphabet; ++i) schema.names.push_back(tag_name(i));
    schema.dict = Dictionary::build(schema.names);
    schema.children.resize(params.alphabet);
    std::mt19937_64 rng(params.seed);
    for (std::size_t t = 0; t < params.alphabet; ++t) {
        std::vector<std::size_t> candidates;
        for (std::size_t c = 0; c < params.alphabet; ++c) {
            if (c != t && c != schema.root) candidates.push_back(c);
        }
        shuffle(candidates, rng);
        candidates.resize(std::min(params.fanout, candidates.size()));
        std::sort(candidates.begin(), candidates.end());
        schema.children[t] = std::move(candidates);
    }
    return schema;
}

std::vector<std::string> gen_profiles(const Schema& schema, const ProfileParams& params) {
    if (params.count == 0) throw InvalidArgument("profile count must be at least 1");
    if (params.length == 0) throw InvalidArgument("profile length must be at least 1");
    const auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in_unit(params.axis_mix) || !in_unit(params.prefix_share) || !in_unit(params.root_anchor)) {
        throw InvalidArgument("axis_mix, prefix_share and root_anchor must lie in [0, 1]");
    }

    const std::size_t child_steps =
        static_cast<std::size_t>(std::llround(params.axis_mix * static_cast<double>(params.length - 1)));
    std::mt19937_64 rng(params.seed);
    std::vector<std::vector<GenStep>> profiles;
    profiles.reserve(params.count);

    // First-step pool: index alphabet stands for the root-anchored start.
    const std::size_t anchored_slot = schema.names.size();
    std::vector<char> first_used(schema.names.size() + 1, 0);
    std::size_t first_unused = first_used.size();

    const auto fresh_first = [&]() -> GenStep {
        std::size_t slot;
        const bool want_root = bernoulli(rng, params.root_anchor);
        if (first_unused == 0) {
            slot = want_root ? anchored_slot : uniform_index(rng, schema.names.size());
        } else if (want_root && !first_used[anchored_slot]) {
            slot = anchored_slot;
        } else {
            std::vector<std::size_t> unused;
            for (std::size_t s = 0; s < first_used.size(); ++s) {
                if (!first_used[s] && s != anchored_slot) unused.push_back(s);
            }
            slot = unused.empty() ? anchored_slot : unused[uniform_index(rng, unused.size())];
        }
        if (!first_used[slot]) {
            first_used[slot] = 1;
            --first_unused;
        }
        return slot == anchored_slot ? GenStep{true, schema.root} : GenStep{false, slot};
    };

    for (std::size_t p = 0; p < params.count; ++p) {
        std::vector<GenStep> steps;
        std::size_t children_so_far = 0;
        if (!profiles.empty() && params.length > 1 && bernoulli(rng, params.prefix_share)) {
            const auto& donor = profiles[uniform_index(rng, profiles.size())];
            std::vector<std::size_t> feasible;
            std::size_t c = 0;
            for (std::size_t m = 1; m < params.length; ++m) {
                if (m > 1 && donor[m - 1].child_axis) ++c;
                if (c <= child_steps && child_steps - c <= params.length - m) feasible.push_back(m);
            }
            const std::size_t m = feasible[uniform_index(rng, feasible.size())];
            steps.assign(donor.begin(), donor.begin() + static_cast<std::ptrdiff_t>(m));
            for (std::size_t i = 1; i < m; ++i) children_so_far += steps[i].child_axis;
        } else {
            steps.push_back(fresh_first());
        }

        std::vector<char> axes(params.length - steps.size(), 0);
        std::fill(axes.begin(), axes.begin() + static_cast<std::ptrdiff_t>(child_steps - children_so_far), 1);
        shuffle(axes, rng);

        std::set<std::size_t> path;
        for (const auto& s : steps) path.insert(s.tag);
        for (const char child : axes) {
            const std::size_t edges = child ? 1 : descendant_edges(rng);
            steps.push_back({child != 0, walk(schema, steps.back().tag, edges, path, rng)});
        }
        profiles.push_back(std::move(steps));
    }

    std::vector<std::string> out;
    out.reserve(profiles.size());
    for (const auto& steps : profiles) {
        std::string raw = steps.front().child_axis ? "" : "//";
        raw += schema.names[steps.front().tag];
        for (std::size_t i = 1; i < steps.size(); ++i) {
            raw += steps[i].child_axis ? "/" : "//";
            raw += schema.names[steps[i].tag];
        }
        out.push_back(std::move(raw));
    }
    return out;
}

std::string gen_document(const Schema& schema, const DocumentParams& params) {
    return DocBuilder(schema, params).build();
}

}  // namespace xpfilter::workload
