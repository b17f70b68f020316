#pragma once

#include "xpfilter/dictionary.hpp"
#include "xpfilter/profile.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace xpfilter {

struct OpenTagMatch {
    TagCode tag;
    bool operator==(const OpenTagMatch&) const = default;
};

// The inter-tag filler `[\w\s]+[<\c\d>|</\c\d>]*`: any text and any tags.
struct GapPattern {
    bool operator==(const GapPattern&) const = default;
};

// Cancels the enclosing segment when `</tag>` completes.
struct NegationGuard {
    TagCode tag;
    bool operator==(const NegationGuard&) const = default;
};

// Stack directive: the following open tag only matches while `expected` is on
// top of the tag stack.
struct StackCheck {
    TagCode expected;
    bool operator==(const StackCheck&) const = default;
};

using RegexAtom = std::variant<OpenTagMatch, GapPattern, NegationGuard, StackCheck>;

std::string to_string(const RegexAtom& atom);
std::string to_string(std::span<const RegexAtom> atoms);

struct StackRegexIr {
    ProfileId profile_id = 0;
    std::vector<RegexAtom> atoms;
    bool uses_stack = false;
    bool operator==(const StackRegexIr&) const = default;
};

// Open(t1), then per later step: Gap, Neg(/t_prev), [TOS(t_prev)], Open(t).
// A root-unanchored profile (leading `//`) starts with a Gap atom.
StackRegexIr lower_profile(const ProfileAst& ast);

// Inverse of lower_profile; throws InvalidArgument on atom lists that
// lower_profile can never produce.
ProfileAst raise_profile(const StackRegexIr& ir);

// Splits an atom list into per-step slices, each ending in an OpenTagMatch.
std::vector<std::span<const RegexAtom>> split_steps(std::span<const RegexAtom> atoms);

bool atoms_use_stack(std::span<const RegexAtom> atoms);

// XPath-style rendering with `/` and `//` restored; used as the sort key.
std::string sort_key(const StackRegexIr& ir);

// `P3: OPEN(a0) GAP NEG(/a0) TOS(a0) OPEN(b0)`
std::string dump_line(const StackRegexIr& ir);
std::string dump_ir(const std::vector<StackRegexIr>& irs);

}  // namespace xpfilter
