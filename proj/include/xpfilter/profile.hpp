#pragma once

#include "xpfilter/dictionary.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace xpfilter {

using ProfileId = std::uint32_t;

enum class Axis { Child, Descendant };

struct LocationStep {
    Axis axis = Axis::Child;
    TagCode tag;
    bool operator==(const LocationStep&) const = default;
};

// A linear XPath profile. A first step with Axis::Child is anchored at the
// document root; Axis::Descendant (leading `//`) may start anywhere.
struct ProfileAst {
    ProfileId profile_id = 0;
    std::vector<LocationStep> steps;
    bool operator==(const ProfileAst&) const = default;
};

// Grammar: ('/'|'//')? name (('/'|'//') name)*
// Names are looked up in `dict`. A leading '/' and no leading separator both
// mean a root-anchored first step.
ProfileAst parse_profile(std::string_view raw, const Dictionary& dict, ProfileId profile_id);

// Same grammar, but names must already be tag codes.
ProfileAst parse_profile(std::string_view raw, ProfileId profile_id);

// Renders the profile with codes, or with original names when `dict` is given.
// The output never carries a leading '/' for anchored profiles.
std::string unparse_profile(const ProfileAst& ast);
std::string unparse_profile(const ProfileAst& ast, const Dictionary& dict);

// One profile per non-blank line; profile ids count non-blank lines from 0.
std::vector<std::string> read_profile_lines(std::istream& in);
std::vector<std::string> read_profile_file(const std::string& path);

std::vector<ProfileAst> parse_profiles(const std::vector<std::string>& lines, const Dictionary* dict);

}  // namespace xpfilter
