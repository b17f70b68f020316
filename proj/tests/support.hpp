#pragma once

#include "xpfilter/datapath.hpp"
#include "xpfilter/prefix_forest.hpp"
#include "xpfilter/profile.hpp"
#include "xpfilter/regex_ir.hpp"

#include <string>
#include <vector>

namespace xpfilter::test {

inline std::vector<ProfileAst> parse_all(const std::vector<std::string>& raw) { return parse_profiles(raw, nullptr); }

inline std::vector<StackRegexIr> lower_all(const std::vector<ProfileAst>& asts) {
    std::vector<StackRegexIr> irs;
    for (const auto& a : asts) irs.push_back(lower_profile(a));
    return irs;
}

inline Datapath compile(const std::vector<std::string>& raw, DatapathConfig config = {}) {
    return lower_to_datapath(build_prefix_forest(lower_all(parse_all(raw))), config);
}

}  // namespace xpfilter::test
