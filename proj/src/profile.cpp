#include "xpfilter/profile.hpp"

#include "xpfilter/errors.hpp"

#include <fstream>
#include <functional>
#include <istream>

namespace xpfilter {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

void reject_unsupported(char c, std::size_t pos) {
    switch (c) {
    case '[':
    case ']': throw UnsupportedFeature("predicate", pos);
    case '*': throw UnsupportedFeature("wildcard", pos);
    case '@': throw UnsupportedFeature("attribute axis", pos);
    case ':': throw UnsupportedFeature("axis specifier or namespace", pos);
    case '(':
    case ')': throw UnsupportedFeature("function call or grouping", pos);
    case '|': throw UnsupportedFeature("union", pos);
    case '=':
    case '!':
    case '<':
    case '>':
    case '\'':
    case '"':
    case ',':
    case '$': throw UnsupportedFeature("expression operator", pos);
    default: break;
    }
}

ProfileAst parse_with(std::string_view raw, ProfileId profile_id,
                      const std::function<TagCode(std::string_view)>& resolve) {
    // Positions in diagnostics are relative to the untrimmed input.
    std::size_t lead = 0;
    while (lead < raw.size() && is_space(raw[lead])) ++lead;
    const std::string_view text = trim(raw);
    if (text.empty()) throw SyntaxError("empty profile", 0);

    ProfileAst ast;
    ast.profile_id = profile_id;
    std::size_t i = 0;
    Axis axis = Axis::Child;
    bool first = true;
    while (true) {
        if (!first || (i < text.size() && text[i] == '/')) {
            if (i >= text.size() || text[i] != '/') throw SyntaxError("expected '/' or '//'", lead + i);
            if (i + 1 < text.size() && text[i + 1] == '/') {
                axis = Axis::Descendant;
                i += 2;
            } else {
                axis = Axis::Child;
                i += 1;
            }
        }
        const std::size_t name_start = i;
        while (i < text.size() && text[i] != '/') {
            reject_unsupported(text[i], lead + i);
            if (is_space(text[i])) throw SyntaxError("whitespace inside profile", lead + i);
            ++i;
        }
        const std::string_view name = text.substr(name_start, i - name_start);
        if (name.empty()) throw SyntaxError("expected tag name", lead + name_start);
        if (name == "." || name == "..") throw UnsupportedFeature("abbreviated step '" + std::string(name) + "'", lead + name_start);
        ast.steps.push_back({axis, resolve(name)});
        first = false;
        if (i >= text.size()) break;
    }
    return ast;
}

std::string unparse_with(const ProfileAst& ast, const std::function<std::string(TagCode)>& name_of) {
    std::string out;
    for (std::size_t i = 0; i < ast.steps.size(); ++i) {
        const auto& step = ast.steps[i];
        if (step.axis == Axis::Descendant) {
            out += "//";
        } else if (i > 0) {
            out += '/';
        }
        out += name_of(step.tag);
    }
    return out;
}

}  // namespace

ProfileAst parse_profile(std::string_view raw, const Dictionary& dict, ProfileId profile_id) {
    return parse_with(raw, profile_id, [&](std::string_view name) { return dict.code_of(name); });
}

ProfileAst parse_profile(std::string_view raw, ProfileId profile_id) {
    return parse_with(raw, profile_id, [](std::string_view name) {
        auto code = TagCode::try_parse(name);
        if (!code) throw UnknownTag(std::string(name));
        return *code;
    });
}

std::string unparse_profile(const ProfileAst& ast) {
    return unparse_with(ast, [](TagCode code) { return code.str(); });
}

std::string unparse_profile(const ProfileAst& ast, const Dictionary& dict) {
    return unparse_with(ast, [&](TagCode code) {
        auto name = dict.name_of(code);
        if (!name) throw UnknownTag(code.str());
        return std::string(*name);
    });
}

std::vector<std::string> read_profile_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> read_profile_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile file '" + path + "'");
    return read_profile_lines(in);
}

std::vector<ProfileAst> parse_profiles(const std::vector<std::string>& lines, const Dictionary* dict) {
    std::vector<ProfileAst> out;
    out.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto id = static_cast<ProfileId>(i);
        out.push_back(dict ? parse_profile(lines[i], *dict, id) : parse_profile(lines[i], id));
    }
    return out;
}

}  // namespace xpfilter
