#include "xpfilter/regex_ir.hpp"

#include "xpfilter/errors.hpp"

#include <type_traits>

namespace xpfilter {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

std::string to_string(const RegexAtom& atom) {
    return std::visit(overloaded{
                          [](const OpenTagMatch& a) { return "OPEN(" + a.tag.str() + ")"; },
                          [](const GapPattern&) { return std::string("GAP"); },
                          [](const NegationGuard& a) { return "NEG(/" + a.tag.str() + ")"; },
                          [](const StackCheck& a) { return "TOS(" + a.expected.str() + ")"; },
                      },
                      atom);
}

std::string to_string(std::span<const RegexAtom> atoms) {
    std::string out;
    for (const auto& atom : atoms) {
        if (!out.empty()) out += ' ';
        out += to_string(atom);
    }
    return out;
}

StackRegexIr lower_profile(const ProfileAst& ast) {
    if (ast.steps.empty()) throw InvalidArgument("profile has no steps");
    StackRegexIr ir;
    ir.profile_id = ast.profile_id;
    const auto& first = ast.steps.front();
    if (first.axis == Axis::Descendant) ir.atoms.emplace_back(GapPattern{});
    ir.atoms.emplace_back(OpenTagMatch{first.tag});
    for (std::size_t i = 1; i < ast.steps.size(); ++i) {
        const TagCode parent = ast.steps[i - 1].tag;
        ir.atoms.emplace_back(GapPattern{});
        ir.atoms.emplace_back(NegationGuard{parent});
        if (ast.steps[i].axis == Axis::Child) {
            ir.atoms.emplace_back(StackCheck{parent});
            ir.uses_stack = true;
        }
        ir.atoms.emplace_back(OpenTagMatch{ast.steps[i].tag});
    }
    return ir;
}

std::vector<std::span<const RegexAtom>> split_steps(std::span<const RegexAtom> atoms) {
    std::vector<std::span<const RegexAtom>> steps;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (std::holds_alternative<OpenTagMatch>(atoms[i])) {
            steps.push_back(atoms.subspan(begin, i + 1 - begin));
            begin = i + 1;
        }
    }
    if (begin != atoms.size()) throw InvalidArgument("atom list does not end in an open-tag match");
    return steps;
}

bool atoms_use_stack(std::span<const RegexAtom> atoms) {
    for (const auto& atom : atoms) {
        if (std::holds_alternative<StackCheck>(atom)) return true;
    }
    return false;
}

ProfileAst raise_profile(const StackRegexIr& ir) {
    ProfileAst ast;
    ast.profile_id = ir.profile_id;
    const auto bad = [&] { return InvalidArgument("malformed IR for profile " + std::to_string(ir.profile_id)); };
    for (const auto step : split_steps(ir.atoms)) {
        const TagCode tag = std::get<OpenTagMatch>(step.back()).tag;
        if (ast.steps.empty()) {
            if (step.size() == 1) {
                ast.steps.push_back({Axis::Child, tag});
            } else if (step.size() == 2 && std::holds_alternative<GapPattern>(step[0])) {
                ast.steps.push_back({Axis::Descendant, tag});
            } else {
                throw bad();
            }
            continue;
        }
        const TagCode parent = ast.steps.back().tag;
        if (step.size() < 3 || !std::holds_alternative<GapPattern>(step[0]) ||
            step[1] != RegexAtom{NegationGuard{parent}}) {
            throw bad();
        }
        if (step.size() == 3) {
            ast.steps.push_back({Axis::Descendant, tag});
        } else if (step.size() == 4 && step[2] == RegexAtom{StackCheck{parent}}) {
            ast.steps.push_back({Axis::Child, tag});
        } else {
            throw bad();
        }
    }
    if (ast.steps.empty()) throw bad();
    return ast;
}

std::string sort_key(const StackRegexIr& ir) {
    std::string key;
    bool pending_gap = false;
    bool pending_tos = false;
    bool first = true;
    for (const auto& atom : ir.atoms) {
        if (std::holds_alternative<GapPattern>(atom)) {
            pending_gap = true;
        } else if (std::holds_alternative<StackCheck>(atom)) {
            pending_tos = true;
        } else if (const auto* open = std::get_if<OpenTagMatch>(&atom)) {
            if (pending_gap) {
                key += pending_tos ? "/" : "//";
            } else if (!first) {
                key += '/';
            }
            key += open->tag.str();
            pending_gap = pending_tos = false;
            first = false;
        }
    }
    return key;
}

std::string dump_line(const StackRegexIr& ir) {
    return "P" + std::to_string(ir.profile_id) + ": " + to_string(std::span<const RegexAtom>(ir.atoms));
}

std::string dump_ir(const std::vector<StackRegexIr>& irs) {
    std::string out;
    for (const auto& ir : irs) {
        out += dump_line(ir);
        out += '\n';
    }
    return out;
}

}  // namespace xpfilter
