#include "xpfilter/dictionary.hpp"

#include "xpfilter/errors.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace xpfilter {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

}  // namespace

std::optional<TagCode> TagCode::try_parse(std::string_view text) noexcept {
    if (text.size() != 2 || !is_symbol(text[0]) || !is_symbol(text[1])) return std::nullopt;
    return TagCode{text[0], text[1]};
}

TagCode TagCode::parse(std::string_view text) {
    if (auto code = try_parse(text)) return *code;
    throw InvalidArgument("invalid tag code '" + std::string(text) + "': expected two [a-z0-9] symbols");
}

std::optional<std::size_t> TagCode::sequence_index() const noexcept {
    const char letter = symbols_[0];
    const char digit = symbols_[1];
    if (letter < 'a' || letter > 'z' || digit < '0' || digit > '9') return std::nullopt;
    return static_cast<std::size_t>(letter - 'a') * 10 + static_cast<std::size_t>(digit - '0');
}

TagCode TagCode::from_sequence_index(std::size_t index) {
    if (index >= kSequenceLength) throw CapacityExceeded(index + 1, kSequenceLength);
    return TagCode{static_cast<char>('a' + index / 10), static_cast<char>('0' + index % 10)};
}

std::ostream& operator<<(std::ostream& os, const TagCode& code) { return os << code.str(); }

void Dictionary::insert(std::string name, TagCode code) {
    if (name.empty()) throw InvalidArgument("empty tag name");
    if (by_name_.count(name)) throw DuplicateTag(name);
    if (by_code_.count(code)) throw InvalidArgument("code '" + code.str() + "' assigned twice");
    by_name_.emplace(name, code);
    by_code_.emplace(code, name);
    entries_.push_back({std::move(name), code});
}

Dictionary Dictionary::build(const std::vector<std::string>& tag_names, TagCode start_cursor) {
    const auto start = start_cursor.sequence_index();
    if (!start) throw InvalidArgument("allocation cursor must be a letter+digit code");

    std::set<std::string_view> seen;
    for (const auto& name : tag_names) {
        if (!seen.insert(name).second) throw DuplicateTag(name);
    }
    const std::size_t available = TagCode::kSequenceLength - *start;
    if (tag_names.size() > available) throw CapacityExceeded(tag_names.size(), available);

    Dictionary dict;
    std::size_t cursor = *start;
    for (const auto& name : tag_names) {
        dict.insert(name, TagCode::from_sequence_index(cursor++));
    }
    return dict;
}

Dictionary Dictionary::load_tsv(std::istream& in) {
    Dictionary dict;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            throw InvalidArgument("dictionary line " + std::to_string(line_no) + ": expected name<TAB>code");
        }
        dict.insert(line.substr(0, tab), TagCode::parse(std::string_view(line).substr(tab + 1)));
    }
    return dict;
}

Dictionary Dictionary::load_tsv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dictionary '" + path + "'");
    return load_tsv(in);
}

void Dictionary::save_tsv(std::ostream& out) const {
    for (const auto& entry : entries_) out << entry.name << '\t' << entry.code << '\n';
}

std::optional<TagCode> Dictionary::lookup(std::string_view name) const {
    const auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string_view> Dictionary::name_of(TagCode code) const {
    const auto it = by_code_.find(code);
    if (it == by_code_.end()) return std::nullopt;
    return std::string_view(it->second);
}

TagCode Dictionary::code_of(std::string_view name) const {
    if (auto code = lookup(name)) return *code;
    throw UnknownTag(std::string(name));
}

std::string encode_document(std::string_view doc, const Dictionary& dict) {
    std::string out;
    out.reserve(doc.size());
    std::size_t i = 0;
    const std::size_t n = doc.size();
    while (i < n) {
        if (doc[i] != '<') {
            out.push_back(doc[i++]);
            continue;
        }
        const std::size_t start = i;
        if (i + 1 >= n) throw MalformedDocument("unterminated tag", start);
        if (doc[i + 1] == '?') throw UnsupportedFeature("processing instruction", start);
        if (doc[i + 1] == '!') {
            if (doc.substr(i, 4) == "<!--") throw UnsupportedFeature("comment", start);
            if (doc.substr(i, 9) == "<![CDATA[") throw UnsupportedFeature("CDATA section", start);
            throw UnsupportedFeature("markup declaration", start);
        }
        const bool closing = doc[i + 1] == '/';
        std::size_t j = i + 1 + (closing ? 1 : 0);
        const std::size_t name_start = j;
        while (j < n && !is_space(doc[j]) && doc[j] != '/' && doc[j] != '>' && doc[j] != '<') ++j;
        const std::string_view name = doc.substr(name_start, j - name_start);
        if (name.empty()) throw MalformedDocument("empty element name", start);
        if (name.find(':') != std::string_view::npos) throw UnsupportedFeature("namespace prefix", start);
        while (j < n && is_space(doc[j])) ++j;
        if (j >= n) throw MalformedDocument("unterminated tag", start);

        bool self_closing = false;
        if (doc[j] == '>') {
        } else if (!closing && doc[j] == '/' && j + 1 < n && doc[j + 1] == '>') {
            self_closing = true;
            ++j;
        } else if (closing) {
            throw MalformedDocument("unexpected character in close tag", j);
        } else {
            throw UnsupportedFeature("attribute", j);
        }

        const auto code = dict.lookup(name);
        if (!code) throw UnknownTag(std::string(name), start);
        if (closing) {
            out += code->close_tag();
        } else {
            out += code->open_tag();
            if (self_closing) out += code->close_tag();
        }
        i = j + 1;
    }
    return out;
}

std::string decode_document(std::string_view encoded, const Dictionary& dict) {
    std::string out;
    out.reserve(encoded.size() * 2);
    std::size_t i = 0;
    const std::size_t n = encoded.size();
    while (i < n) {
        if (encoded[i] != '<') {
            out.push_back(encoded[i++]);
            continue;
        }
        const bool closing = i + 1 < n && encoded[i + 1] == '/';
        const std::size_t len = closing ? TagCode::kCloseTagBytes : TagCode::kOpenTagBytes;
        if (i + len > n || encoded[i + len - 1] != '>') throw MalformedDocument("bad encoded tag", i);
        const auto code = TagCode::try_parse(encoded.substr(i + len - 3, 2));
        if (!code) throw MalformedDocument("bad encoded tag", i);
        const auto name = dict.name_of(*code);
        if (!name) throw UnknownTag(code->str(), i);
        out += closing ? "</" : "<";
        out += *name;
        out += '>';
        i += len;
    }
    return out;
}

}  // namespace xpfilter
