#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xpfilter {

// Two-symbol replacement code for an element name. Each symbol is [a-z0-9],
// so an encoded open tag `<xy>` is 32 bits and a close tag `</xy>` 40 bits.
class TagCode {
public:
    static constexpr std::size_t kOpenTagBytes = 4;
    static constexpr std::size_t kCloseTagBytes = 5;

    constexpr TagCode() = default;

    // Throws InvalidArgument unless `text` is exactly two [a-z0-9] symbols.
    static TagCode parse(std::string_view text);
    static std::optional<TagCode> try_parse(std::string_view text) noexcept;
    static constexpr bool is_symbol(char c) noexcept {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    }

    // Position in the allocation sequence a0,a1,...,a9,b0,...,z9; nullopt for
    // codes outside the letter+digit scheme (e.g. "0a").
    std::optional<std::size_t> sequence_index() const noexcept;
    static TagCode from_sequence_index(std::size_t index);
    static constexpr std::size_t kSequenceLength = 26 * 10;

    char first() const noexcept { return symbols_[0]; }
    char second() const noexcept { return symbols_[1]; }
    std::string str() const { return {symbols_[0], symbols_[1]}; }
    std::string open_tag() const { return std::string{'<', symbols_[0], symbols_[1], '>'}; }
    std::string close_tag() const { return std::string{'<', '/', symbols_[0], symbols_[1], '>'}; }

    auto operator<=>(const TagCode&) const = default;

private:
    constexpr TagCode(char a, char b) : symbols_{a, b} {}
    std::array<char, 2> symbols_{'a', '0'};
};

std::ostream& operator<<(std::ostream& os, const TagCode& code);

// Immutable name -> code mapping. Codes are handed out in encounter order
// from a cursor in the a0..z9 sequence.
class Dictionary {
public:
    struct Entry {
        std::string name;
        TagCode code;
        bool operator==(const Entry&) const = default;
    };

    Dictionary() = default;

    static Dictionary build(const std::vector<std::string>& tag_names,
                            TagCode start_cursor = TagCode::from_sequence_index(0));

    // Reads/writes the `name<TAB>code` line format.
    static Dictionary load_tsv(std::istream& in);
    static Dictionary load_tsv_file(const std::string& path);
    void save_tsv(std::ostream& out) const;

    std::optional<TagCode> lookup(std::string_view name) const;
    std::optional<std::string_view> name_of(TagCode code) const;
    TagCode code_of(std::string_view name) const;  // throws UnknownTag

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    bool operator==(const Dictionary& other) const { return entries_ == other.entries_; }

private:
    void insert(std::string name, TagCode code);

    std::vector<Entry> entries_;
    std::map<std::string, TagCode, std::less<>> by_name_;
    std::map<TagCode, std::string> by_code_;
};

// Rewrites every element name to its code. Self-closing `<n/>` is expanded to
// `<xy></xy>`; attributes, namespaces, comments, PIs, CDATA and DOCTYPE are
// rejected with UnsupportedFeature.
std::string encode_document(std::string_view doc, const Dictionary& dict);

// Inverse of encode_document over the dictionary's codes.
std::string decode_document(std::string_view encoded, const Dictionary& dict);

}  // namespace xpfilter
