#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace xpfilter {

enum class ErrorKind {
    DuplicateTag,
    CapacityExceeded,
    UnknownTag,
    Syntax,
    UnsupportedFeature,
    MalformedDocument,
    StackOverflow,
    EmptyForest,
    InvalidArgument,
    Io,
};

const char* to_string(ErrorKind kind);

// Base of every error raised by the library. The kind and optional byte/char
// position survive copies, so outcomes can be stored by value.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> position = std::nullopt)
        : std::runtime_error(what), kind_(kind), position_(position) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> position() const noexcept { return position_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> position_;
};

class DuplicateTag : public Error {
public:
    explicit DuplicateTag(const std::string& name)
        : Error(ErrorKind::DuplicateTag, "duplicate tag name '" + name + "'") {}
};

class CapacityExceeded : public Error {
public:
    explicit CapacityExceeded(std::size_t requested, std::size_t available)
        : Error(ErrorKind::CapacityExceeded, "dictionary capacity exceeded: " + std::to_string(requested) +
                                                 " names, " + std::to_string(available) + " codes available") {}
};

class UnknownTag : public Error {
public:
    UnknownTag(const std::string& name, std::optional<std::size_t> offset = std::nullopt)
        : Error(ErrorKind::UnknownTag,
                "unknown tag '" + name + "'" + (offset ? " at offset " + std::to_string(*offset) : std::string{}),
                offset) {}
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& detail, std::size_t position)
        : Error(ErrorKind::Syntax, "syntax error at position " + std::to_string(position) + ": " + detail,
                position) {}
};

class UnsupportedFeature : public Error {
public:
    UnsupportedFeature(const std::string& feature, std::optional<std::size_t> position = std::nullopt)
        : Error(ErrorKind::UnsupportedFeature,
                "unsupported feature: " + feature +
                    (position ? " at position " + std::to_string(*position) : std::string{}),
                position) {}
};

class MalformedDocument : public Error {
public:
    MalformedDocument(const std::string& detail, std::size_t offset)
        : Error(ErrorKind::MalformedDocument,
                "malformed document at offset " + std::to_string(offset) + ": " + detail, offset) {}
};

class StackOverflow : public Error {
public:
    StackOverflow(std::size_t max_depth, std::size_t offset)
        : Error(ErrorKind::StackOverflow,
                "tag stack overflow at offset " + std::to_string(offset) + " (max depth " +
                    std::to_string(max_depth) + ")",
                offset) {}
};

class EmptyForest : public Error {
public:
    EmptyForest() : Error(ErrorKind::EmptyForest, "cannot lower an empty profile forest") {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorKind::InvalidArgument, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace xpfilter
