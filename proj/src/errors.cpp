#include "xpfilter/errors.hpp"

namespace xpfilter {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DuplicateTag: return "duplicate tag";
    case ErrorKind::CapacityExceeded: return "capacity exceeded";
    case ErrorKind::UnknownTag: return "unknown tag";
    case ErrorKind::Syntax: return "parse error";
    case ErrorKind::UnsupportedFeature: return "unsupported feature";
    case ErrorKind::MalformedDocument: return "malformed document";
    case ErrorKind::StackOverflow: return "stack overflow";
    case ErrorKind::EmptyForest: return "empty forest";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Io: return "i/o error";
    }
    return "error";
}

}  // namespace xpfilter
