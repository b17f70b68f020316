#include "xpfilter/simulator.hpp"

#include <algorithm>
#include <bitset>
#include <chrono>
#include <istream>
#include <ostream>
#include <sstream>

namespace xpfilter {

namespace {

constexpr std::size_t kSymbols = 36;

std::size_t symbol_index(char c) { return c <= '9' ? static_cast<std::size_t>(c - '0') + 26 : static_cast<std::size_t>(c - 'a'); }

std::size_t code_slot(TagCode code) { return symbol_index(code.first()) * kSymbols + symbol_index(code.second()); }

// Byte-level tag recognizer; reports the tag completing on the current byte.
class TagFilterFsm {
public:
    struct Completed {
        bool closing;
        TagCode code;
        std::size_t start;
    };

    std::optional<Completed> step(unsigned char byte, std::size_t offset) {
        const char c = static_cast<char>(byte);
        switch (state_) {
        case State::Text:
            if (c == '<') {
                state_ = State::Lt;
                start_ = offset;
            }
            return std::nullopt;
        case State::Lt:
            if (c == '/') {
                closing_ = true;
                state_ = State::Sym1;
                return std::nullopt;
            }
            closing_ = false;
            [[fallthrough]];
        case State::Sym1:
            if (!TagCode::is_symbol(c)) throw MalformedDocument("expected tag symbol", offset);
            sym_[0] = c;
            state_ = State::Sym2;
            return std::nullopt;
        case State::Sym2:
            if (!TagCode::is_symbol(c)) throw MalformedDocument("expected tag symbol", offset);
            sym_[1] = c;
            state_ = State::Gt;
            return std::nullopt;
        case State::Gt:
            if (c != '>') throw MalformedDocument("expected '>' after two-symbol tag", offset);
            state_ = State::Text;
            return Completed{closing_, TagCode::parse(std::string_view(sym_.data(), 2)), start_};
        }
        return std::nullopt;
    }

    bool in_text() const { return state_ == State::Text; }
    std::size_t tag_start() const { return start_; }

private:
    enum class State { Text, Lt, Sym1, Sym2, Gt };
    State state_ = State::Text;
    bool closing_ = false;
    std::array<char, 2> sym_{};
    std::size_t start_ = 0;
};

}  // namespace

Engine::Engine(const Datapath& dp, SimMode mode)
    : dp_(&dp), mode_(mode), max_depth_(dp.config().max_depth), has_decoder_(dp.decoder().has_value()) {
    const auto& blocks = dp.blocks();
    std::vector<int> matcher_of(blocks.size(), -1);
    for (const auto& b : blocks) {
        if (std::holds_alternative<TagMatcher>(b.kind)) {
            matcher_of[b.id] = static_cast<int>(matchers_.size());
            matchers_.emplace_back();
        }
    }
    open_index_.resize(kSymbols * kSymbols);
    close_index_.resize(kSymbols * kSymbols);
    for (const auto& b : blocks) {
        if (const auto* m = std::get_if<TagMatcher>(&b.kind)) {
            auto& dst = matchers_[static_cast<std::size_t>(matcher_of[b.id])];
            if (m->bytes.size() != dst.pattern.size()) throw InvalidArgument("tag matcher pattern is not an open tag");
            std::copy(m->bytes.begin(), m->bytes.end(), dst.pattern.begin());
            dst.decoded = m->decoded;
            dst.anchored = m->anchored;
            if (m->predecessor) dst.predecessor = matcher_of.at(*m->predecessor);
            if (m->tos) dst.tos = std::get<TosMatcher>(blocks.at(*m->tos).kind).expected;
            const auto code = TagCode::parse(std::string_view(m->bytes).substr(1, 2));
            open_index_[code_slot(code)].push_back(static_cast<std::uint32_t>(matcher_of[b.id]));
        } else if (const auto* n = std::get_if<NegationBlock>(&b.kind)) {
            Negation neg;
            if (n->bytes.size() != neg.pattern.size()) throw InvalidArgument("negation pattern is not a close tag");
            std::copy(n->bytes.begin(), n->bytes.end(), neg.pattern.begin());
            neg.decoded = n->decoded;
            neg.segment = static_cast<std::uint32_t>(matcher_of.at(n->segment));
            close_index_[code_slot(n->tag)].push_back(static_cast<std::uint32_t>(negations_.size()));
            negations_.push_back(neg);
        } else if (const auto* r = std::get_if<ResultCell>(&b.kind)) {
            const int m = matcher_of.at(b.inputs.at(0));
            matchers_[static_cast<std::size_t>(m)].results.push_back(static_cast<std::uint32_t>(result_profiles_.size()));
            result_profiles_.push_back(r->profile_id);
        }
    }
}

std::vector<MatchEvent> Engine::run(std::string_view doc, std::size_t doc_id, const StackObserver& observer) const {
    std::vector<MatchEvent> events;
    std::vector<char> armed(matchers_.size(), 0);
    std::vector<char> reported(result_profiles_.size(), 0);
    std::vector<TagCode> stack;
    stack.reserve(max_depth_);
    bool root_seen = false;
    TagFilterFsm filter;

    // Input window and decoder-line history; index 4 is the current cycle.
    std::array<unsigned char, 5> window{};
    std::array<std::bitset<256>, 5> lines{};

    std::vector<std::uint32_t> fired;
    std::vector<std::uint32_t> cleared;
    std::vector<MatchEvent> cycle_events;

    const auto window_hit = [&](const auto& pattern, bool decoded) {
        const std::size_t n = pattern.size();
        const std::size_t base = window.size() - n;
        for (std::size_t k = 0; k < n; ++k) {
            const auto want = static_cast<unsigned char>(pattern[k]);
            const bool ok = decoded ? lines[base + k].test(want) : window[base + k] == want;
            if (!ok) return false;
        }
        return true;
    };

    for (std::size_t offset = 0; offset < doc.size(); ++offset) {
        const auto byte = static_cast<unsigned char>(doc[offset]);

        // (1) decoder and input window
        std::rotate(window.begin(), window.begin() + 1, window.end());
        window.back() = byte;
        if (mode_ == SimMode::Exhaustive && has_decoder_) {
            std::rotate(lines.begin(), lines.begin() + 1, lines.end());
            lines.back().reset();
            lines.back().set(byte);
        }

        // (2) tag filter
        const auto done = filter.step(byte, offset);
        if (done) {
            if (done->closing) {
                if (stack.empty() || stack.back() != done->code)
                    throw MalformedDocument("close tag </" + done->code.str() + "> does not match open element",
                                            done->start);
            } else if (stack.empty() && root_seen) {
                throw MalformedDocument("second root element", done->start);
            }
        }

        // (3) TOS before this cycle's push/pop
        const std::optional<TagCode> tos = stack.empty() ? std::nullopt : std::optional<TagCode>(stack.back());

        // (4) matchers and negation blocks read last cycle's armed flags
        fired.clear();
        cleared.clear();
        const auto enabled = [&](const Matcher& m) {
            if (m.predecessor < 0) {
                if (m.anchored && root_seen) return false;
            } else if (!armed[static_cast<std::size_t>(m.predecessor)]) {
                return false;
            }
            return !m.tos || tos == m.tos;
        };
        if (mode_ == SimMode::Exhaustive) {
            for (std::uint32_t i = 0; i < matchers_.size(); ++i) {
                if (window_hit(matchers_[i].pattern, matchers_[i].decoded) && enabled(matchers_[i])) fired.push_back(i);
            }
            for (std::uint32_t i = 0; i < negations_.size(); ++i) {
                if (window_hit(negations_[i].pattern, negations_[i].decoded)) cleared.push_back(negations_[i].segment);
            }
        } else if (done) {
            const auto slot = code_slot(done->code);
            if (done->closing) {
                for (const auto i : close_index_[slot]) cleared.push_back(negations_[i].segment);
            } else {
                for (const auto i : open_index_[slot]) {
                    if (enabled(matchers_[i])) fired.push_back(i);
                }
            }
        }
        for (const auto seg : cleared) armed[seg] = 0;
        for (const auto i : fired) armed[i] = 1;

        // (5) result cells; the encoders order same-cycle events by profile
        cycle_events.clear();
        for (const auto i : fired) {
            for (const auto r : matchers_[i].results) {
                if (reported[r]) continue;
                reported[r] = 1;
                cycle_events.push_back({doc_id, result_profiles_[r], offset});
            }
        }
        if (!cycle_events.empty()) {
            std::sort(cycle_events.begin(), cycle_events.end());
            events.insert(events.end(), cycle_events.begin(), cycle_events.end());
        }

        // (6) stack commit
        if (done) {
            if (done->closing) {
                stack.pop_back();
            } else {
                if (stack.size() >= max_depth_) throw StackOverflow(max_depth_, done->start);
                stack.push_back(done->code);
                root_seen = true;
            }
        }
        if (observer) observer(offset, stack);
    }
    if (!filter.in_text()) throw MalformedDocument("unterminated tag", filter.tag_start());
    if (!stack.empty()) throw MalformedDocument("unclosed element <" + stack.back().str() + ">", doc.size());
    return events;
}

std::vector<MatchEvent> run(const Datapath& dp, std::string_view doc, std::size_t doc_id) {
    return Engine(dp).run(doc, doc_id);
}

StreamResult run_stream(const Datapath& dp, const std::vector<std::string>& docs, SimMode mode) {
    StreamResult result;
    result.per_doc.resize(docs.size());
    const Engine engine(dp, mode);
    const auto begin = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < docs.size(); ++i) {
        result.stats.bytes += docs[i].size();
        try {
            result.per_doc[i].events = engine.run(docs[i], i);
        } catch (const Error& e) {
            result.per_doc[i].error = e;
        }
    }
    const auto end = std::chrono::steady_clock::now();
    result.stats.wall_seconds = std::chrono::duration<double>(end - begin).count();
    if (result.stats.wall_seconds > 0.0) {
        result.stats.mb_per_s = static_cast<double>(result.stats.bytes) / 1e6 / result.stats.wall_seconds;
    }
    return result;
}

void write_match_csv(std::ostream& out, const std::vector<MatchEvent>& events) {
    out << "doc_id,profile_id,byte_offset\n";
    for (const auto& e : events) out << e.doc_id << ',' << e.profile_id << ',' << e.byte_offset << '\n';
}

std::vector<MatchEvent> read_match_csv(std::istream& in) {
    std::vector<MatchEvent> events;
    std::string line;
    if (!std::getline(in, line) || line.rfind("doc_id,profile_id,byte_offset", 0) != 0) {
        throw InvalidArgument("match CSV must start with header doc_id,profile_id,byte_offset");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        MatchEvent e;
        char c1 = 0, c2 = 0;
        if (!(fields >> e.doc_id >> c1 >> e.profile_id >> c2 >> e.byte_offset) || c1 != ',' || c2 != ',' ||
            !(fields >> std::ws).eof()) {
            throw InvalidArgument("bad match record on line " + std::to_string(line_no));
        }
        events.push_back(e);
    }
    return events;
}

std::string throughput_text(const ThroughputStats& stats) {
    std::ostringstream out;
    out << "bytes: " << stats.bytes << "\nwall_seconds: " << stats.wall_seconds << "\nmb_per_s: " << stats.mb_per_s
        << "\n";
    return out.str();
}

}  // namespace xpfilter
