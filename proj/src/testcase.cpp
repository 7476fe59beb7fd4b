#include "qart/testcase.hpp"

#include <cstdio>

namespace qart {

std::string render_value(const Value& v) {
    struct Renderer {
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6g", d);
            return buf;
        }
        std::string operator()(const std::string& s) const { return s; }
    };
    return std::visit(Renderer{}, v);
}

TestCase TestCase::from_string(std::string s) {
    TestCase t;
    t.raw = std::move(s);
    return t;
}

TestCase TestCase::from_actions(std::vector<Action> a) {
    TestCase t;
    t.actions = std::move(a);
    return t;
}

namespace {

std::string action_token_text(const Action& a) {
    if (a.args.empty()) return a.method;
    std::string out = a.method;
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i > 0) out += ',';
        out += render_value(a.args[i]);
    }
    out += ')';
    return out;
}

constexpr const char* kStartSentinel = "<s>";
constexpr const char* kEndSentinel = "</s>";

}  // namespace

std::vector<Token> tokenize(const TestCase& test, TokenizeMode mode,
                            const TokenizeOptions& opts) {
    std::vector<Token> out;
    switch (mode) {
        case TokenizeMode::characters: {
            if (!test.raw) {
                throw std::invalid_argument("characters mode requires a raw string payload");
            }
            out.reserve(test.raw->size() + (opts.char_sentinels ? 2 : 0));
            if (opts.char_sentinels) out.push_back({kStartSentinel, TokenKind::character});
            for (char c : *test.raw) {
                out.push_back({std::string(1, c), TokenKind::character});
            }
            if (opts.char_sentinels) out.push_back({kEndSentinel, TokenKind::character});
            return out;
        }
        case TokenizeMode::sequence_only:
        case TokenizeMode::sequence_plus_inputs: {
            if (test.actions.empty()) {
                throw std::invalid_argument("sequence modes require at least one action");
            }
            out.reserve(test.actions.size());
            for (const auto& a : test.actions) {
                if (mode == TokenizeMode::sequence_only || a.args.empty()) {
                    out.push_back({a.method, TokenKind::method});
                } else {
                    out.push_back({action_token_text(a), TokenKind::method_with_args});
                }
            }
            return out;
        }
    }
    throw std::invalid_argument("unknown tokenize mode");
}

const char* to_string(TokenizeMode mode) noexcept {
    switch (mode) {
        case TokenizeMode::sequence_only: return "sequence_only";
        case TokenizeMode::sequence_plus_inputs: return "sequence_plus_inputs";
        case TokenizeMode::characters: return "characters";
    }
    return "?";
}

TokenizeMode tokenize_mode_from_string(const std::string& s) {
    if (s == "sequence_only" || s == "s") return TokenizeMode::sequence_only;
    if (s == "sequence_plus_inputs" || s == "si") return TokenizeMode::sequence_plus_inputs;
    if (s == "characters" || s == "chars") return TokenizeMode::characters;
    throw std::invalid_argument("unknown tokenize mode: " + s);
}

}  // namespace qart
