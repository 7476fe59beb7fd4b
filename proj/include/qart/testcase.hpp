#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qart {

// An argument value of a test action. Integers render as decimal, strings
// verbatim, reals with 6 significant digits, so that the same method called
// with the same arguments always produces the same token text.
using Value = std::variant<std::int64_t, double, std::string>;

std::string render_value(const Value& v);

struct Action {
    std::string method;
    std::vector<Value> args;
};

// The unit of selection and execution: either an ordered sequence of method
// invocations (model-based SUTs) or a raw string (character-mode SUTs).
struct TestCase {
    std::vector<Action> actions;
    std::optional<std::string> raw;

    static TestCase from_string(std::string s);
    static TestCase from_actions(std::vector<Action> a);

    // Number of statements for length metrics: one action = one statement;
    // for raw payloads, the string length.
    std::size_t length() const noexcept {
        return raw ? raw->size() : actions.size();
    }
};

enum class TokenKind { method, method_with_args, character };

struct Token {
    std::string text;
    TokenKind kind = TokenKind::method;

    friend bool operator==(const Token& a, const Token& b) noexcept {
        return a.text == b.text;
    }
};

enum class TokenizeMode { sequence_only, sequence_plus_inputs, characters };

struct TokenizeOptions {
    // Wrap character-mode strings in start/end sentinel tokens so that
    // length-1 strings still contribute q-grams. Off by default.
    bool char_sentinels = false;
};

// Serializes a test case into the token stream that q-grams and edit
// distances operate on. sequence_only emits one token per method name,
// sequence_plus_inputs embeds canonicalized argument values into the token,
// characters emits one token per character of the raw payload.
std::vector<Token> tokenize(const TestCase& test, TokenizeMode mode,
                            const TokenizeOptions& opts = {});

const char* to_string(TokenizeMode mode) noexcept;
TokenizeMode tokenize_mode_from_string(const std::string& s);

}  // namespace qart
