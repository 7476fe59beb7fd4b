#include "qart/distance.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace qart {

namespace {

// Two-row dynamic program shared by both element types.
template <typename Seq>
std::size_t levenshtein(const Seq& a, const Seq& b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;

    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

struct TokenTextView {
    std::span<const Token> tokens;
    std::size_t size() const noexcept { return tokens.size(); }
    const std::string& operator[](std::size_t i) const noexcept { return tokens[i].text; }
};

}  // namespace

std::size_t edit_distance(std::span<const Token> a, std::span<const Token> b) {
    return levenshtein(TokenTextView{a}, TokenTextView{b});
}

std::size_t edit_distance_ids(std::span<const std::uint32_t> a,
                              std::span<const std::uint32_t> b) {
    return levenshtein(a, b);
}

std::size_t min_distance_to_archive(const TestCase& candidate,
                                    std::span<const TestCase> archive,
                                    TokenizeMode mode,
                                    std::uint64_t* distance_calls) {
    if (archive.empty()) {
        throw std::invalid_argument(
            "min_distance_to_archive: archive is empty (the selector seeds it first)");
    }
    const auto cand_tokens = tokenize(candidate, mode);
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (const auto& member : archive) {
        const auto member_tokens = tokenize(member, mode);
        best = std::min(best, edit_distance(cand_tokens, member_tokens));
    }
    if (distance_calls) *distance_calls += archive.size();
    return best;
}

}  // namespace qart
