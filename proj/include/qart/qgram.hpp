#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qart/testcase.hpp"

namespace qart {

// A window of Q consecutive token texts. Equality and hashing are by the
// token-text sequence only; token kinds do not participate.
struct QGram {
    std::vector<std::string> tokens;

    friend bool operator==(const QGram& a, const QGram& b) = default;

    // Human-readable form, e.g. "goToFind|find(1)".
    std::string joined(char sep = '|') const;
};

struct QGramHash {
    std::size_t operator()(const QGram& g) const noexcept {
        // FNV-1a over the texts with a boundary byte between tokens, so that
        // ["ab","c"] and ["a","bc"] hash differently.
        std::uint64_t h = 14695981039346656037ull;
        for (const auto& t : g.tokens) {
            for (unsigned char c : t) {
                h = (h ^ c) * 1099511628211ull;
            }
            h = (h ^ 0x1fu) * 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

enum class DiversityMetric { entropy, gini };

// Multiset of q-grams with occurrence counts: the incremental aggregate of an
// executed-test archive. Alongside the counts it maintains the running sums
// needed to score a candidate against the aggregate in time proportional to
// the candidate, not the vocabulary.
class QGramCounts {
public:
    using Map = std::unordered_map<QGram, std::uint64_t, QGramHash>;

    void add(const QGram& g, std::uint64_t n = 1);
    void add(QGram&& g, std::uint64_t n = 1);

    // Pointwise sum; `delta` is left untouched.
    void merge_in(const QGramCounts& delta);

    std::uint64_t total() const noexcept { return total_; }
    std::size_t distinct() const noexcept { return counts_.size(); }
    bool empty() const noexcept { return counts_.empty(); }
    std::uint64_t count(const QGram& g) const;
    const Map& entries() const noexcept { return counts_; }

    // Shannon entropy in bits of the count distribution; 0 for empty counts.
    double entropy_bits() const noexcept;
    // Gini impurity 1 - sum(p_i^2); 0 for empty counts.
    double gini_impurity() const noexcept;

    // Score of the pointwise sum (*this + delta) without materializing it.
    double entropy_with(const QGramCounts& delta) const;
    double gini_with(const QGramCounts& delta) const;
    double score_with(const QGramCounts& delta, DiversityMetric metric) const;
    double score(DiversityMetric metric) const noexcept;

private:
    Map counts_;
    std::uint64_t total_ = 0;
    long double sum_c_log2_c_ = 0.0L;  // sum of c*log2(c) over entries
    std::uint64_t sum_c_sq_ = 0;       // sum of c^2 over entries
};

// Counts every window of q consecutive tokens. A sequence shorter than q
// yields empty counts; windows never span across separate token sequences.
QGramCounts count_qgrams(std::span<const Token> tokens, std::size_t q);

// Value-returning pointwise sum; commutative and associative.
QGramCounts merge(const QGramCounts& base, const QGramCounts& delta);

// Diversity of the archive aggregate extended with the candidate's q-gram
// counts. The archive aggregate is observably unmodified.
double score_candidate(const QGramCounts& archive_counts, const TestCase& candidate,
                       std::size_t q, TokenizeMode mode, DiversityMetric metric,
                       const TokenizeOptions& opts = {});

}  // namespace qart
