#include "qart/qgram.hpp"

#include <algorithm>
#include <cmath>

namespace qart {

namespace {

// c * log2(c), the per-entry term of the entropy sum.
inline long double wlog(std::uint64_t c) noexcept {
    return c == 0 ? 0.0L
                  : static_cast<long double>(c) * std::log2(static_cast<long double>(c));
}

}  // namespace

std::string QGram::joined(char sep) const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out += sep;
        out += tokens[i];
    }
    return out;
}

void QGramCounts::add(const QGram& g, std::uint64_t n) {
    add(QGram(g), n);
}

void QGramCounts::add(QGram&& g, std::uint64_t n) {
    if (n == 0) return;
    auto [it, inserted] = counts_.try_emplace(std::move(g), 0);
    const std::uint64_t before = it->second;
    const std::uint64_t after = before + n;
    it->second = after;
    total_ += n;
    sum_c_log2_c_ += wlog(after) - wlog(before);
    sum_c_sq_ += after * after - before * before;
}

void QGramCounts::merge_in(const QGramCounts& delta) {
    for (const auto& [g, n] : delta.counts_) {
        add(g, n);
    }
}

std::uint64_t QGramCounts::count(const QGram& g) const {
    auto it = counts_.find(g);
    return it == counts_.end() ? 0 : it->second;
}

double QGramCounts::entropy_bits() const noexcept {
    if (total_ == 0) return 0.0;
    const long double t = static_cast<long double>(total_);
    const long double h = std::log2(t) - sum_c_log2_c_ / t;
    return std::max(0.0, static_cast<double>(h));
}

double QGramCounts::gini_impurity() const noexcept {
    if (total_ == 0) return 0.0;
    const long double t = static_cast<long double>(total_);
    const long double g = 1.0L - static_cast<long double>(sum_c_sq_) / (t * t);
    return std::max(0.0, static_cast<double>(g));
}

double QGramCounts::entropy_with(const QGramCounts& delta) const {
    const std::uint64_t merged_total = total_ + delta.total_;
    if (merged_total == 0) return 0.0;
    long double s = sum_c_log2_c_;
    for (const auto& [g, n] : delta.counts_) {
        const std::uint64_t before = count(g);
        s += wlog(before + n) - wlog(before);
    }
    const long double t = static_cast<long double>(merged_total);
    return std::max(0.0, static_cast<double>(std::log2(t) - s / t));
}

double QGramCounts::gini_with(const QGramCounts& delta) const {
    const std::uint64_t merged_total = total_ + delta.total_;
    if (merged_total == 0) return 0.0;
    std::uint64_t sq = sum_c_sq_;
    for (const auto& [g, n] : delta.counts_) {
        const std::uint64_t before = count(g);
        const std::uint64_t after = before + n;
        sq += after * after - before * before;
    }
    const long double t = static_cast<long double>(merged_total);
    return std::max(0.0, static_cast<double>(1.0L - static_cast<long double>(sq) / (t * t)));
}

double QGramCounts::score_with(const QGramCounts& delta, DiversityMetric metric) const {
    return metric == DiversityMetric::entropy ? entropy_with(delta) : gini_with(delta);
}

double QGramCounts::score(DiversityMetric metric) const noexcept {
    return metric == DiversityMetric::entropy ? entropy_bits() : gini_impurity();
}

QGramCounts count_qgrams(std::span<const Token> tokens, std::size_t q) {
    if (q == 0) throw std::invalid_argument("q must be >= 1");
    QGramCounts out;
    if (tokens.size() < q) return out;
    const std::size_t windows = tokens.size() - q + 1;
    for (std::size_t i = 0; i < windows; ++i) {
        QGram g;
        g.tokens.reserve(q);
        for (std::size_t j = 0; j < q; ++j) {
            g.tokens.push_back(tokens[i + j].text);
        }
        out.add(std::move(g), 1);
    }
    return out;
}

QGramCounts merge(const QGramCounts& base, const QGramCounts& delta) {
    QGramCounts out = base;
    out.merge_in(delta);
    return out;
}

double score_candidate(const QGramCounts& archive_counts, const TestCase& candidate,
                       std::size_t q, TokenizeMode mode, DiversityMetric metric,
                       const TokenizeOptions& opts) {
    const auto tokens = tokenize(candidate, mode, opts);
    const QGramCounts delta = count_qgrams(tokens, q);
    return archive_counts.score_with(delta, metric);
}

}  // namespace qart
