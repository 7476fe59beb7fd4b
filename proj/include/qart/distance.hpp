#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qart/testcase.hpp"

namespace qart {

// Levenshtein distance with unit costs for insertion, deletion and
// substitution. Tokens compare by text equality.
std::size_t edit_distance(std::span<const Token> a, std::span<const Token> b);

// Same distance over interned token ids; used on the selector hot path.
std::size_t edit_distance_ids(std::span<const std::uint32_t> a,
                              std::span<const std::uint32_t> b);

// Minimum edit distance between the tokenized candidate and each tokenized
// archive member (the maxi-min building block). Adds |archive| to
// *distance_calls when given. Throws std::invalid_argument on an empty
// archive: the selector seeds the archive before asking for distances.
std::size_t min_distance_to_archive(const TestCase& candidate,
                                    std::span<const TestCase> archive,
                                    TokenizeMode mode,
                                    std::uint64_t* distance_calls = nullptr);

}  // namespace qart
