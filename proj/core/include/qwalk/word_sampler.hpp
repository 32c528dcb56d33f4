#pragma once

#include <functional>
#include <vector>

#include "qwalk/rng.hpp"
#include "qwalk/word_counts.hpp"

namespace qwalk {

// Draws a uniformly random length-n word of the given nonterminal and feeds
// its terminal ids to sink left to right. Every random choice is made with
// exact integer splits of the stored counts, so the draw is exactly uniform
// over the n-length words. sink returning false abandons the derivation
// immediately (the caller has decided to reject this word; abandoning early
// cannot bias later draws because each trial uses its own stream). Returns
// true when a complete word was emitted.
//
// Throws errc::no_sample when the nonterminal has no word of that length.
bool sample_word(const WordCounts& counts, int nt_index, long long n, Rng& rng,
                 const std::function<bool(int)>& sink);

// Convenience wrapper collecting the whole word.
std::vector<int> sample_word(const WordCounts& counts, int nt_index, long long n,
                             Rng& rng);

}  // namespace qwalk
