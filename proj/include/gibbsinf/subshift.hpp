#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gibbsinf/errors.hpp"

namespace gibbsinf {

/// A finite word over the alphabet. Symbols are stored 0-based; all text I/O
/// (configs, CSV, to/from string) is 1-based to match the usual x = (x_1, x_2, ...)
/// indexing of one-sided sequences.
using Word = std::vector<std::uint8_t>;

std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s, int alphabet_size);

/// One-sided subshift of finite type: alphabet {1..q} and a q x q 0/1 transition
/// matrix; the word (s, t) is admissible iff transitions(s, t) == 1.
class SubshiftSpec {
  public:
    SubshiftSpec(int alphabet_size, std::vector<std::uint8_t> transitions_row_major);

    static SubshiftSpec full_shift(int alphabet_size);
    static SubshiftSpec golden_mean();

    int alphabet() const { return q_; }
    bool allowed(int s, int t) const { return transitions_[static_cast<std::size_t>(s) * q_ + t] != 0; }
    const std::vector<std::uint8_t>& transitions() const { return transitions_; }

    /// True iff some power of the transition matrix is entrywise positive.
    /// Non-primitive specs are constructible (unit tests use them) but the
    /// inference entry points in thermo reject them.
    bool primitive() const { return primitive_; }

    bool operator==(const SubshiftSpec& o) const {
        return q_ == o.q_ && transitions_ == o.transitions_;
    }

  private:
    int q_;
    std::vector<std::uint8_t> transitions_;
    bool primitive_;
};

/// All admissible words of length n, lexicographically ordered. n = 0 yields
/// the single empty word.
std::vector<Word> admissible_words(const SubshiftSpec& spec, int n);

/// Number of admissible words of length n without enumerating them
/// (sum of entries of transitions^(n-1) for n >= 2).
std::uint64_t admissible_word_count(const SubshiftSpec& spec, int n);

bool is_admissible(const SubshiftSpec& spec, const Word& w);

struct Separation {
    double distance;      // 2^{-n(x,y)}, or 0 when no disagreement was seen
    bool undetermined;    // words agree on the full common length
};

/// Shift metric on prefixes: 2^{-n(x,y)} with n(x,y) the first (1-based) index
/// of disagreement. Words agreeing on the whole common length give distance 0
/// with the undetermined flag set.
Separation separation_metric(const Word& x, const Word& y);

/// Dense rank of a length-n word in {0..q^n-1} (radix, lexicographic).
std::uint64_t word_rank(const Word& w, int alphabet_size);

}  // namespace gibbsinf
