#include "gibbsinf/subshift.hpp"

#include <algorithm>
#include <cmath>

namespace gibbsinf {

std::string word_to_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (std::uint8_t c : w) {
        int sym = c + 1;
        if (sym > 9) throw InputError("word_to_string supports alphabets up to 9 symbols");
        s.push_back(static_cast<char>('0' + sym));
    }
    return s;
}

Word word_from_string(const std::string& s, int alphabet_size) {
    Word w;
    w.reserve(s.size());
    for (char c : s) {
        if (c < '1' || c > '9') throw InputError("bad symbol '" + std::string(1, c) + "' in word \"" + s + "\"");
        int sym = c - '1';
        if (sym >= alphabet_size)
            throw InputError("symbol " + std::string(1, c) + " out of range for alphabet of size " +
                             std::to_string(alphabet_size));
        w.push_back(static_cast<std::uint8_t>(sym));
    }
    return w;
}

namespace {

// Boolean matrix square in the (and, or) semiring.
std::vector<std::uint8_t> bool_square(const std::vector<std::uint8_t>& m, int q) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(q) * q, 0);
    for (int i = 0; i < q; ++i)
        for (int k = 0; k < q; ++k) {
            if (!m[static_cast<std::size_t>(i) * q + k]) continue;
            for (int j = 0; j < q; ++j)
                if (m[static_cast<std::size_t>(k) * q + j]) out[static_cast<std::size_t>(i) * q + j] = 1;
        }
    return out;
}

bool all_positive(const std::vector<std::uint8_t>& m) {
    return std::all_of(m.begin(), m.end(), [](std::uint8_t v) { return v != 0; });
}

// Primitivity via repeated boolean squaring. Positivity of a power propagates
// upward because no row or column is zero, so checking the dyadic power at or
// above the Wielandt bound q^2 - 2q + 2 decides.
bool check_primitive(const std::vector<std::uint8_t>& m, int q) {
    if (all_positive(m)) return true;
    std::vector<std::uint8_t> p = m;
    long long exponent = 1;
    const long long bound = static_cast<long long>(q) * q - 2 * q + 2;
    while (exponent < bound) {
        p = bool_square(p, q);
        exponent *= 2;
        if (all_positive(p)) return true;
    }
    return false;
}

}  // namespace

SubshiftSpec::SubshiftSpec(int alphabet_size, std::vector<std::uint8_t> transitions_row_major)
    : q_(alphabet_size), transitions_(std::move(transitions_row_major)) {
    if (q_ < 2) throw InputError("alphabet size must be >= 2");
    if (transitions_.size() != static_cast<std::size_t>(q_) * q_)
        throw InputError("transition matrix must have q*q entries");
    for (std::uint8_t v : transitions_)
        if (v != 0 && v != 1) throw InputError("transition entries must be 0 or 1");
    for (int i = 0; i < q_; ++i) {
        bool row = false, col = false;
        for (int j = 0; j < q_; ++j) {
            row = row || allowed(i, j);
            col = col || allowed(j, i);
        }
        if (!row) throw InputError("transition row " + std::to_string(i + 1) + " has no 1");
        if (!col) throw InputError("transition column " + std::to_string(i + 1) + " has no 1");
    }
    primitive_ = check_primitive(transitions_, q_);
}

SubshiftSpec SubshiftSpec::full_shift(int alphabet_size) {
    return SubshiftSpec(alphabet_size,
                        std::vector<std::uint8_t>(static_cast<std::size_t>(alphabet_size) * alphabet_size, 1));
}

SubshiftSpec SubshiftSpec::golden_mean() { return SubshiftSpec(2, {1, 1, 1, 0}); }

std::vector<Word> admissible_words(const SubshiftSpec& spec, int n) {
    if (n < 0) throw InputError("word length must be >= 0");
    std::vector<Word> out;
    if (n == 0) {
        out.emplace_back();
        return out;
    }
    const int q = spec.alphabet();
    Word w;
    w.reserve(n);
    // iterative lexicographic DFS
    auto extend = [&](auto&& self) -> void {
        if (static_cast<int>(w.size()) == n) {
            out.push_back(w);
            return;
        }
        for (int a = 0; a < q; ++a) {
            if (!w.empty() && !spec.allowed(w.back(), a)) continue;
            w.push_back(static_cast<std::uint8_t>(a));
            self(self);
            w.pop_back();
        }
    };
    extend(extend);
    return out;
}

std::uint64_t admissible_word_count(const SubshiftSpec& spec, int n) {
    if (n < 0) throw InputError("word length must be >= 0");
    if (n == 0) return 1;
    const int q = spec.alphabet();
    std::vector<std::uint64_t> v(q, 1);
    for (int step = 1; step < n; ++step) {
        std::vector<std::uint64_t> nv(q, 0);
        for (int s = 0; s < q; ++s)
            for (int t = 0; t < q; ++t)
                if (spec.allowed(s, t)) nv[s] += v[t];
        v = std::move(nv);
    }
    std::uint64_t total = 0;
    for (auto c : v) total += c;
    return total;
}

bool is_admissible(const SubshiftSpec& spec, const Word& w) {
    for (std::uint8_t c : w)
        if (c >= spec.alphabet()) throw InputError("symbol out of range in word");
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (!spec.allowed(w[i], w[i + 1])) return false;
    return true;
}

Separation separation_metric(const Word& x, const Word& y) {
    if (x.empty() || y.empty()) throw InputError("separation_metric needs nonempty words");
    const std::size_t common = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < common; ++i) {
        if (x[i] != y[i]) return {std::ldexp(1.0, -static_cast<int>(i + 1)), false};
    }
    return {0.0, true};
}

std::uint64_t word_rank(const Word& w, int alphabet_size) {
    std::uint64_t r = 0;
    for (std::uint8_t c : w) r = r * static_cast<std::uint64_t>(alphabet_size) + c;
    return r;
}

}  // namespace gibbsinf
