#include "gibbsinf/sampling.hpp"

#include "gibbsinf/errors.hpp"

namespace gibbsinf {

Word sample_orbit(const GibbsMeasure& m, int n, SeededStream& s) {
    if (n < 1) throw InputError("sample_orbit: n must be >= 1");
    const int q = m.spec.alphabet();
    const int d = m.state_len;
    Word w;
    w.reserve(static_cast<std::size_t>(n));

    // initial state from the marginal
    int state = static_cast<int>(m.states.size()) - 1;
    {
        const double u = s.next_double();
        double cum = 0.0;
        for (int i = 0; i < static_cast<int>(m.states.size()); ++i) {
            cum += m.marginal[static_cast<std::size_t>(i)];
            if (u < cum) {
                state = i;
                break;
            }
        }
    }
    for (int i = 0; i < d && static_cast<int>(w.size()) < n; ++i) w.push_back(m.states[static_cast<std::size_t>(state)][static_cast<std::size_t>(i)]);

    while (static_cast<int>(w.size()) < n) {
        const double u = s.next_double();
        double cum = 0.0;
        int pick = -1;
        for (int a = 0; a < q; ++a) {
            const double pa = m.cond[static_cast<std::size_t>(state) * q + a];
            if (pa <= 0.0) continue;
            cum += pa;
            if (u < cum) {
                pick = a;
                break;
            }
        }
        if (pick < 0) {
            // numeric tail: fall back to the largest admissible symbol
            for (int a = q - 1; a >= 0; --a)
                if (m.next_state[static_cast<std::size_t>(state) * q + a] >= 0) {
                    pick = a;
                    break;
                }
        }
        w.push_back(static_cast<std::uint8_t>(pick));
        state = m.next_state[static_cast<std::size_t>(state) * q + pick];
    }
    return w;
}

std::vector<double> empirical_pair_frequencies(const Word& w, const SubshiftSpec& spec) {
    if (w.size() < 2) throw InputError("empirical_pair_frequencies: need |w| >= 2");
    const int q = spec.alphabet();
    std::vector<double> freq(static_cast<std::size_t>(q) * q, 0.0);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) freq[static_cast<std::size_t>(w[i]) * q + w[i + 1]] += 1.0;
    const double total = static_cast<double>(w.size() - 1);
    for (double& v : freq) v /= total;
    return freq;
}

}  // namespace gibbsinf
