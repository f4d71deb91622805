#include "gibbsinf/cocycle.hpp"

#include <algorithm>
#include <cmath>

#include "gibbsinf/errors.hpp"
#include "gibbsinf/kernels.hpp"
#include "gibbsinf/logspace.hpp"
#include "gibbsinf/sampling.hpp"

namespace gibbsinf {

double Mat2::max_abs() const { return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}); }

double spectral_norm(const Mat2& m) {
    const double p = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
    const double twodet = 2.0 * std::abs(m.det());
    const double hi = std::sqrt(std::max(p + twodet, 0.0));
    const double lo = std::sqrt(std::max(p - twodet, 0.0));
    return 0.5 * (hi + lo);
}

CocycleSpec CocycleSpec::rotated_hyperbolic(std::vector<double> angles) {
    if (angles.empty()) throw InputError("CocycleSpec: need one angle per symbol");
    CocycleSpec c;
    c.matrices.reserve(angles.size());
    for (double t : angles) {
        const double co = std::cos(t), si = std::sin(t);
        // H * R(t), H = [[2, 1], [1, 1]]
        c.matrices.push_back(Mat2{2 * co + si, -2 * si + co, co + si, -si + co});
    }
    c.angles = std::move(angles);
    return c;
}

Mat2 cocycle_product(const CocycleSpec& c, const Word& w) {
    Mat2 p = Mat2::identity();
    for (std::uint8_t a : w) {
        if (a >= c.matrices.size()) throw InputError("cocycle_product: symbol without a matrix");
        p = c.matrices[static_cast<std::size_t>(a)] * p;
    }
    return p;
}

double log_product_norm(const CocycleSpec& c, const Word& w) {
    Mat2 p = Mat2::identity();
    double acc = 0.0;
    int steps = 0;
    for (std::uint8_t a : w) {
        if (a >= c.matrices.size()) throw InputError("log_product_norm: symbol without a matrix");
        p = c.matrices[static_cast<std::size_t>(a)] * p;
        if (++steps % 32 == 0) {
            const double s = p.max_abs();
            p.scale(1.0 / s);
            acc += std::log(s);
        }
    }
    return acc + std::log(spectral_norm(p));
}

double log_det_drift(const CocycleSpec& c, const Word& w) {
    double acc = 0.0;
    for (std::uint8_t a : w) {
        if (a >= c.matrices.size()) throw InputError("log_det_drift: symbol without a matrix");
        acc += std::log(std::abs(c.matrices[static_cast<std::size_t>(a)].det()));
    }
    return acc;
}

double top_lyapunov_quenched(const CocycleSpec& c, const GibbsMeasure& m, int n, SeededStream& s) {
    if (n < 1) throw InputError("top_lyapunov_quenched: n must be >= 1");
    const Word y = sample_orbit(m, n, s);
    return log_product_norm(c, y) / static_cast<double>(n);
}

AnnealedReport annealed_lyapunov(const CocycleSpec& c, const GibbsMeasure& m, const std::vector<int>& n_list,
                                 const AnnealedOptions& opt) {
    if (n_list.empty()) throw InputError("annealed_lyapunov: empty n list");
    const int q = m.spec.alphabet();
    const int n_max = *std::max_element(n_list.begin(), n_list.end());
    double words = 1.0;
    for (int i = 0; i < n_max && words <= 1e18; ++i) words *= q;

    AnnealedReport rep;
    rep.std_errors.assign(n_list.size(), 0.0);
    if (words <= static_cast<double>(opt.word_cap)) {
        const std::vector<double> sums = annealed_log_norm_sums(c, m, n_list);
        for (std::size_t t = 0; t < n_list.size(); ++t)
            rep.values.push_back({n_list[t], sums[t] / n_list[t]});
    } else {
        if (!opt.monte_carlo_fallback)
            throw InputError("annealed_lyapunov: q^n exceeds the exact-sum cap and Monte Carlo is not enabled");
        rep.used_monte_carlo = true;
        SeededStream base = opt.mc_stream;
        for (std::size_t t = 0; t < n_list.size(); ++t) {
            const int n = n_list[t];
            const std::vector<double> vals =
                mc_log_norm_samples(c, m, n, opt.mc_samples, base.substream(static_cast<std::uint64_t>(n)));
            double mean = 0.0;
            for (double v : vals) mean += v;
            mean /= static_cast<double>(vals.size());
            double var = 0.0;
            for (double v : vals) var += (v - mean) * (v - mean);
            var /= static_cast<double>(vals.size() > 1 ? vals.size() - 1 : 1);
            rep.values.push_back({n, mean / n});
            rep.std_errors[t] = std::sqrt(var / static_cast<double>(vals.size())) / n;
        }
    }
    std::vector<std::pair<int, double>> raw;
    raw.reserve(rep.values.size());
    for (const auto& [n, v] : rep.values) raw.push_back({n, v * n});
    rep.limit = fekete_limit(raw);
    return rep;
}

}  // namespace gibbsinf
