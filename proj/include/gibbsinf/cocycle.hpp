#pragma once

#include <vector>

#include "gibbsinf/gibbs.hpp"
#include "gibbsinf/nonadditive.hpp"
#include "gibbsinf/rng.hpp"

namespace gibbsinf {

struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;  // [[a, b], [c, d]]

    static Mat2 identity() { return {}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    double det() const { return a * d - b * c; }
    double max_abs() const;
    void scale(double s) { a *= s; b *= s; c *= s; d *= s; }
};

/// Spectral norm from the closed-form 2x2 singular values:
/// sigma_1 = (sqrt(p + 2|det|) + sqrt(p - 2|det|)) / 2 with p the entry-square sum.
double spectral_norm(const Mat2& m);

/// Per-symbol SL(2,R) matrices H * R(theta_i), H = [[2, 1], [1, 1]], R a rotation.
struct CocycleSpec {
    std::vector<double> angles;
    std::vector<Mat2> matrices;

    static CocycleSpec rotated_hyperbolic(std::vector<double> angles);
};

/// Product in orbit order: A_{w_n} ... A_{w_2} A_{w_1}. Empty word -> identity.
Mat2 cocycle_product(const CocycleSpec& c, const Word& w);

/// log || A_{w_n} ... A_{w_1} || with the carried product renormalized every 32
/// steps (log accumulated) so long words never overflow.
double log_product_norm(const CocycleSpec& c, const Word& w);

/// log |det| of the product via factor multiplicativity. A single-matrix
/// representation cannot resolve the determinant of long products (the small
/// singular value sits below machine precision past ~15 steps), so the
/// certified unimodularity drift accumulates over the factors.
double log_det_drift(const CocycleSpec& c, const Word& w);

/// (1/n) log ||A^{(n)}(y)|| along one orbit sampled from m.
double top_lyapunov_quenched(const CocycleSpec& c, const GibbsMeasure& m, int n, SeededStream& s);

struct AnnealedOptions {
    std::uint64_t word_cap = 2'000'000;  // exact-sum guard on q^n
    bool monte_carlo_fallback = false;   // beyond the cap; off -> InputError
    int mc_samples = 4096;
    SeededStream mc_stream{};
};

struct AnnealedReport {
    std::vector<std::pair<int, double>> values;  // (n, (1/n) int log||A^{(n)}|| dmu)
    FeketeLimit limit;
    bool used_monte_carlo = false;
    std::vector<double> std_errors;  // per n, zero for exact sums
};

/// Annealed exponent data: exact mu-weighted word sums per n (within the cap),
/// then the Fekete (certified, extrapolated, last) triple.
AnnealedReport annealed_lyapunov(const CocycleSpec& c, const GibbsMeasure& m, const std::vector<int>& n_list,
                                 const AnnealedOptions& opt = {});

}  // namespace gibbsinf
