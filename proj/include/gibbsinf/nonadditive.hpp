#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gibbsinf/gibbs.hpp"
#include "gibbsinf/logspace.hpp"
#include "gibbsinf/rng.hpp"

namespace gibbsinf {

/// Finite-data stand-in for lim a_n / n. `certified_min` is min a_n/n over the
/// provided points (an upper bound of the limit for sub-additive sequences);
/// `extrapolated` is the slope of the least-squares line a_n = L n + b fitted
/// on the top half of the range. A finite computation is never reported as the
/// limit itself: callers keep all three values.
struct FeketeLimit {
    double certified_min = 0.0;
    double extrapolated = 0.0;
    double last_value = 0.0;
};

FeketeLimit fekete_limit(const std::vector<std::pair<int, double>>& values);

/// Sequence family phi_n with a declared almost-additivity constant. The
/// evaluator receives (n, theta, x-word, y-word); families that ignore some
/// slots are passed empty spans/words. `linear_free_energy`, when present,
/// gives F(eta, Psi) = const + sum c_i * int pot_i d eta exactly for Markov
/// eta, which the deviation bounds use instead of finite-n estimation.
struct SequenceFamily {
    enum class Kind { additive, almost_additive, sub_additive };

    Kind kind = Kind::almost_additive;
    double declared_constant = 0.0;
    std::function<double(int n, std::span<const double> theta, const Word& x, const Word& y)> eval;

    struct LinearFreeEnergy {
        std::vector<std::pair<double, Potential>> terms;
        double constant = 0.0;
    };
    std::optional<LinearFreeEnergy> linear_free_energy;

    double operator()(int n, const Word& y) const { return eval(n, {}, {}, y); }
};

struct AlmostAdditiveReport {
    double max_violation = neg_inf;  // max |phi_{n+m} - phi_n - phi_m o sigma^n| - C; <= 0 certifies tested instances
    int witness_n = 0, witness_m = 0;
    Word witness_word;
    int trials = 0;
};

/// Spot check of Definition-style almost additivity on random split points and
/// random admissible words (over `domain`, defaulting to the full 2-shift).
/// An empty-violation report certifies the property on the tested instances only.
AlmostAdditiveReport check_almost_additive(const SequenceFamily& f, int n_max, int trials, SeededStream& s,
                                           const SubshiftSpec* domain = nullptr);

/// Per-node positive observable psi_n(theta, y) used by the log-loss posterior.
struct PsiSpec {
    std::function<double(int node, int n, const Word& y)> eval;
};

struct ParamFamily;  // family.hpp

struct PsiStarEntry {
    FeketeLimit limit;
    double std_error_last = 0.0;  // Monte Carlo spread of the last averaged point
};

/// psi_*(theta) = inf_n (1/n) int psi_n(theta, y) dnu(y), estimated per node by
/// replica-averaged psi_n/n followed by the Fekete triple.
std::vector<PsiStarEntry> psi_star(const ParamFamily& fam, const PsiSpec& psi, const GibbsMeasure& nu,
                                   const std::vector<int>& n_list, int replicas, SeededStream& s);

struct FreeEnergyOptions {
    std::uint64_t word_cap = 2'000'000;
    int mc_samples = 256;
};

struct FreeEnergyReport {
    std::vector<std::pair<int, double>> values;  // (n, (1/n) int psi_n d eta)
    FeketeLimit limit;
    bool used_monte_carlo = false;
    std::vector<double> std_errors;
};

/// F(eta, Psi) data: exact finite sums (1/n) sum_w eta([w]) psi_n(w) while
/// q^n stays under the cap, seeded Monte Carlo with error bars beyond it.
FreeEnergyReport free_energy(const GibbsMeasure& eta, const SequenceFamily& f, const std::vector<int>& n_list,
                             const FreeEnergyOptions& opt = {}, SeededStream mc_stream = {});

}  // namespace gibbsinf
