#pragma once

#include <vector>

#include "gibbsinf/family.hpp"

namespace gibbsinf {

/// Hot inner loops, each in an OpenMP-parallel form and a serial reference
/// form with identical arithmetic (fixed chunking, serial folds), so the two
/// agree bit-for-bit and results do not depend on the thread count.
/// tools/bench_kernels compares their wall times.

/// log mu_theta([y]) for every family node.
std::vector<double> node_cylinder_loglik(const ParamFamily& fam, const Word& y);
std::vector<double> node_cylinder_loglik_serial(const ParamFamily& fam, const Word& y);

/// Exact int e^{S_n u} dmu by weighted transfer-matrix powers,
/// log-renormalized.
double log_birkhoff_moment(const GibbsMeasure& m, const Potential& u, int n);

/// Per-depth exact sums sum_w mu([w]) log||A_w|| accumulated over one DFS of
/// the admissible word tree; out[i] corresponds to n_list[i].
std::vector<double> annealed_log_norm_sums(const CocycleSpec& c, const GibbsMeasure& m,
                                           const std::vector<int>& n_list);
std::vector<double> annealed_log_norm_sums_serial(const CocycleSpec& c, const GibbsMeasure& m,
                                                  const std::vector<int>& n_list);

struct LossSpec;  // posterior.hpp

/// Monte Carlo log int e^{phi_n} dmu_theta per node (log-mean-exp over
/// loss.mc_samples orbits), with delta-method standard errors.
void mc_log_moments(const ParamFamily& fam, const LossSpec& loss, const Word& y, int n,
                    std::vector<double>& out, std::vector<double>* std_errors);
void mc_log_moments_serial(const ParamFamily& fam, const LossSpec& loss, const Word& y, int n,
                           std::vector<double>& out, std::vector<double>* std_errors);

/// Quenched log-norm samples of length-n products under m; one value per
/// sample, deterministic per (stream, sample index).
std::vector<double> mc_log_norm_samples(const CocycleSpec& c, const GibbsMeasure& m, int n, int samples,
                                        SeededStream stream);
std::vector<double> mc_log_norm_samples_serial(const CocycleSpec& c, const GibbsMeasure& m, int n, int samples,
                                               SeededStream stream);

/// Thread budget used by the parallel kernels (0 = library default).
void set_worker_count(int workers);

}  // namespace gibbsinf
