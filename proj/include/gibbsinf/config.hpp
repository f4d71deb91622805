#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gibbsinf/family.hpp"

namespace gibbsinf {

struct ConfigFault {
    int line = 0;  // 0 when the fault is not tied to a line
    std::string field;
    std::string message;
};

enum class FamilyKind { markov_2x2, bernoulli_atoms, jacobian_mixture, cocycle };
enum class LossScheme { direct_cylinder, exp_almost_additive, log_almost_additive };

/// Flat key-value experiment description. Sections: [subshift], [family],
/// [prior], [sampling], [loss], [deviations], [output]. No programmable
/// config; every run is a diffable text file.
struct ExperimentConfig {
    std::string name = "experiment";

    int alphabet = 2;
    std::vector<std::uint8_t> transitions;  // row-major

    FamilyKind family_kind = FamilyKind::bernoulli_atoms;
    // markov_2x2
    double a_lo = 0.2, a_hi = 0.8, b_lo = 0.2, b_hi = 0.8;
    int a_count = 21, b_count = 21;
    // bernoulli_atoms: (coordinate, probabilities)
    std::vector<std::pair<double, std::vector<double>>> atoms;
    // jacobian_mixture
    int mixture_cells = 11;
    int j0_depth = 1, j1_depth = 1;
    std::vector<std::pair<Word, double>> j0_entries, j1_entries;
    // cocycle
    double cocycle_eps = 0.1;
    int cocycle_grid = 9;
    std::vector<double> cocycle_base_probs = {0.5, 0.5};

    // prior: uniform only (atom families may carry explicit weights)
    std::vector<double> prior_weights;  // empty -> uniform

    // sampling measure: family node or an external Bernoulli/Markov law
    enum class SamplingKind { family_node, bernoulli, markov_2x2 } sampling_kind = SamplingKind::bernoulli;
    std::vector<double> sampling_node_coords;
    std::vector<double> sampling_probs = {0.5, 0.5};
    double sampling_a = 0.5, sampling_b = 0.5;

    std::vector<int> n_schedule = {1000};
    int replicas = 32;
    std::uint64_t seed = 1;

    LossScheme scheme = LossScheme::direct_cylinder;
    std::string loss_observable;  // "cocycle_log_norm" | "cocycle_annealed_log_norm"
    int mc_samples = 1024;

    std::vector<double> delta_ladder;
    double zeta = 0.01;
    double fit_window_frac = 0.2;
    bool emit_lyapunov_grid = false;
    std::vector<int> lyapunov_n_list;

    std::string out_dir = "out";

    std::string source_text;  // verbatim config text, hashed into the manifest
};

/// Parses without throwing; faults carry line/field identifiers. An empty
/// fault list means the config is loadable.
std::vector<ConfigFault> validate_config(const std::string& text, ExperimentConfig* out = nullptr);

/// Parse-or-throw wrapper around validate_config.
ExperimentConfig parse_config(const std::string& text);

/// Bundled example configs (name -> config text); `list-examples` prints these.
const std::vector<std::pair<std::string, std::string>>& bundled_examples();
std::optional<std::string> bundled_example_text(const std::string& name);

ParamFamily build_family(const ExperimentConfig& cfg, const GibbsOptions& opt = {});
PriorMeasure build_prior(const ExperimentConfig& cfg, const ParamFamily& fam);
GibbsMeasure build_sampling_measure(const ExperimentConfig& cfg, const ParamFamily& fam,
                                    const GibbsOptions& opt = {});

}  // namespace gibbsinf
