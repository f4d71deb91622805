#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gibbsinf/experiment.hpp"
#include "gibbsinf/kernels.hpp"
#include "gibbsinf/plot.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_numeric = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gibbsinf::InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string load_config_text(const std::string& config_path, const std::string& example) {
    if (!example.empty()) {
        const auto text = gibbsinf::bundled_example_text(example);
        if (!text) throw gibbsinf::InputError("no bundled example named \"" + example + "\"");
        return *text;
    }
    if (config_path.empty()) throw gibbsinf::InputError("pass --config PATH or --example NAME");
    return read_file(config_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian inference over Gibbs measures on subshifts of finite type"};
    app.require_subcommand(1);

    std::string config_path, example, out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int replicas = 0, workers = 0;

    auto add_run_opts = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config file");
        cmd->add_option("--example", example, "bundled example name (see list-examples)");
        cmd->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--replicas", replicas, "override the replica count");
        cmd->add_option("--workers", workers, "worker thread count (0 = default)");
        cmd->add_option("--out", out_dir, "override the output directory");
    };

    auto* run = app.add_subcommand("run", "execute an experiment");
    add_run_opts(run);
    auto* validate = app.add_subcommand("validate", "check a config and list faults");
    validate->add_option("--config", config_path, "experiment config file");
    validate->add_option("--example", example, "bundled example name");
    auto* list = app.add_subcommand("list-examples", "print the bundled example configs");

    gibbsinf::PlotRequest preq;
    auto* plot = app.add_subcommand("plot", "convert a CSV output to SVG");
    plot->add_option("--input", preq.input_csv, "input CSV")->required();
    plot->add_option("--output", preq.output_svg, "output SVG")->required();
    plot->add_option("--mode", preq.mode, "lines | heatmap");
    plot->add_option("--x", preq.x_column, "x column")->required();
    plot->add_option("--y", preq.y_column, "y column")->required();
    plot->add_option("--value", preq.value_column, "heatmap value column");
    plot->add_option("--group", preq.group_column, "series column for lines");
    plot->add_flag("--log-y", preq.log_y, "log10-transform y");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& [name, text] : gibbsinf::bundled_examples()) {
                gibbsinf::ExperimentConfig cfg = gibbsinf::parse_config(text);
                std::cout << name << "  (scheme ";
                switch (cfg.scheme) {
                    case gibbsinf::LossScheme::direct_cylinder: std::cout << "direct_cylinder"; break;
                    case gibbsinf::LossScheme::exp_almost_additive: std::cout << "exp_almost_additive"; break;
                    case gibbsinf::LossScheme::log_almost_additive: std::cout << "log_almost_additive"; break;
                }
                std::cout << ", " << cfg.replicas << " replicas, n up to " << cfg.n_schedule.back() << ")\n";
            }
            return exit_ok;
        }
        if (validate->parsed()) {
            const std::string text = load_config_text(config_path, example);
            const auto faults = gibbsinf::validate_config(text);
            if (faults.empty()) {
                std::cout << "ok\n";
                return exit_ok;
            }
            for (const auto& f : faults)
                std::cout << "line " << f.line << ", " << f.field << ": " << f.message << "\n";
            return exit_validation;
        }
        if (plot->parsed()) {
            gibbsinf::render_plot(preq);
            std::cout << "wrote " << preq.output_svg << "\n";
            return exit_ok;
        }
        // run
        const std::string text = load_config_text(config_path, example);
        gibbsinf::ExperimentConfig cfg = gibbsinf::parse_config(text);
        if (seed_set) cfg.seed = seed;
        if (replicas > 0) cfg.replicas = replicas;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        gibbsinf::set_worker_count(workers);
        const gibbsinf::RunManifest man = gibbsinf::run_experiment(cfg);
        std::cout << "completed " << cfg.name << " (config " << man.config_hash << ")\n";
        for (const auto& p : man.outputs) std::cout << "  " << p << "\n";
        return exit_ok;
    } catch (const gibbsinf::InputError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return exit_validation;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return exit_numeric;
    }
}
