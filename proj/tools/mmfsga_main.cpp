#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mmfs/experiment.hpp"

namespace {

int thread_arg_or_env(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("MMFS_THREADS")) {
        try {
            return std::max(0, std::stoi(env));
        } catch (const std::exception&) {
            throw mmfs::ConfigError("MMFS_THREADS: expected an integer, got '" + std::string(env) +
                                    "'");
        }
    }
    return 0;
}

mmfs::SyntheticTask parse_task(const std::string& name) {
    if (name == "binary") return mmfs::SyntheticTask::binary;
    if (name == "four_class") return mmfs::SyntheticTask::four_class;
    throw mmfs::ConfigError("task must be binary or four_class, got '" + name + "'");
}

int cmd_synth(const std::string& task_name, int replicates, std::uint64_t seed,
              const std::filesystem::path& out_dir) {
    const mmfs::SyntheticTask task = parse_task(task_name);
    try {
        for (int r = 0; r < replicates; ++r) {
            const auto pair = mmfs::make_synthetic_pair(task, seed + static_cast<std::uint64_t>(r));
            const auto rep_dir = out_dir / ("rep" + std::to_string(r));
            const auto train_manifest = mmfs::save_multiview_csv(pair.layout.data, rep_dir / "train");
            const auto test_manifest = mmfs::save_multiview_csv(pair.test, rep_dir / "test");
            std::cout << "replicate " << r << ": " << train_manifest.string() << " ("
                      << pair.layout.data.samples() << " train, " << pair.test.samples()
                      << " test samples)\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "synth: " << e.what() << "\n";
        return mmfs::kExitDataError;
    }
    return mmfs::kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& preset, std::int64_t seed,
            const std::string& out) {
    mmfs::ExperimentConfig cfg;
    try {
        cfg = mmfs::load_experiment_config(config_path);
        if (!preset.empty()) mmfs::apply_preset(cfg, preset);
        if (seed >= 0) cfg.niche.seed = static_cast<std::uint64_t>(seed);
        if (!out.empty()) cfg.out_dir = out;
        cfg.validate();
    } catch (const mmfs::ConfigError& e) {
        std::cerr << "run: " << e.what() << "\n";
        return mmfs::kExitConfigError;
    }
    try {
        const auto result = mmfs::run_experiment(cfg);
        std::cout << "best niche " << result.run.best_niche << ", validation error "
                  << result.run.best_fitness.error << ", " << result.run.best_fitness.feature_count
                  << " features\n";
        if (result.has_test)
            std::cout << "test balanced accuracy " << result.test_report.balanced_accuracy << "\n";
        std::cout << "outputs in " << cfg.out_dir.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "run: " << e.what() << "\n";
        return mmfs::kExitRuntimeError;
    }
    return mmfs::kExitOk;
}

int cmd_eval(const std::string& mask_path, const std::string& train_manifest,
             const std::string& test_manifest, const std::string& out) {
    mmfs::MultiViewDataset train, test;
    std::vector<std::uint8_t> mask;
    try {
        train = mmfs::load_multiview_csv(train_manifest);
        test = mmfs::load_multiview_csv(test_manifest);
        mask = mmfs::read_mask_file(mask_path, train);
    } catch (const std::exception& e) {
        std::cerr << "eval: " << e.what() << "\n";
        return mmfs::kExitDataError;
    }
    try {
        const auto report = mmfs::evaluate_mask(train, test, mask, mmfs::EvalSettings{});
        std::cout << report.to_kv_text();
        if (!out.empty()) {
            std::ofstream f(out);
            if (!f) throw std::runtime_error("cannot write " + out);
            f << report.to_kv_text();
        }
    } catch (const std::exception& e) {
        std::cerr << "eval: " << e.what() << "\n";
        return mmfs::kExitRuntimeError;
    }
    return mmfs::kExitOk;
}

int cmd_bayes(const std::string& task_name, const std::string& views, std::int64_t samples,
              std::uint64_t seed) {
    const mmfs::SyntheticTask task = parse_task(task_name);
    std::vector<int> which;
    if (views == "a") which = {0};
    else if (views == "b") which = {1};
    else if (views == "ab") which = {0, 1};
    else throw mmfs::ConfigError("views must be a, b or ab, got '" + views + "'");

    try {
        const auto spec = mmfs::SyntheticSpec::make(task);
        const mmfs::ExecMode mode =
            mmfs::thread_cap() == 1 ? mmfs::ExecMode::serial : mmfs::ExecMode::openmp;
        const double p = mmfs::bayes_error_mc(spec, which, samples, seed, mode);
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
        std::cout << "bayes_error = " << p << " +- " << se << " (" << samples << " samples)\n";
    } catch (const std::exception& e) {
        std::cerr << "bayes: " << e.what() << "\n";
        return mmfs::kExitRuntimeError;
    }
    return mmfs::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MMFS-GA: multiniche multi-objective genetic feature selection for multi-view data"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "cap on worker threads (env MMFS_THREADS as fallback)");

    auto* synth = app.add_subcommand("synth", "generate synthetic benchmark replicates");
    std::string task = "binary";
    int replicates = 10;
    std::int64_t seed = 0;
    std::string out = "synth_out";
    synth->add_option("--task", task, "binary | four_class");
    synth->add_option("--replicates", replicates, "number of train/test pairs");
    synth->add_option("--seed", seed, "master seed; replicate r uses seed + r");
    synth->add_option("--out", out, "output directory");

    auto* run = app.add_subcommand("run", "run the two-stage search from a config file");
    std::string config_path, preset, run_out;
    std::int64_t run_seed = -1;
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--preset", preset, "paper | desk (overrides the config)");
    run->add_option("--seed", run_seed, "overrides run.seed");
    run->add_option("--out", run_out, "overrides run.out");

    auto* eval = app.add_subcommand("eval", "score a saved mask on held-out data");
    std::string mask_path, train_manifest, test_manifest, eval_out;
    eval->add_option("--mask", mask_path, "mask file from a run")->required();
    eval->add_option("--train", train_manifest, "training-set manifest")->required();
    eval->add_option("--test", test_manifest, "held-out-set manifest")->required();
    eval->add_option("--out", eval_out, "also write the report here");

    auto* bayes = app.add_subcommand("bayes", "Monte Carlo Bayes error of the synthetic tasks");
    std::string bayes_task = "binary", views = "ab";
    std::int64_t samples = 1000000;
    std::int64_t bayes_seed = 0;
    bayes->add_option("--task", bayes_task, "binary | four_class");
    bayes->add_option("--views", views, "a | b | ab");
    bayes->add_option("--samples", samples, "Monte Carlo sample count");
    bayes->add_option("--seed", bayes_seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Map CLI11's own exit codes onto the documented ones: help stays 0,
        // any usage problem is a config error.
        return app.exit(e) == 0 ? mmfs::kExitOk : mmfs::kExitConfigError;
    }

    try {
        mmfs::set_thread_cap(thread_arg_or_env(threads));
        if (synth->parsed())
            return cmd_synth(task, replicates, static_cast<std::uint64_t>(seed), out);
        if (run->parsed()) return cmd_run(config_path, preset, run_seed, run_out);
        if (eval->parsed()) return cmd_eval(mask_path, train_manifest, test_manifest, eval_out);
        if (bayes->parsed())
            return cmd_bayes(bayes_task, views, samples, static_cast<std::uint64_t>(bayes_seed));
    } catch (const mmfs::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return mmfs::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return mmfs::kExitRuntimeError;
    }
    return mmfs::kExitOk;
}
