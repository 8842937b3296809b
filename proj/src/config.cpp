#include "mmfs/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "mmfs/csv.hpp"

namespace mmfs {

void ExperimentConfig::validate() const {
    if (synthetic == !manifest.empty())
        throw ConfigError("config: exactly one of data.manifest and data.synthetic_task required");
    niche.validate();
}

void apply_preset(ExperimentConfig& cfg, const std::string& name) {
    if (name == "paper") {
        cfg.niche.n_niches = 6;
        cfg.niche.ivfs_pop = cfg.niche.ivfs_gen = 0;  // auto-sized from the data
        cfg.niche.bvfs_pop = cfg.niche.bvfs_gen = 0;
    } else if (name == "desk") {
        cfg.niche.n_niches = 2;
        cfg.niche.ivfs_pop = 50;
        cfg.niche.ivfs_gen = 100;
        cfg.niche.bvfs_pop = 50;
        cfg.niche.bvfs_gen = 100;
    } else {
        throw ConfigError("config: unknown preset '" + name + "' (expected paper or desk)");
    }
    cfg.preset = name;
}

namespace {

double to_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "': expected a number, got '" + value + "'");
    }
}

long long to_int(const std::string& key, const std::string& value) {
    const double v = to_real(key, value);
    if (v != static_cast<long long>(v))
        throw ConfigError("config: key '" + key + "': expected an integer, got '" + value + "'");
    return static_cast<long long>(v);
}

std::string format_real(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::vector<std::pair<std::string, std::string>> entries;
    try {
        entries = read_kv_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }

    ExperimentConfig cfg;
    const auto base = path.parent_path();
    bool preset_seen = false;
    for (const auto& [key, value] : entries) {
        if (key == "data.manifest") {
            cfg.manifest = (base / value).string();
        } else if (key == "data.test_manifest") {
            cfg.test_manifest = (base / value).string();
        } else if (key == "data.synthetic_task") {
            cfg.synthetic = true;
            if (value == "binary") cfg.task = SyntheticTask::binary;
            else if (value == "four_class") cfg.task = SyntheticTask::four_class;
            else throw ConfigError("config: data.synthetic_task must be binary or four_class");
        } else if (key == "data.seed") {
            cfg.data_seed = static_cast<std::uint64_t>(to_int(key, value));
        } else if (key == "run.preset") {
            apply_preset(cfg, value);
            preset_seen = true;
        } else if (key == "run.seed") {
            cfg.niche.seed = static_cast<std::uint64_t>(to_int(key, value));
        } else if (key == "run.out") {
            cfg.out_dir = base / value;
        } else if (key == "run.threads") {
            set_thread_cap(static_cast<int>(to_int(key, value)));
        } else if (key == "search.n_niches") {
            cfg.niche.n_niches = static_cast<int>(to_int(key, value));
        } else if (key == "search.migration_interval") {
            cfg.niche.migration_interval = static_cast<int>(to_int(key, value));
        } else if (key == "search.migration_fraction") {
            cfg.niche.migration_fraction = to_real(key, value);
        } else if (key == "search.ivfs_pop") {
            cfg.niche.ivfs_pop = static_cast<int>(to_int(key, value));
        } else if (key == "search.ivfs_gen") {
            cfg.niche.ivfs_gen = static_cast<int>(to_int(key, value));
        } else if (key == "search.bvfs_pop") {
            cfg.niche.bvfs_pop = static_cast<int>(to_int(key, value));
        } else if (key == "search.bvfs_gen") {
            cfg.niche.bvfs_gen = static_cast<int>(to_int(key, value));
        } else if (key == "search.ivfs_crossover_prob") {
            cfg.niche.ivfs_variation.crossover_prob = to_real(key, value);
        } else if (key == "search.ivfs_mutation_prob") {
            cfg.niche.ivfs_variation.mutation_prob = to_real(key, value);
        } else if (key == "search.bvfs_crossover_prob") {
            cfg.niche.bvfs_variation.crossover_prob = to_real(key, value);
        } else if (key == "search.bvfs_mutation_prob") {
            cfg.niche.bvfs_variation.mutation_prob = to_real(key, value);
        } else if (key == "search.similarity_threshold") {
            cfg.niche.similarity_threshold = to_real(key, value);
        } else if (key == "search.repair_prob") {
            cfg.niche.repair_prob = to_real(key, value);
        } else if (key == "search.init_density") {
            cfg.niche.init_density = to_real(key, value);
        } else if (key == "eval.n_folds") {
            cfg.niche.eval.n_folds = static_cast<int>(to_int(key, value));
        } else if (key == "eval.lda_ridge") {
            cfg.niche.eval.lda_ridge = to_real(key, value);
        } else if (key == "eval.mlr_l2") {
            cfg.niche.eval.mlr_l2 = to_real(key, value);
        } else if (key == "eval.mlr_max_iter") {
            cfg.niche.eval.mlr_max_iter = static_cast<int>(to_int(key, value));
        } else if (key == "eval.mlr_tol") {
            cfg.niche.eval.mlr_tol = to_real(key, value);
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    if (!preset_seen && cfg.preset.empty()) cfg.preset = "custom";
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

void save_experiment_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::vector<std::pair<std::string, std::string>> entries;
    if (cfg.synthetic) {
        entries.emplace_back("data.synthetic_task",
                             cfg.task == SyntheticTask::binary ? "binary" : "four_class");
        entries.emplace_back("data.seed", std::to_string(cfg.data_seed));
    } else {
        entries.emplace_back("data.manifest", cfg.manifest);
    }
    if (!cfg.test_manifest.empty()) entries.emplace_back("data.test_manifest", cfg.test_manifest);
    entries.emplace_back("run.seed", std::to_string(cfg.niche.seed));
    entries.emplace_back("run.out", cfg.out_dir.string());
    entries.emplace_back("search.n_niches", std::to_string(cfg.niche.n_niches));
    entries.emplace_back("search.migration_interval", std::to_string(cfg.niche.migration_interval));
    entries.emplace_back("search.migration_fraction", format_real(cfg.niche.migration_fraction));
    entries.emplace_back("search.ivfs_pop", std::to_string(cfg.niche.ivfs_pop));
    entries.emplace_back("search.ivfs_gen", std::to_string(cfg.niche.ivfs_gen));
    entries.emplace_back("search.bvfs_pop", std::to_string(cfg.niche.bvfs_pop));
    entries.emplace_back("search.bvfs_gen", std::to_string(cfg.niche.bvfs_gen));
    entries.emplace_back("search.ivfs_crossover_prob",
                         format_real(cfg.niche.ivfs_variation.crossover_prob));
    entries.emplace_back("search.ivfs_mutation_prob",
                         format_real(cfg.niche.ivfs_variation.mutation_prob));
    entries.emplace_back("search.bvfs_crossover_prob",
                         format_real(cfg.niche.bvfs_variation.crossover_prob));
    entries.emplace_back("search.bvfs_mutation_prob",
                         format_real(cfg.niche.bvfs_variation.mutation_prob));
    entries.emplace_back("search.similarity_threshold",
                         format_real(cfg.niche.similarity_threshold));
    entries.emplace_back("search.repair_prob", format_real(cfg.niche.repair_prob));
    entries.emplace_back("search.init_density", format_real(cfg.niche.init_density));
    entries.emplace_back("eval.n_folds", std::to_string(cfg.niche.eval.n_folds));
    entries.emplace_back("eval.lda_ridge", format_real(cfg.niche.eval.lda_ridge));
    entries.emplace_back("eval.mlr_l2", format_real(cfg.niche.eval.mlr_l2));
    entries.emplace_back("eval.mlr_max_iter", std::to_string(cfg.niche.eval.mlr_max_iter));
    entries.emplace_back("eval.mlr_tol", format_real(cfg.niche.eval.mlr_tol));
    write_kv_file(path, entries);
}

void write_mask_file(const std::filesystem::path& path, const MultiViewDataset& dataset,
                     const std::vector<std::uint8_t>& global_mask) {
    const auto per_view = split_mask(dataset, global_mask);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (int v = 0; v < dataset.view_count(); ++v) {
        out << dataset.view_names[v] << ":";
        bool first = true;
        for (std::size_t j = 0; j < per_view[v].size(); ++j) {
            if (!per_view[v][j]) continue;
            out << (first ? " " : ",") << dataset.feature_names[v][j];
            first = false;
        }
        out << "\n";
    }
}

std::vector<std::uint8_t> read_mask_file(const std::filesystem::path& path,
                                         const MultiViewDataset& dataset) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::map<std::string, std::vector<std::string>> selected;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected 'ViewName: features'");
        const std::string view = line.substr(0, colon);
        std::vector<std::string> names;
        std::stringstream rest(line.substr(colon + 1));
        std::string name;
        while (std::getline(rest, name, ',')) {
            const auto a = name.find_first_not_of(" \t");
            if (a == std::string::npos) continue;
            const auto b = name.find_last_not_of(" \t");
            names.push_back(name.substr(a, b - a + 1));
        }
        if (!selected.emplace(view, std::move(names)).second)
            throw std::runtime_error(path.string() + ": duplicate view '" + view + "'");
    }

    std::vector<std::uint8_t> mask;
    for (int v = 0; v < dataset.view_count(); ++v) {
        const auto it = selected.find(dataset.view_names[v]);
        std::vector<std::uint8_t> view_mask(dataset.feature_names[v].size(), 0);
        if (it != selected.end()) {
            for (const auto& feat : it->second) {
                const auto& names = dataset.feature_names[v];
                const auto pos = std::find(names.begin(), names.end(), feat);
                if (pos == names.end())
                    throw std::runtime_error(path.string() + ": feature '" + feat +
                                             "' not found in view " + dataset.view_names[v]);
                view_mask[static_cast<std::size_t>(pos - names.begin())] = 1;
            }
            selected.erase(it);
        }
        mask.insert(mask.end(), view_mask.begin(), view_mask.end());
    }
    if (!selected.empty())
        throw std::runtime_error(path.string() + ": unknown view '" + selected.begin()->first + "'");
    return mask;
}

}  // namespace mmfs
