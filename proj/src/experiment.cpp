#include "mmfs/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "mmfs/csv.hpp"

namespace mmfs {

namespace {

Eigen::MatrixXd masked_columns(const Eigen::MatrixXd& X, const std::vector<std::uint8_t>& mask) {
    const Eigen::Index d =
        static_cast<Eigen::Index>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
    Eigen::MatrixXd out(X.rows(), d);
    Eigen::Index col = 0;
    for (std::size_t j = 0; j < mask.size(); ++j)
        if (mask[j]) out.col(col++) = X.col(static_cast<Eigen::Index>(j));
    return out;
}

}  // namespace

EvaluationReport evaluate_mask(const MultiViewDataset& train, const MultiViewDataset& test,
                               const std::vector<std::uint8_t>& global_mask,
                               const EvalSettings& settings, ClassifierModel* model_out) {
    if (static_cast<int>(global_mask.size()) != train.total_features())
        throw std::invalid_argument("evaluate_mask: mask length " +
                                    std::to_string(global_mask.size()) + " != feature count " +
                                    std::to_string(train.total_features()));
    if (train.view_dims() != test.view_dims())
        throw std::invalid_argument("evaluate_mask: train/test view dimensions differ");
    if (std::count(global_mask.begin(), global_mask.end(), std::uint8_t{1}) == 0)
        throw std::invalid_argument(
            "evaluate_mask: mask selects no features; at least one feature must be selected");

    const Eigen::MatrixXd Xtr = masked_columns(concatenate_views(train), global_mask);
    const Eigen::MatrixXd Xte = masked_columns(concatenate_views(test), global_mask);
    const ClassifierModel model = fit_classifier(Xtr, train.labels, train.class_count, settings);
    if (model_out) *model_out = model;

    const Eigen::VectorXi pred = model.predict(Xte);
    const std::vector<int> y_true = to_label_vector(test.labels);
    const std::vector<int> y_pred = to_label_vector(pred);

    EvaluationReport report;
    report.balanced_accuracy = balanced_accuracy(y_true, y_pred);
    report.confusion = confusion_matrix(y_true, y_pred, train.class_count);
    for (int c = 0; c < train.class_count; ++c) {
        const double row_total = report.confusion.row(c).sum();
        report.per_class_tpf.push_back(row_total > 0 ? report.confusion(c, c) / row_total : 0.0);
    }
    if (train.class_count == 2) {
        report.sensitivity = report.per_class_tpf[1];
        report.specificity = report.per_class_tpf[0];
        const Eigen::VectorXd scores = model.decision_scores(Xte);
        report.auc = auc_binary(y_true, std::vector<double>(scores.data(), scores.data() + scores.size()));
    } else {
        report.auc = auc_multiclass_ova(y_true, model.class_probabilities(Xte));
    }

    const auto per_view = split_mask(train, global_mask);
    for (const auto& m : per_view)
        report.selected_counts_per_view.push_back(
            static_cast<int>(std::count(m.begin(), m.end(), std::uint8_t{1})));
    if (!train.informative_masks.empty())
        for (std::size_t v = 0; v < per_view.size(); ++v)
            report.feature_f1_per_view.push_back(feature_f1(per_view[v], train.informative_masks[v]));
    return report;
}

SyntheticPair make_synthetic_pair(SyntheticTask task, std::uint64_t seed) {
    SyntheticSpec spec = SyntheticSpec::make(task);
    SyntheticSpec doubled = spec;
    doubled.samples_per_class *= 2;  // one draw, split into disjoint halves
    SyntheticDataset full = generate_synthetic(doubled, seed);

    const int C = spec.class_count();
    const int s = spec.samples_per_class;
    const auto take_rows = [&](bool second_half) {
        MultiViewDataset part;
        part.class_count = C;
        part.view_names = full.data.view_names;
        part.feature_names = full.data.feature_names;
        part.informative_masks = full.data.informative_masks;
        part.labels.resize(static_cast<Eigen::Index>(C) * s);
        for (auto& view : full.data.views) {
            Eigen::MatrixXd m(static_cast<Eigen::Index>(C) * s, view.cols());
            for (int c = 0; c < C; ++c)
                m.middleRows(static_cast<Eigen::Index>(c) * s, s) =
                    view.middleRows(static_cast<Eigen::Index>(2 * c + (second_half ? 1 : 0)) * s, s);
            part.views.push_back(std::move(m));
        }
        for (int c = 0; c < C; ++c)
            for (int i = 0; i < s; ++i) {
                const Eigen::Index row = static_cast<Eigen::Index>(c) * s + i;
                part.labels(row) = c;
                part.sample_ids.push_back(
                    full.data.sample_ids[static_cast<std::size_t>((2 * c + (second_half ? 1 : 0)) * s + i)]);
            }
        return part;
    };

    SyntheticPair pair;
    pair.layout.spec = spec;
    pair.layout.permutation = full.permutation;
    pair.layout.data = take_rows(false);
    pair.test = take_rows(true);
    return pair;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    if (cfg.synthetic) {
        SyntheticPair pair = make_synthetic_pair(cfg.task, cfg.data_seed);
        result.synth = std::move(pair.layout);
        result.train = result.synth.data;
        result.test = std::move(pair.test);
        result.has_test = true;
        result.is_synthetic = true;
    } else {
        result.train = load_multiview_csv(cfg.manifest);
        if (!cfg.test_manifest.empty()) {
            result.test = load_multiview_csv(cfg.test_manifest);
            result.has_test = true;
        }
    }

    result.run = run_mmfs_ga(result.train, cfg.niche);

    std::filesystem::create_directories(cfg.out_dir);
    write_mask_file(cfg.out_dir / "mask.txt", result.train, result.run.best_mask);
    save_experiment_config(cfg, cfg.out_dir / "config_used.txt");
    {
        std::vector<std::pair<std::string, std::string>> meta;
        meta.emplace_back("seed", std::to_string(cfg.niche.seed));
        meta.emplace_back("preset", cfg.preset.empty() ? "custom" : cfg.preset);
        meta.emplace_back("best_niche", std::to_string(result.run.best_niche));
        meta.emplace_back("validation_error", std::to_string(result.run.best_fitness.error));
        meta.emplace_back("selected_features", std::to_string(result.run.best_fitness.feature_count));
        write_kv_file(cfg.out_dir / "run_meta.txt", meta);
    }
    {
        CsvTable t;
        t.header = {"niche", "validation_error", "selected_features", "seconds"};
        for (int v = 0; v < result.train.view_count(); ++v)
            t.header.push_back("selected_" + result.train.view_names[v]);
        for (const auto& niche : result.run.niches) {
            std::vector<std::string> row = {std::to_string(niche.niche_id),
                                            std::to_string(niche.fitness.error),
                                            std::to_string(niche.fitness.feature_count),
                                            std::to_string(niche.seconds)};
            for (int count : niche.selected_per_view) row.push_back(std::to_string(count));
            t.rows.push_back(std::move(row));
        }
        write_csv(cfg.out_dir / "niches.csv", t);
    }
    {
        CsvTable t{{"niche", "stage", "view", "generation", "best_f1", "mean_f1", "similarity"}, {}};
        for (const auto& niche : result.run.niches) {
            for (std::size_t v = 0; v < niche.ivfs.size(); ++v)
                for (std::size_t g = 0; g < niche.ivfs[v].best_f1.size(); ++g)
                    t.rows.push_back({std::to_string(niche.niche_id), "view",
                                      std::to_string(v), std::to_string(g + 1),
                                      std::to_string(niche.ivfs[v].best_f1[g]),
                                      std::to_string(niche.ivfs[v].mean_f1[g]),
                                      std::to_string(niche.ivfs[v].similarity[g])});
            for (std::size_t g = 0; g < niche.bvfs.best_f1.size(); ++g)
                t.rows.push_back({std::to_string(niche.niche_id), "combination", "-",
                                  std::to_string(g + 1), std::to_string(niche.bvfs.best_f1[g]),
                                  "", ""});
        }
        write_csv(cfg.out_dir / "trajectories.csv", t);
    }

    if (result.has_test) {
        result.test_report = evaluate_mask(result.train, result.test, result.run.best_mask,
                                           cfg.niche.eval, &result.final_model);
        std::ofstream out(cfg.out_dir / "test_report.txt");
        out << result.test_report.to_kv_text();
        std::ofstream csv(cfg.out_dir / "test_report.csv");
        csv << result.test_report.csv_header() << "\n" << result.test_report.csv_row() << "\n";
    } else {
        const Eigen::MatrixXd X =
            masked_columns(concatenate_views(result.train), result.run.best_mask);
        result.final_model = fit_classifier(X, result.train.labels, result.train.class_count,
                                            cfg.niche.eval);
    }
    return result;
}

}  // namespace mmfs
