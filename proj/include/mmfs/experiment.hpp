#pragma once

#include "mmfs/config.hpp"
#include "mmfs/metrics.hpp"
#include "mmfs/search.hpp"

namespace mmfs {

/// Trains the task-appropriate classifier on the masked training features and
/// scores it on the held-out set. Feature-recovery F1 is filled in when the
/// training set carries ground-truth informative masks. `model_out` receives
/// the trained model when non-null.
EvaluationReport evaluate_mask(const MultiViewDataset& train, const MultiViewDataset& test,
                               const std::vector<std::uint8_t>& global_mask,
                               const EvalSettings& settings, ClassifierModel* model_out = nullptr);

/// A benchmark replicate: train rows live in layout.data (so the column
/// permutation record stays attached); test rows are a disjoint draw from the
/// same distribution and column order.
struct SyntheticPair {
    SyntheticDataset layout;
    MultiViewDataset test;
};

SyntheticPair make_synthetic_pair(SyntheticTask task, std::uint64_t seed);

struct ExperimentResult {
    RunReport run;
    MultiViewDataset train;
    MultiViewDataset test;
    bool has_test = false;
    SyntheticDataset synth;  // column permutation record; synthetic runs only
    bool is_synthetic = false;
    EvaluationReport test_report;
    ClassifierModel final_model;  // trained on the full training set, masked
};

/// End-to-end driver behind `run`: loads or generates the data, runs the
/// search, writes the mask, reports, trajectories and a reproducibility
/// record under cfg.out_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace mmfs
