#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mmfs/eval.hpp"
#include "mmfs/parallel.hpp"

namespace mmfs {

struct MultiViewDataset {
    std::vector<Eigen::MatrixXd> views;   // each e x k_v
    Eigen::VectorXi labels;               // in {0..C-1}
    int class_count = 2;
    std::vector<std::string> view_names;
    std::vector<std::vector<std::string>> feature_names;  // per view
    std::vector<std::string> sample_ids;
    std::vector<std::vector<std::uint8_t>> informative_masks;  // per view; empty when unknown

    Eigen::Index samples() const { return labels.size(); }
    int view_count() const { return static_cast<int>(views.size()); }
    std::vector<int> view_dims() const;
    int total_features() const;
    void validate() const;
};

Eigen::MatrixXd concatenate_views(const MultiViewDataset& dataset);
std::vector<std::uint8_t> concatenate_masks(const std::vector<std::vector<std::uint8_t>>& per_view);
std::vector<std::vector<std::uint8_t>> split_mask(const MultiViewDataset& dataset,
                                                  const std::vector<std::uint8_t>& global_mask);

enum class SyntheticTask { binary, four_class };
enum class NoiseKind { gaussian, uniform01, chi_square1 };

/// One multivariate-normal feature block shared across classes up to its mean.
struct GaussianBlock {
    std::vector<Eigen::VectorXd> class_means;  // one per class
    Eigen::MatrixXd cov;                       // symmetric positive definite

    Eigen::Index dim() const { return cov.rows(); }
};

struct SyntheticSpec {
    SyntheticTask task = SyntheticTask::binary;
    int samples_per_class = 100;
    std::vector<int> view_dims = {500, 500, 500, 500, 500};
    // Noise distribution of views 3-5; views 1-2 pad with standard Gaussians.
    std::vector<NoiseKind> noise_views = {NoiseKind::uniform01, NoiseKind::chi_square1,
                                          NoiseKind::gaussian};
    // Informative structure of views 1 and 2 (views A and B).
    std::vector<std::vector<GaussianBlock>> informative_blocks;

    int class_count() const { return task == SyntheticTask::binary ? 2 : 4; }
    int informative_dim(int view) const;
    void validate() const;  // throws on non-PD covariance or shape mismatch

    static SyntheticSpec make(SyntheticTask task);
};

struct SyntheticDataset {
    MultiViewDataset data;
    // permutation[v][j] = source column of output column j (informative
    // columns come first in source order).
    std::vector<std::vector<int>> permutation;
    SyntheticSpec spec;
};

SyntheticDataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// Monte Carlo estimate of the Bayes error over the informative features of
/// the chosen views (0 = view A, 1 = view B). Deterministic per seed and
/// independent of ExecMode.
double bayes_error_mc(const SyntheticSpec& spec, const std::vector<int>& which_views,
                      std::int64_t n_samples, std::uint64_t seed,
                      ExecMode mode = ExecMode::serial);

/// Misclassification probability of a fixed trained classifier over fresh
/// draws from the true distribution, restricted to the masked columns of the
/// generated layout.
double conditional_pmc(const ClassifierModel& model, const std::vector<std::uint8_t>& global_mask,
                       const SyntheticDataset& dataset, std::int64_t n_samples, std::uint64_t seed,
                       ExecMode mode = ExecMode::serial);

/// Loads a multi-view dataset from a key-value manifest naming per-view CSV
/// files and a labels CSV; rows are matched by sample id.
MultiViewDataset load_multiview_csv(const std::filesystem::path& manifest_path);

/// Writes the dataset in the same CSV + manifest layout; returns the
/// manifest path.
std::filesystem::path save_multiview_csv(const MultiViewDataset& dataset,
                                         const std::filesystem::path& dir);

struct NoiseAugmentResult {
    MultiViewDataset data;
    std::vector<std::vector<int>> permutation;  // as in SyntheticDataset
};

NoiseAugmentResult add_noise_features(const MultiViewDataset& dataset,
                                      const std::vector<int>& target_dims,
                                      const std::vector<NoiseKind>& distributions,
                                      std::uint64_t seed);

}  // namespace mmfs
