#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mmfs/parallel.hpp"
#include "mmfs/rng.hpp"

namespace mmfs {

/// Stratified fold assignment, fixed for the whole run so that identical
/// masks always receive identical fitness.
struct FoldPlan {
    std::vector<int> fold_of;  // per-sample fold index in [0, n_folds)
    int n_folds = 10;
};

FoldPlan make_fold_plan(const Eigen::VectorXi& labels, int n_folds, std::uint64_t seed);

enum class ClassifierKind { lda, mlr };

struct ClassifierModel {
    ClassifierKind kind = ClassifierKind::lda;
    int class_count = 2;
    Eigen::MatrixXd weights;      // d x C (LDA uses a single column)
    Eigen::VectorXd intercepts;   // C (LDA uses one threshold entry)
    Eigen::VectorXd feat_mean;    // training-fold standardization
    Eigen::VectorXd feat_scale;

    /// LDA: signed discriminant value per sample (score > 0 -> class 1).
    Eigen::VectorXd decision_scores(const Eigen::MatrixXd& X) const;
    /// Per-class probabilities (softmax for MLR, logistic of the
    /// discriminant for LDA). n x C.
    Eigen::MatrixXd class_probabilities(const Eigen::MatrixXd& X) const;
    Eigen::VectorXi predict(const Eigen::MatrixXd& X) const;
};

/// Binary LDA with a trace-scaled ridge on the pooled covariance.
/// `ridge` is relative: the added diagonal is ridge * mean(diag(S)).
ClassifierModel fit_lda(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, double ridge);

/// Multinomial logistic regression: L2-penalized mean negative
/// log-likelihood minimized by damped Newton with backtracking; converged
/// when the gradient norm drops below tol.
ClassifierModel fit_mlr(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, double l2,
                        int max_iter, double tol);

/// Loss and gradient of the MLR objective at `params` (layout: W column by
/// column, then intercepts). Exposed for gradient checking.
double mlr_loss_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, int class_count,
                         double l2, const Eigen::VectorXd& params, Eigen::VectorXd* grad);

struct EvalSettings {
    int n_folds = 10;
    double lda_ridge = 1e-6;
    double mlr_l2 = 1e-4;
    int mlr_max_iter = 200;
    double mlr_tol = 1e-6;
};

/// f1 of Eq-style objective: 1 - mean over folds of balanced accuracy of the
/// task-appropriate classifier on the masked features. Throws on empty mask.
double cv_error(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, int class_count,
                const std::vector<std::uint8_t>& mask, const FoldPlan& plan,
                const EvalSettings& settings);

/// Batch evaluation of many masks; the hot loop of the search. Results are
/// independent of ExecMode and thread count.
std::vector<double> cv_error_batch(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                   int class_count, const std::vector<std::vector<std::uint8_t>>& masks,
                                   const FoldPlan& plan, const EvalSettings& settings, ExecMode mode);

/// Mask -> f1 memo. Single-owner (one per niche worker); not thread safe.
class FitnessCache {
public:
    std::optional<double> lookup(const std::vector<std::uint8_t>& mask) const;
    void insert(const std::vector<std::uint8_t>& mask, double error);
    std::size_t size() const { return map_.size(); }

private:
    std::unordered_map<std::string, double> map_;
};

/// Task-appropriate classifier trained on all rows of X.
ClassifierModel fit_classifier(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, int class_count,
                               const EvalSettings& settings);

std::vector<int> to_label_vector(const Eigen::VectorXi& y);

}  // namespace mmfs
