#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace mmfs {

/// Macro-averaged per-class recall. Throws if a true class is empty.
double balanced_accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred);

/// Rank-statistic AUC (probability a random positive outscores a random
/// negative, ties counted half). Positive class = 1.
double auc_binary(const std::vector<int>& y_true, const std::vector<double>& scores);

/// Class-size-weighted mean of per-class one-vs-rest AUCs.
/// per_class_scores is n x C.
double auc_multiclass_ova(const std::vector<int>& y_true, const Eigen::MatrixXd& per_class_scores);

/// Feature-recovery F1 = TP / (TP + (FP + FN) / 2) over feature indices.
double feature_f1(const std::vector<std::uint8_t>& selected_mask,
                  const std::vector<std::uint8_t>& informative_mask);

/// C x C count matrix; rows are true classes.
Eigen::MatrixXi confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 int class_count);

struct EvaluationReport {
    double balanced_accuracy = 0.0;
    double sensitivity = -1.0;   // binary only, -1 when not applicable
    double specificity = -1.0;
    double auc = 0.0;
    std::vector<double> per_class_tpf;
    Eigen::MatrixXi confusion;
    std::vector<double> feature_f1_per_view;   // empty when ground truth unknown
    std::vector<int> selected_counts_per_view;

    std::string to_kv_text() const;
    std::string csv_header() const;
    std::string csv_row() const;
};

}  // namespace mmfs
