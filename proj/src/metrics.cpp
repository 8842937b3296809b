#include "mmfs/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mmfs {

double balanced_accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("balanced_accuracy: length mismatch");
    if (y_true.empty()) throw std::invalid_argument("balanced_accuracy: empty input");
    const int C = std::max(*std::max_element(y_true.begin(), y_true.end()),
                           *std::max_element(y_pred.begin(), y_pred.end())) +
                  1;
    std::vector<int> total(C, 0), correct(C, 0);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        ++total[y_true[i]];
        if (y_true[i] == y_pred[i]) ++correct[y_true[i]];
    }
    double sum = 0.0;
    for (int c = 0; c < C; ++c) {
        if (total[c] == 0)
            throw std::invalid_argument("balanced_accuracy: class " + std::to_string(c) + " is empty");
        sum += static_cast<double>(correct[c]) / total[c];
    }
    return sum / C;
}

double auc_binary(const std::vector<int>& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size()) throw std::invalid_argument("auc_binary: length mismatch");
    std::size_t n_pos = 0, n_neg = 0;
    for (int y : y_true) (y == 1 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("auc_binary: single-class input");

    // Mann-Whitney U via midranks.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * (static_cast<double>(i) + static_cast<double>(j - 1)) + 1.0;
        for (std::size_t t = i; t < j; ++t)
            if (y_true[order[t]] == 1) rank_sum_pos += midrank;
        i = j;
    }
    const double u = rank_sum_pos - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double auc_multiclass_ova(const std::vector<int>& y_true, const Eigen::MatrixXd& per_class_scores) {
    const int C = static_cast<int>(per_class_scores.cols());
    if (static_cast<Eigen::Index>(y_true.size()) != per_class_scores.rows())
        throw std::invalid_argument("auc_multiclass_ova: length mismatch");
    double weighted = 0.0;
    std::size_t total = y_true.size();
    for (int c = 0; c < C; ++c) {
        std::vector<int> ova(y_true.size());
        std::vector<double> scores(y_true.size());
        std::size_t n_c = 0;
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            ova[i] = y_true[i] == c ? 1 : 0;
            n_c += ova[i];
            scores[i] = per_class_scores(static_cast<Eigen::Index>(i), c);
        }
        if (n_c == 0)
            throw std::invalid_argument("auc_multiclass_ova: class " + std::to_string(c) + " missing");
        weighted += static_cast<double>(n_c) * auc_binary(ova, scores);
    }
    return weighted / static_cast<double>(total);
}

double feature_f1(const std::vector<std::uint8_t>& selected_mask,
                  const std::vector<std::uint8_t>& informative_mask) {
    if (selected_mask.size() != informative_mask.size())
        throw std::invalid_argument("feature_f1: length mismatch");
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < selected_mask.size(); ++i) {
        const bool sel = selected_mask[i] != 0;
        const bool inf = informative_mask[i] != 0;
        tp += sel && inf;
        fp += sel && !inf;
        fn += !sel && inf;
    }
    const double denom = tp + 0.5 * (fp + fn);
    return denom > 0.0 ? tp / denom : 0.0;
}

Eigen::MatrixXi confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 int class_count) {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(class_count, class_count);
    for (std::size_t i = 0; i < y_true.size(); ++i) m(y_true[i], y_pred[i]) += 1;
    return m;
}

std::string EvaluationReport::to_kv_text() const {
    std::ostringstream os;
    os << "balanced_accuracy = " << balanced_accuracy << "\n";
    if (sensitivity >= 0.0) os << "sensitivity = " << sensitivity << "\n";
    if (specificity >= 0.0) os << "specificity = " << specificity << "\n";
    os << "auc = " << auc << "\n";
    for (std::size_t c = 0; c < per_class_tpf.size(); ++c)
        os << "tpf_class_" << c << " = " << per_class_tpf[c] << "\n";
    for (std::size_t v = 0; v < feature_f1_per_view.size(); ++v)
        os << "feature_f1_view_" << v + 1 << " = " << feature_f1_per_view[v] << "\n";
    for (std::size_t v = 0; v < selected_counts_per_view.size(); ++v)
        os << "selected_view_" << v + 1 << " = " << selected_counts_per_view[v] << "\n";
    os << "confusion =";
    for (Eigen::Index r = 0; r < confusion.rows(); ++r)
        for (Eigen::Index c = 0; c < confusion.cols(); ++c) os << " " << confusion(r, c);
    os << "\n";
    return os.str();
}

std::string EvaluationReport::csv_header() const {
    std::ostringstream os;
    os << "balanced_accuracy,sensitivity,specificity,auc";
    for (std::size_t v = 0; v < feature_f1_per_view.size(); ++v) os << ",feature_f1_view" << v + 1;
    for (std::size_t v = 0; v < selected_counts_per_view.size(); ++v) os << ",selected_view" << v + 1;
    return os.str();
}

std::string EvaluationReport::csv_row() const {
    std::ostringstream os;
    os << balanced_accuracy << "," << sensitivity << "," << specificity << "," << auc;
    for (double f : feature_f1_per_view) os << "," << f;
    for (int s : selected_counts_per_view) os << "," << s;
    return os.str();
}

}  // namespace mmfs
