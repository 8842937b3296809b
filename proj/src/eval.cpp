#include "mmfs/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mmfs/metrics.hpp"

namespace mmfs {

namespace {

std::atomic_int g_thread_cap{0};

struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;

    static Standardizer fit(const Eigen::MatrixXd& X) {
        Standardizer s;
        s.mean = X.colwise().mean();
        Eigen::MatrixXd centered = X.rowwise() - s.mean.transpose();
        s.scale = (centered.array().square().colwise().sum() / std::max<double>(1.0, X.rows() - 1))
                      .sqrt();
        for (Eigen::Index j = 0; j < s.scale.size(); ++j)
            if (s.scale(j) <= 0.0) s.scale(j) = 1.0;
        return s;
    }
    Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const {
        return (X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
    }
};

}  // namespace

void set_thread_cap(int threads) { g_thread_cap.store(threads); }
int thread_cap() { return g_thread_cap.load(); }

FoldPlan make_fold_plan(const Eigen::VectorXi& labels, int n_folds, std::uint64_t seed) {
    if (n_folds < 2) throw std::invalid_argument("make_fold_plan: n_folds < 2");
    const int C = labels.size() > 0 ? labels.maxCoeff() + 1 : 0;
    std::vector<std::vector<int>> by_class(C);
    for (Eigen::Index i = 0; i < labels.size(); ++i) by_class[labels(i)].push_back(static_cast<int>(i));

    FoldPlan plan;
    plan.n_folds = n_folds;
    plan.fold_of.assign(labels.size(), -1);
    Rng rng = make_rng(derive_seed(seed, 0xf01d));
    for (int c = 0; c < C; ++c) {
        if (static_cast<int>(by_class[c].size()) < n_folds)
            throw std::invalid_argument("make_fold_plan: class " + std::to_string(c) + " has " +
                                        std::to_string(by_class[c].size()) + " members, fewer than " +
                                        std::to_string(n_folds) + " folds");
        std::shuffle(by_class[c].begin(), by_class[c].end(), rng);
        for (std::size_t i = 0; i < by_class[c].size(); ++i)
            plan.fold_of[by_class[c][i]] = static_cast<int>(i) % n_folds;
    }
    return plan;
}

Eigen::VectorXd ClassifierModel::decision_scores(const Eigen::MatrixXd& X) const {
    Eigen::MatrixXd Xs = (X.rowwise() - feat_mean.transpose()).array().rowwise() /
                         feat_scale.transpose().array();
    if (kind == ClassifierKind::lda)
        return (Xs * weights.col(0)).array() + intercepts(0);
    // MLR: score of the last class against the rest as a generic scalar score.
    Eigen::MatrixXd probs = class_probabilities(X);
    return probs.col(probs.cols() - 1);
}

Eigen::MatrixXd ClassifierModel::class_probabilities(const Eigen::MatrixXd& X) const {
    Eigen::MatrixXd Xs = (X.rowwise() - feat_mean.transpose()).array().rowwise() /
                         feat_scale.transpose().array();
    if (kind == ClassifierKind::lda) {
        Eigen::VectorXd score = (Xs * weights.col(0)).array() + intercepts(0);
        Eigen::MatrixXd probs(X.rows(), 2);
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const double p1 = 1.0 / (1.0 + std::exp(-score(i)));
            probs(i, 0) = 1.0 - p1;
            probs(i, 1) = p1;
        }
        return probs;
    }
    Eigen::MatrixXd logits = (Xs * weights).rowwise() + intercepts.transpose();
    Eigen::MatrixXd probs(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const double m = logits.row(i).maxCoeff();
        Eigen::ArrayXd e = (logits.row(i).array() - m).exp();
        probs.row(i) = (e / e.sum()).matrix();
    }
    return probs;
}

Eigen::VectorXi ClassifierModel::predict(const Eigen::MatrixXd& X) const {
    Eigen::VectorXi out(X.rows());
    if (kind == ClassifierKind::lda) {
        Eigen::VectorXd score = decision_scores(X);
        for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) = score(i) > 0.0 ? 1 : 0;
        return out;
    }
    Eigen::MatrixXd probs = class_probabilities(X);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        Eigen::Index best;
        probs.row(i).maxCoeff(&best);
        out(i) = static_cast<int>(best);
    }
    return out;
}

ClassifierModel fit_lda(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, double ridge) {
    if (X.cols() < 1) throw std::invalid_argument("fit_lda: no features");
    const Eigen::Index n = X.rows();
    int n0 = 0, n1 = 0;
    for (Eigen::Index i = 0; i < n; ++i) (y(i) == 1 ? n1 : n0)++;
    if (n0 == 0 || n1 == 0) throw std::invalid_argument("fit_lda: single-class input");

    ClassifierModel model;
    model.kind = ClassifierKind::lda;
    model.class_count = 2;
    Standardizer st = Standardizer::fit(X);
    model.feat_mean = st.mean;
    model.feat_scale = st.scale;
    Eigen::MatrixXd Xs = st.apply(X);

    const Eigen::Index d = Xs.cols();
    Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(d), mu1 = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < n; ++i) (y(i) == 1 ? mu1 : mu0) += Xs.row(i).transpose();
    mu0 /= n0;
    mu1 /= n1;

    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd dev = Xs.row(i).transpose() - (y(i) == 1 ? mu1 : mu0);
        S.noalias() += dev * dev.transpose();
    }
    S /= std::max<double>(1.0, static_cast<double>(n - 2));
    double ridge_add = ridge * S.trace() / static_cast<double>(d);
    if (ridge_add <= 0.0) ridge_add = ridge > 0.0 ? ridge : 1e-12;
    S.diagonal().array() += ridge_add;

    Eigen::VectorXd w = S.ldlt().solve(mu1 - mu0);
    model.weights = w;
    model.intercepts = Eigen::VectorXd(1);
    model.intercepts(0) = -w.dot(0.5 * (mu0 + mu1)) +
                          std::log(static_cast<double>(n1) / static_cast<double>(n0));
    return model;
}

// Parameter layout: W stored column by column (d*C entries) then the C
// intercepts. Loss is mean negative log-likelihood plus 0.5*l2*||W||^2
// (intercepts unpenalized).
double mlr_loss_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, int class_count,
                         double l2, const Eigen::VectorXd& params, Eigen::VectorXd* grad) {
    const Eigen::Index n = X.rows();
    const Eigen::Index d = X.cols();
    if (!X.allFinite()) throw std::invalid_argument("mlr: non-finite feature values");
    Eigen::Map<const Eigen::MatrixXd> W(params.data(), d, class_count);
    Eigen::Map<const Eigen::VectorXd> b(params.data() + d * class_count, class_count);

    Eigen::MatrixXd logits = (X * W).rowwise() + b.transpose();
    double loss = 0.0;
    Eigen::MatrixXd probs(n, class_count);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m = logits.row(i).maxCoeff();
        Eigen::ArrayXd e = (logits.row(i).array() - m).exp();
        const double z = e.sum();
        probs.row(i) = (e / z).matrix();
        loss -= logits(i, y(i)) - m - std::log(z);
    }
    loss /= static_cast<double>(n);
    loss += 0.5 * l2 * W.squaredNorm();

    if (grad) {
        Eigen::MatrixXd resid = probs;  // probs - one_hot(y)
        for (Eigen::Index i = 0; i < n; ++i) resid(i, y(i)) -= 1.0;
        grad->resize(params.size());
        Eigen::Map<Eigen::MatrixXd> gW(grad->data(), d, class_count);
        Eigen::Map<Eigen::VectorXd> gb(grad->data() + d * class_count, class_count);
        gW.noalias() = X.transpose() * resid / static_cast<double>(n);
        gW += l2 * W;
        gb = resid.colwise().sum().transpose() / static_cast<double>(n);
    }
    return loss;
}

namespace {

// Newton with backtracking on the standardized design. Falls back to
// gradient steps when the parameter count makes the Hessian impractical.
Eigen::VectorXd optimize_mlr(const Eigen::MatrixXd& Xs, const Eigen::VectorXi& y, int C, double l2,
                             int max_iter, double tol) {
    const Eigen::Index n = Xs.rows();
    const Eigen::Index d = Xs.cols();
    const Eigen::Index p = d * C + C;
    Eigen::VectorXd params = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd grad;
    double loss = mlr_loss_gradient(Xs, y, C, l2, params, &grad);
    const bool use_newton = p <= 400;

    Eigen::MatrixXd Xt1(n, d + 1);  // [X, 1] for Hessian blocks
    if (use_newton) {
        Xt1.leftCols(d) = Xs;
        Xt1.col(d).setOnes();
    }

    for (int iter = 0; iter < max_iter; ++iter) {
        if (grad.norm() < tol) break;
        Eigen::VectorXd step;
        if (use_newton) {
            // Hessian over [W(:,c); b_c] blocks, remapped to the flat layout.
            Eigen::MatrixXd probs(n, C);
            {
                Eigen::Map<const Eigen::MatrixXd> W(params.data(), d, C);
                Eigen::Map<const Eigen::VectorXd> b(params.data() + d * C, C);
                Eigen::MatrixXd logits = (Xs * W).rowwise() + b.transpose();
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double m = logits.row(i).maxCoeff();
                    Eigen::ArrayXd e = (logits.row(i).array() - m).exp();
                    probs.row(i) = (e / e.sum()).matrix();
                }
            }
            Eigen::MatrixXd H = Eigen::MatrixXd::Zero(p, p);
            const Eigen::Index db = d + 1;
            Eigen::MatrixXd block(db, db);
            for (int c1 = 0; c1 < C; ++c1) {
                for (int c2 = c1; c2 < C; ++c2) {
                    Eigen::ArrayXd w = probs.col(c1).array() *
                                       ((c1 == c2 ? 1.0 : 0.0) - probs.col(c2).array());
                    block.noalias() = Xt1.transpose() * w.matrix().asDiagonal() * Xt1;
                    block /= static_cast<double>(n);
                    auto scatter = [&](int ca, int cb, const Eigen::MatrixXd& blk) {
                        H.block(ca * d, cb * d, d, d) = blk.topLeftCorner(d, d);
                        H.block(ca * d, d * C + cb, d, 1) = blk.topRightCorner(d, 1);
                        H.block(d * C + ca, cb * d, 1, d) = blk.bottomLeftCorner(1, d);
                        H(d * C + ca, d * C + cb) = blk(d, d);
                    };
                    scatter(c1, c2, block);
                    if (c1 != c2) scatter(c2, c1, block.transpose());
                }
            }
            for (Eigen::Index j = 0; j < d * C; ++j) H(j, j) += l2;
            H.diagonal().array() += 1e-10;
            step = H.ldlt().solve(-grad);
            if (!step.allFinite() || grad.dot(step) >= 0.0) step = -grad;
        } else {
            step = -grad;
        }

        // Backtracking line search keeps the loss non-increasing.
        const double slope = grad.dot(step);
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            Eigen::VectorXd trial = params + t * step;
            Eigen::VectorXd trial_grad;
            const double trial_loss = mlr_loss_gradient(Xs, y, C, l2, trial, &trial_grad);
            if (trial_loss <= loss + 1e-4 * t * slope) {
                params = std::move(trial);
                grad = std::move(trial_grad);
                loss = trial_loss;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // no descent possible at machine precision
    }
    return params;
}

}  // namespace

ClassifierModel fit_mlr(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, double l2,
                        int max_iter, double tol) {
    const int C = y.size() > 0 ? y.maxCoeff() + 1 : 0;
    if (C < 2) throw std::invalid_argument("fit_mlr: fewer than two classes");
    if (!X.allFinite()) throw std::invalid_argument("fit_mlr: non-finite feature values");

    ClassifierModel model;
    model.kind = ClassifierKind::mlr;
    model.class_count = C;
    Standardizer st = Standardizer::fit(X);
    model.feat_mean = st.mean;
    model.feat_scale = st.scale;
    Eigen::MatrixXd Xs = st.apply(X);

    const Eigen::Index d = Xs.cols();
    Eigen::VectorXd params = optimize_mlr(Xs, y, C, l2, max_iter, tol);
    model.weights = Eigen::Map<const Eigen::MatrixXd>(params.data(), d, C);
    model.intercepts = params.tail(C);
    return model;
}

ClassifierModel fit_classifier(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, int class_count,
                               const EvalSettings& settings) {
    if (class_count == 2) return fit_lda(X, y, settings.lda_ridge);
    return fit_mlr(X, y, settings.mlr_l2, settings.mlr_max_iter, settings.mlr_tol);
}

std::vector<int> to_label_vector(const Eigen::VectorXi& y) {
    return std::vector<int>(y.data(), y.data() + y.size());
}

double cv_error(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, int class_count,
                const std::vector<std::uint8_t>& mask, const FoldPlan& plan,
                const EvalSettings& settings) {
    if (static_cast<Eigen::Index>(mask.size()) != X.cols())
        throw std::invalid_argument("cv_error: mask/feature dimension mismatch");
    std::vector<Eigen::Index> cols;
    for (std::size_t j = 0; j < mask.size(); ++j)
        if (mask[j]) cols.push_back(static_cast<Eigen::Index>(j));
    if (cols.empty()) throw std::invalid_argument("cv_error: empty mask violates the >=1-feature constraint");

    Eigen::MatrixXd Xm(X.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) Xm.col(j) = X.col(cols[j]);

    double acc_sum = 0.0;
    for (int fold = 0; fold < plan.n_folds; ++fold) {
        std::vector<Eigen::Index> train_idx, test_idx;
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            (plan.fold_of[i] == fold ? test_idx : train_idx).push_back(i);

        Eigen::MatrixXd Xtr(train_idx.size(), Xm.cols()), Xte(test_idx.size(), Xm.cols());
        Eigen::VectorXi ytr(train_idx.size());
        std::vector<int> yte(test_idx.size());
        for (std::size_t i = 0; i < train_idx.size(); ++i) {
            Xtr.row(i) = Xm.row(train_idx[i]);
            ytr(i) = y(train_idx[i]);
        }
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            Xte.row(i) = Xm.row(test_idx[i]);
            yte[i] = y(test_idx[i]);
        }

        ClassifierModel model = fit_classifier(Xtr, ytr, class_count, settings);
        Eigen::VectorXi pred = model.predict(Xte);
        acc_sum += balanced_accuracy(yte, to_label_vector(pred));
    }
    return 1.0 - acc_sum / plan.n_folds;
}

std::vector<double> cv_error_batch(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                   int class_count, const std::vector<std::vector<std::uint8_t>>& masks,
                                   const FoldPlan& plan, const EvalSettings& settings, ExecMode mode) {
    std::vector<double> out(masks.size());
    parallel_for(masks.size(), mode,
                 [&](std::size_t i) { out[i] = cv_error(X, y, class_count, masks[i], plan, settings); });
    return out;
}

std::optional<double> FitnessCache::lookup(const std::vector<std::uint8_t>& mask) const {
    const std::string key(mask.begin(), mask.end());
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void FitnessCache::insert(const std::vector<std::uint8_t>& mask, double error) {
    map_.emplace(std::string(mask.begin(), mask.end()), error);
}

}  // namespace mmfs
