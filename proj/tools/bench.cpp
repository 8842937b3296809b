// Compares the serial reference path of the data-parallel kernels against the
// OpenMP path: wall-clock speedup plus an exact-equality check of the results.

#include <chrono>
#include <cstdio>

#include "mmfs/data.hpp"
#include "mmfs/eval.hpp"

using namespace mmfs;

namespace {

template <typename F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
    const SyntheticSpec spec = SyntheticSpec::make(SyntheticTask::binary);
    const SyntheticDataset synth = generate_synthetic(spec, 1);
    const Eigen::MatrixXd X = concatenate_views(synth.data);
    const FoldPlan plan = make_fold_plan(synth.data.labels, 10, 1);

    Rng rng = make_rng(7);
    std::vector<std::vector<std::uint8_t>> masks(64);
    std::bernoulli_distribution coin(10.0 / X.cols());
    for (auto& mask : masks) {
        mask.assign(static_cast<std::size_t>(X.cols()), 0);
        for (auto& bit : mask) bit = coin(rng) ? 1 : 0;
        mask[std::uniform_int_distribution<std::size_t>(0, mask.size() - 1)(rng)] = 1;
    }

    std::vector<double> serial_err, omp_err;
    const double t_serial = timed([&] {
        serial_err = cv_error_batch(X, synth.data.labels, 2, masks, plan, EvalSettings{},
                                    ExecMode::serial);
    });
    const double t_omp = timed([&] {
        omp_err = cv_error_batch(X, synth.data.labels, 2, masks, plan, EvalSettings{},
                                 ExecMode::openmp);
    });
    const bool cv_match = serial_err == omp_err;
    std::printf("cv_error_batch   serial %.3fs  openmp %.3fs  speedup %.2fx  identical %s\n",
                t_serial, t_omp, t_serial / t_omp, cv_match ? "yes" : "NO");

    const std::int64_t n = 2'000'000;
    double serial_bayes = 0, omp_bayes = 0;
    const double tb_serial =
        timed([&] { serial_bayes = bayes_error_mc(spec, {0, 1}, n, 3, ExecMode::serial); });
    const double tb_omp =
        timed([&] { omp_bayes = bayes_error_mc(spec, {0, 1}, n, 3, ExecMode::openmp); });
    const bool bayes_match = serial_bayes == omp_bayes;
    std::printf("bayes_error_mc   serial %.3fs  openmp %.3fs  speedup %.2fx  identical %s\n",
                tb_serial, tb_omp, tb_serial / tb_omp, bayes_match ? "yes" : "NO");

    return cv_match && bayes_match ? 0 : 1;
}
