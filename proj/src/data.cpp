#include "mmfs/data.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mmfs/csv.hpp"

namespace mmfs {

std::vector<int> MultiViewDataset::view_dims() const {
    std::vector<int> dims;
    dims.reserve(views.size());
    for (const auto& v : views) dims.push_back(static_cast<int>(v.cols()));
    return dims;
}

int MultiViewDataset::total_features() const {
    int k = 0;
    for (const auto& v : views) k += static_cast<int>(v.cols());
    return k;
}

void MultiViewDataset::validate() const {
    for (const auto& v : views)
        if (v.rows() != labels.size())
            throw std::invalid_argument("MultiViewDataset: views disagree on sample count");
    for (Eigen::Index i = 0; i < labels.size(); ++i)
        if (labels(i) < 0 || labels(i) >= class_count)
            throw std::invalid_argument("MultiViewDataset: label out of range");
}

Eigen::MatrixXd concatenate_views(const MultiViewDataset& dataset) {
    Eigen::MatrixXd X(dataset.samples(), dataset.total_features());
    Eigen::Index offset = 0;
    for (const auto& v : dataset.views) {
        X.middleCols(offset, v.cols()) = v;
        offset += v.cols();
    }
    return X;
}

std::vector<std::uint8_t> concatenate_masks(const std::vector<std::vector<std::uint8_t>>& per_view) {
    std::vector<std::uint8_t> out;
    for (const auto& m : per_view) out.insert(out.end(), m.begin(), m.end());
    return out;
}

std::vector<std::vector<std::uint8_t>> split_mask(const MultiViewDataset& dataset,
                                                  const std::vector<std::uint8_t>& global_mask) {
    if (static_cast<int>(global_mask.size()) != dataset.total_features())
        throw std::invalid_argument("split_mask: mask length mismatch");
    std::vector<std::vector<std::uint8_t>> out;
    std::size_t offset = 0;
    for (const auto& v : dataset.views) {
        out.emplace_back(global_mask.begin() + offset, global_mask.begin() + offset + v.cols());
        offset += v.cols();
    }
    return out;
}

int SyntheticSpec::informative_dim(int view) const {
    int d = 0;
    for (const auto& block : informative_blocks.at(view)) d += static_cast<int>(block.dim());
    return d;
}

void SyntheticSpec::validate() const {
    if (view_dims.size() != 5 || noise_views.size() != 3)
        throw std::invalid_argument("SyntheticSpec: expected 5 views with 3 noise views");
    for (const auto& view_blocks : informative_blocks) {
        for (const auto& block : view_blocks) {
            if (block.class_means.size() != static_cast<std::size_t>(class_count()))
                throw std::invalid_argument("SyntheticSpec: mean count != class count");
            for (const auto& mu : block.class_means)
                if (mu.size() != block.dim())
                    throw std::invalid_argument("SyntheticSpec: mean/covariance dimension mismatch");
            if (!block.cov.isApprox(block.cov.transpose(), 1e-12))
                throw std::invalid_argument("SyntheticSpec: covariance not symmetric");
            Eigen::LLT<Eigen::MatrixXd> llt(block.cov);
            if (llt.info() != Eigen::Success)
                throw std::invalid_argument("SyntheticSpec: covariance not positive definite");
        }
    }
    for (int v = 0; v < 2; ++v)
        if (informative_dim(v) > view_dims[v])
            throw std::invalid_argument("SyntheticSpec: informative block exceeds view dimension");
}

SyntheticSpec SyntheticSpec::make(SyntheticTask task) {
    SyntheticSpec spec;
    spec.task = task;
    const int C = spec.class_count();

    Eigen::MatrixXd nested_cov(3, 3);
    nested_cov << 1.05, 0.48, 0.95,
                  0.48, 1.00, 0.20,
                  0.95, 0.20, 1.05;

    const auto class_scale = [&](int c) {  // mu, -mu, 3mu, 5mu
        static const double scale[4] = {1.0, -1.0, 3.0, 5.0};
        return scale[c];
    };

    // View A: three independent features plus a correlated triple.
    GaussianBlock a_indep;
    a_indep.cov = Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXd mu_a1(3);
    mu_a1 << 0.635, 0.635, 0.635;
    GaussianBlock a_nested;
    a_nested.cov = nested_cov;
    Eigen::VectorXd mu_a2(3);
    mu_a2 << 0.5, 0.4, 0.0;
    for (int c = 0; c < C; ++c) {
        a_indep.class_means.push_back(class_scale(c) * mu_a1);
        a_nested.class_means.push_back(class_scale(c) * mu_a2);
    }

    // View B: seven features with decreasing discriminatory ability.
    Eigen::VectorXd mu_b(7);
    mu_b << 0.636, 0.546, 0.455, 0.364, 0.273, 0.182, 0.091;
    std::vector<GaussianBlock> view_b;
    if (task == SyntheticTask::binary) {
        GaussianBlock b;
        b.cov = Eigen::MatrixXd::Identity(7, 7);
        for (int c = 0; c < C; ++c) b.class_means.push_back(class_scale(c) * mu_b);
        view_b.push_back(std::move(b));
    } else {
        GaussianBlock b1;  // features 1-4 independent
        b1.cov = Eigen::MatrixXd::Identity(4, 4);
        GaussianBlock b2;  // features 5-7 share the correlated block
        b2.cov = nested_cov;
        for (int c = 0; c < C; ++c) {
            b1.class_means.push_back(class_scale(c) * mu_b.head(4));
            b2.class_means.push_back(class_scale(c) * mu_b.tail(3));
        }
        view_b.push_back(std::move(b1));
        view_b.push_back(std::move(b2));
    }

    spec.informative_blocks = {{a_indep, a_nested}, std::move(view_b)};
    spec.validate();
    return spec;
}

namespace {

double draw_noise(NoiseKind kind, Rng& rng) {
    switch (kind) {
        case NoiseKind::gaussian: return std::normal_distribution<double>(0.0, 1.0)(rng);
        case NoiseKind::uniform01: return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        case NoiseKind::chi_square1: return std::chi_squared_distribution<double>(1.0)(rng);
    }
    return 0.0;
}

NoiseKind pad_noise_kind(const SyntheticSpec& spec, int view) {
    return view < 2 ? NoiseKind::gaussian : spec.noise_views[view - 2];
}

struct BlockSampler {
    const GaussianBlock* block;
    Eigen::MatrixXd chol;  // lower-triangular factor

    Eigen::VectorXd draw(int label, Rng& rng) const {
        Eigen::VectorXd z(block->dim());
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = gauss(rng);
        return block->class_means[label] + chol * z;
    }
};

std::vector<BlockSampler> make_samplers(const std::vector<GaussianBlock>& blocks) {
    std::vector<BlockSampler> out;
    for (const auto& block : blocks)
        out.push_back({&block, Eigen::LLT<Eigen::MatrixXd>(block.cov).matrixL()});
    return out;
}

}  // namespace

SyntheticDataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    spec.validate();
    const int C = spec.class_count();
    const Eigen::Index e = static_cast<Eigen::Index>(C) * spec.samples_per_class;

    SyntheticDataset out;
    out.spec = spec;
    out.data.class_count = C;
    out.data.labels.resize(e);
    for (Eigen::Index i = 0; i < e; ++i) out.data.labels(i) = static_cast<int>(i / spec.samples_per_class);
    for (Eigen::Index i = 0; i < e; ++i) out.data.sample_ids.push_back("s" + std::to_string(i));

    for (int v = 0; v < 5; ++v) {
        const int k_v = spec.view_dims[v];
        const int inf_dim = v < 2 ? spec.informative_dim(v) : 0;
        Rng rng = make_rng(derive_seed(seed, 0xda7aULL, v));
        Eigen::MatrixXd raw(e, k_v);

        if (v < 2) {
            const auto samplers = make_samplers(spec.informative_blocks[v]);
            for (Eigen::Index i = 0; i < e; ++i) {
                Eigen::Index col = 0;
                for (const auto& sampler : samplers) {
                    raw.row(i).segment(col, sampler.block->dim()) =
                        sampler.draw(out.data.labels(i), rng).transpose();
                    col += sampler.block->dim();
                }
            }
        }
        const NoiseKind pad = pad_noise_kind(spec, v);
        for (Eigen::Index i = 0; i < e; ++i)
            for (int j = inf_dim; j < k_v; ++j) raw(i, j) = draw_noise(pad, rng);

        // Random column order so the selector cannot learn feature positions.
        std::vector<int> order(k_v);
        std::iota(order.begin(), order.end(), 0);
        Rng perm_rng = make_rng(derive_seed(seed, 0x9e24ULL, v));
        std::shuffle(order.begin(), order.end(), perm_rng);

        Eigen::MatrixXd view(e, k_v);
        std::vector<std::uint8_t> mask(k_v, 0);
        std::vector<std::string> names(k_v);
        for (int j = 0; j < k_v; ++j) {
            view.col(j) = raw.col(order[j]);
            mask[j] = order[j] < inf_dim ? 1 : 0;
            names[j] = "v" + std::to_string(v + 1) + "_f" + std::to_string(j);
        }
        out.data.views.push_back(std::move(view));
        out.data.view_names.push_back("View" + std::to_string(v + 1));
        out.data.feature_names.push_back(std::move(names));
        out.data.informative_masks.push_back(std::move(mask));
        out.permutation.push_back(std::move(order));
    }
    out.data.validate();
    return out;
}

double bayes_error_mc(const SyntheticSpec& spec, const std::vector<int>& which_views,
                      std::int64_t n_samples, std::uint64_t seed, ExecMode mode) {
    if (which_views.empty()) throw std::invalid_argument("bayes_error_mc: empty view subset");
    spec.validate();
    const int C = spec.class_count();

    struct ScoredBlock {
        BlockSampler sampler;
        Eigen::MatrixXd cov_inv;
    };
    std::vector<ScoredBlock> blocks;
    for (int v : which_views) {
        if (v < 0 || v > 1) throw std::invalid_argument("bayes_error_mc: views must be 0 (A) or 1 (B)");
        for (const auto& block : spec.informative_blocks[v])
            blocks.push_back({{&block, Eigen::LLT<Eigen::MatrixXd>(block.cov).matrixL()},
                              block.cov.inverse()});
    }

    const std::int64_t chunk = 1 << 14;
    const std::int64_t n_chunks = (n_samples + chunk - 1) / chunk;
    std::vector<std::int64_t> errors(n_chunks, 0);

    parallel_for(static_cast<std::size_t>(n_chunks), mode, [&](std::size_t ci) {
        Rng rng = make_rng(derive_seed(seed, 0xbae5ULL, ci));
        std::uniform_int_distribution<int> label_dist(0, C - 1);
        const std::int64_t count =
            std::min<std::int64_t>(chunk, n_samples - static_cast<std::int64_t>(ci) * chunk);
        std::int64_t local_errors = 0;
        std::vector<double> log_score(C);
        for (std::int64_t s = 0; s < count; ++s) {
            const int label = label_dist(rng);
            std::fill(log_score.begin(), log_score.end(), 0.0);
            for (const auto& b : blocks) {
                const Eigen::VectorXd x = b.sampler.draw(label, rng);
                for (int c = 0; c < C; ++c) {
                    const Eigen::VectorXd dev = x - b.sampler.block->class_means[c];
                    log_score[c] -= 0.5 * dev.dot(b.cov_inv * dev);
                }
            }
            const int decided = static_cast<int>(
                std::max_element(log_score.begin(), log_score.end()) - log_score.begin());
            local_errors += decided != label;
        }
        errors[ci] = local_errors;
    });
    const std::int64_t total = std::accumulate(errors.begin(), errors.end(), std::int64_t{0});
    return static_cast<double>(total) / static_cast<double>(n_samples);
}

double conditional_pmc(const ClassifierModel& model, const std::vector<std::uint8_t>& global_mask,
                       const SyntheticDataset& dataset, std::int64_t n_samples, std::uint64_t seed,
                       ExecMode mode) {
    const auto& spec = dataset.spec;
    const int C = spec.class_count();
    if (static_cast<int>(global_mask.size()) != dataset.data.total_features())
        throw std::invalid_argument("conditional_pmc: mask length mismatch");

    // Describe each selected column: informative coordinate or an iid noise draw.
    struct Column {
        int view;
        int informative_coord;  // -1 for noise
        NoiseKind noise;
    };
    std::vector<Column> columns;
    std::size_t offset = 0;
    for (int v = 0; v < dataset.data.view_count(); ++v) {
        const int k_v = static_cast<int>(dataset.data.views[v].cols());
        const int inf_dim = v < 2 ? spec.informative_dim(v) : 0;
        for (int j = 0; j < k_v; ++j) {
            if (!global_mask[offset + j]) continue;
            const int src = dataset.permutation[v][j];
            columns.push_back({v, src < inf_dim ? src : -1, pad_noise_kind(spec, v)});
        }
        offset += k_v;
    }
    if (static_cast<Eigen::Index>(columns.size()) != model.feat_mean.size())
        throw std::invalid_argument("conditional_pmc: mask/model dimension mismatch");

    const auto samplers_a = make_samplers(spec.informative_blocks[0]);
    const auto samplers_b = make_samplers(spec.informative_blocks[1]);

    const std::int64_t chunk = 1 << 13;
    const std::int64_t n_chunks = (n_samples + chunk - 1) / chunk;
    std::vector<std::int64_t> errors(n_chunks, 0);

    parallel_for(static_cast<std::size_t>(n_chunks), mode, [&](std::size_t ci) {
        Rng rng = make_rng(derive_seed(seed, 0xc0dcULL, ci));
        std::uniform_int_distribution<int> label_dist(0, C - 1);
        const std::int64_t count =
            std::min<std::int64_t>(chunk, n_samples - static_cast<std::int64_t>(ci) * chunk);
        Eigen::MatrixXd X(count, static_cast<Eigen::Index>(columns.size()));
        Eigen::VectorXi y(count);
        Eigen::VectorXd inf_a(spec.informative_dim(0)), inf_b(spec.informative_dim(1));
        for (std::int64_t s = 0; s < count; ++s) {
            const int label = label_dist(rng);
            y(s) = label;
            Eigen::Index pos = 0;
            for (const auto& sampler : samplers_a) {
                inf_a.segment(pos, sampler.block->dim()) = sampler.draw(label, rng);
                pos += sampler.block->dim();
            }
            pos = 0;
            for (const auto& sampler : samplers_b) {
                inf_b.segment(pos, sampler.block->dim()) = sampler.draw(label, rng);
                pos += sampler.block->dim();
            }
            for (std::size_t c = 0; c < columns.size(); ++c) {
                const auto& col = columns[c];
                if (col.informative_coord >= 0)
                    X(s, static_cast<Eigen::Index>(c)) =
                        col.view == 0 ? inf_a(col.informative_coord) : inf_b(col.informative_coord);
                else
                    X(s, static_cast<Eigen::Index>(c)) = draw_noise(col.noise, rng);
            }
        }
        const Eigen::VectorXi pred = model.predict(X);
        std::int64_t local_errors = 0;
        for (std::int64_t s = 0; s < count; ++s) local_errors += pred(s) != y(s);
        errors[ci] = local_errors;
    });
    const std::int64_t total = std::accumulate(errors.begin(), errors.end(), std::int64_t{0});
    return static_cast<double>(total) / static_cast<double>(n_samples);
}

namespace {

std::string kv_get(const std::vector<std::pair<std::string, std::string>>& entries,
                   const std::string& key, const std::string& fallback = "") {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    if (fallback.empty()) throw std::runtime_error("manifest: missing key '" + key + "'");
    return fallback;
}

}  // namespace

MultiViewDataset load_multiview_csv(const std::filesystem::path& manifest_path) {
    const auto entries = read_kv_file(manifest_path);
    const auto base = manifest_path.parent_path();
    const std::string id_column = kv_get(entries, "id_column", "id");
    const std::string label_column = kv_get(entries, "label_column", "label");
    const std::filesystem::path labels_path = base / kv_get(entries, "labels");

    const CsvTable labels_csv = read_csv(labels_path);
    auto col_index = [&](const CsvTable& t, const std::string& name, const std::filesystem::path& p) {
        const auto it = std::find(t.header.begin(), t.header.end(), name);
        if (it == t.header.end())
            throw std::runtime_error(p.string() + ": missing column '" + name + "'");
        return static_cast<std::size_t>(it - t.header.begin());
    };
    const std::size_t id_idx = col_index(labels_csv, id_column, labels_path);
    const std::size_t label_idx = col_index(labels_csv, label_column, labels_path);

    MultiViewDataset dataset;
    std::map<std::string, Eigen::Index> id_to_row;
    std::vector<int> raw_labels;
    for (std::size_t r = 0; r < labels_csv.rows.size(); ++r) {
        const std::string& id = labels_csv.rows[r][id_idx];
        const std::string& label_cell = labels_csv.rows[r][label_idx];
        if (label_cell.empty())
            throw std::runtime_error(labels_path.string() + ":" + std::to_string(r + 2) +
                                     ": empty label for id '" + id + "'");
        if (!id_to_row.emplace(id, static_cast<Eigen::Index>(r)).second)
            throw std::runtime_error(labels_path.string() + ": duplicate id '" + id + "'");
        const double v = parse_numeric(label_cell, labels_path, r + 2, label_column);
        if (v != std::floor(v))
            throw std::runtime_error(labels_path.string() + ": non-integer label '" + label_cell + "'");
        raw_labels.push_back(static_cast<int>(v));
        dataset.sample_ids.push_back(id);
    }
    if (raw_labels.empty()) throw std::runtime_error(labels_path.string() + ": no samples");

    // Remap labels to a dense 0..C-1 range.
    std::set<int> distinct(raw_labels.begin(), raw_labels.end());
    std::map<int, int> remap;
    int next = 0;
    for (int v : distinct) remap[v] = next++;
    dataset.class_count = next;
    dataset.labels.resize(static_cast<Eigen::Index>(raw_labels.size()));
    for (std::size_t i = 0; i < raw_labels.size(); ++i) dataset.labels(i) = remap[raw_labels[i]];

    for (const auto& [key, value] : entries) {
        if (key.rfind("view.", 0) != 0) continue;
        const std::string view_name = key.substr(5);
        const std::filesystem::path view_path = base / value;
        const CsvTable view_csv = read_csv(view_path);
        const std::size_t vid_idx = col_index(view_csv, id_column, view_path);
        if (view_csv.rows.size() != raw_labels.size())
            throw std::runtime_error(view_path.string() + ": " + std::to_string(view_csv.rows.size()) +
                                     " rows but " + std::to_string(raw_labels.size()) + " labeled samples");

        std::vector<std::string> names;
        std::vector<std::size_t> feat_cols;
        for (std::size_t c = 0; c < view_csv.header.size(); ++c) {
            if (c == vid_idx) continue;
            names.push_back(view_csv.header[c]);
            feat_cols.push_back(c);
        }
        Eigen::MatrixXd view(static_cast<Eigen::Index>(raw_labels.size()),
                             static_cast<Eigen::Index>(feat_cols.size()));
        std::vector<bool> seen(raw_labels.size(), false);
        for (std::size_t r = 0; r < view_csv.rows.size(); ++r) {
            const std::string& id = view_csv.rows[r][vid_idx];
            const auto it = id_to_row.find(id);
            if (it == id_to_row.end())
                throw std::runtime_error(view_path.string() + ":" + std::to_string(r + 2) +
                                         ": id '" + id + "' not present in labels file");
            seen[static_cast<std::size_t>(it->second)] = true;
            for (std::size_t c = 0; c < feat_cols.size(); ++c)
                view(it->second, static_cast<Eigen::Index>(c)) = parse_numeric(
                    view_csv.rows[r][feat_cols[c]], view_path, r + 2, view_csv.header[feat_cols[c]]);
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (!seen[i])
                throw std::runtime_error(view_path.string() + ": id '" + dataset.sample_ids[i] +
                                         "' missing from this view");
        dataset.views.push_back(std::move(view));
        dataset.view_names.push_back(view_name);
        dataset.feature_names.push_back(std::move(names));
    }
    if (dataset.views.empty()) throw std::runtime_error(manifest_path.string() + ": no views listed");
    dataset.validate();
    return dataset;
}

std::filesystem::path save_multiview_csv(const MultiViewDataset& dataset,
                                         const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::pair<std::string, std::string>> manifest;
    manifest.emplace_back("id_column", "id");
    manifest.emplace_back("label_column", "label");
    manifest.emplace_back("labels", "labels.csv");

    CsvTable labels{{"id", "label"}, {}};
    for (Eigen::Index i = 0; i < dataset.samples(); ++i)
        labels.rows.push_back({dataset.sample_ids.empty() ? "s" + std::to_string(i)
                                                          : dataset.sample_ids[i],
                               std::to_string(dataset.labels(i))});
    write_csv(dir / "labels.csv", labels);

    for (int v = 0; v < dataset.view_count(); ++v) {
        const std::string file = dataset.view_names[v] + ".csv";
        CsvTable t;
        t.header.push_back("id");
        for (const auto& name : dataset.feature_names[v]) t.header.push_back(name);
        for (Eigen::Index i = 0; i < dataset.samples(); ++i) {
            std::vector<std::string> row;
            row.push_back(labels.rows[static_cast<std::size_t>(i)][0]);
            for (Eigen::Index j = 0; j < dataset.views[v].cols(); ++j) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.17g", dataset.views[v](i, j));
                row.emplace_back(buf);
            }
            t.rows.push_back(std::move(row));
        }
        write_csv(dir / file, t);
        manifest.emplace_back("view." + dataset.view_names[v], file);
    }

    if (!dataset.informative_masks.empty()) {
        CsvTable t{{"view", "feature", "informative"}, {}};
        for (int v = 0; v < dataset.view_count(); ++v)
            for (std::size_t j = 0; j < dataset.informative_masks[v].size(); ++j)
                t.rows.push_back({dataset.view_names[v], dataset.feature_names[v][j],
                                  std::to_string(int(dataset.informative_masks[v][j]))});
        write_csv(dir / "informative.csv", t);
    }

    const auto manifest_path = dir / "manifest.txt";
    write_kv_file(manifest_path, manifest);
    return manifest_path;
}

NoiseAugmentResult add_noise_features(const MultiViewDataset& dataset,
                                      const std::vector<int>& target_dims,
                                      const std::vector<NoiseKind>& distributions,
                                      std::uint64_t seed) {
    if (target_dims.size() != dataset.views.size() || distributions.size() != dataset.views.size())
        throw std::invalid_argument("add_noise_features: per-view arguments mismatch");

    NoiseAugmentResult out;
    out.data = dataset;
    for (int v = 0; v < dataset.view_count(); ++v) {
        const int current = static_cast<int>(dataset.views[v].cols());
        const int target = target_dims[v];
        if (target < current)
            throw std::invalid_argument("add_noise_features: target dim " + std::to_string(target) +
                                        " below current " + std::to_string(current) + " in view " +
                                        dataset.view_names[v]);
        Rng rng = make_rng(derive_seed(seed, 0xadd0ULL, v));
        Eigen::MatrixXd raw(dataset.samples(), target);
        raw.leftCols(current) = dataset.views[v];
        for (Eigen::Index i = 0; i < dataset.samples(); ++i)
            for (int j = current; j < target; ++j) raw(i, j) = draw_noise(distributions[v], rng);

        std::vector<int> order(target);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);

        Eigen::MatrixXd view(dataset.samples(), target);
        std::vector<std::string> names(target);
        std::vector<std::uint8_t> inf_mask;
        const bool has_inf = !dataset.informative_masks.empty();
        if (has_inf) inf_mask.assign(target, 0);
        for (int j = 0; j < target; ++j) {
            view.col(j) = raw.col(order[j]);
            names[j] = order[j] < current ? dataset.feature_names[v][order[j]]
                                          : dataset.view_names[v] + "_noise" + std::to_string(order[j] - current);
            if (has_inf && order[j] < current) inf_mask[j] = dataset.informative_masks[v][order[j]];
        }
        out.data.views[v] = std::move(view);
        out.data.feature_names[v] = std::move(names);
        if (has_inf) out.data.informative_masks[v] = std::move(inf_mask);
        out.permutation.push_back(std::move(order));
    }
    return out;
}

}  // namespace mmfs
