#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mmfs/config.hpp"
#include "mmfs/csv.hpp"
#include "mmfs/data.hpp"

using namespace mmfs;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("mmfs_io_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("csv round trip") {
    TempDir tmp;
    CsvTable t{{"a", "b"}, {{"1", "x"}, {"2", "y"}}};
    write_csv(tmp.path / "t.csv", t);
    const auto back = read_csv(tmp.path / "t.csv");
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
}

TEST_CASE("kv file round trip with comments") {
    TempDir tmp;
    std::ofstream(tmp.path / "f.txt") << "# comment\n a = 1 \n\nb.c = hello world\n";
    const auto entries = read_kv_file(tmp.path / "f.txt");
    REQUIRE(entries.size() == 2);
    CHECK(entries[0] == std::pair<std::string, std::string>{"a", "1"});
    CHECK(entries[1] == std::pair<std::string, std::string>{"b.c", "hello world"});
}

TEST_CASE("kv file rejects lines without an equals sign") {
    TempDir tmp;
    std::ofstream(tmp.path / "bad.txt") << "just some text\n";
    CHECK_THROWS_WITH_AS(read_kv_file(tmp.path / "bad.txt"), doctest::Contains("key = value"),
                         std::runtime_error);
}

TEST_CASE("experiment config parses, validates and round-trips") {
    TempDir tmp;
    std::ofstream(tmp.path / "cfg.txt") << "data.synthetic_task = binary\n"
                                        << "data.seed = 3\n"
                                        << "run.seed = 9\n"
                                        << "run.out = results\n"
                                        << "search.n_niches = 4\n"
                                        << "search.ivfs_pop = 60\n"
                                        << "eval.n_folds = 5\n";
    const auto cfg = load_experiment_config(tmp.path / "cfg.txt");
    CHECK(cfg.synthetic);
    CHECK(cfg.task == SyntheticTask::binary);
    CHECK(cfg.data_seed == 3);
    CHECK(cfg.niche.seed == 9);
    CHECK(cfg.niche.n_niches == 4);
    CHECK(cfg.niche.ivfs_pop == 60);
    CHECK(cfg.niche.eval.n_folds == 5);
    CHECK(cfg.out_dir.filename() == "results");

    save_experiment_config(cfg, tmp.path / "saved.txt");
    const auto back = load_experiment_config(tmp.path / "saved.txt");
    CHECK(back.niche.n_niches == cfg.niche.n_niches);
    CHECK(back.niche.eval.n_folds == cfg.niche.eval.n_folds);
    CHECK(back.data_seed == cfg.data_seed);
}

TEST_CASE("experiment config errors name the offending key") {
    TempDir tmp;
    SUBCASE("unknown key") {
        std::ofstream(tmp.path / "c.txt") << "data.synthetic_task = binary\nsearch.bogus = 1\n";
        CHECK_THROWS_WITH_AS(load_experiment_config(tmp.path / "c.txt"),
                             doctest::Contains("search.bogus"), ConfigError);
    }
    SUBCASE("non-numeric value") {
        std::ofstream(tmp.path / "c.txt") << "data.synthetic_task = binary\nrun.seed = soon\n";
        CHECK_THROWS_WITH_AS(load_experiment_config(tmp.path / "c.txt"),
                             doctest::Contains("run.seed"), ConfigError);
    }
    SUBCASE("no dataset source") {
        std::ofstream(tmp.path / "c.txt") << "run.seed = 1\n";
        CHECK_THROWS_AS(load_experiment_config(tmp.path / "c.txt"), ConfigError);
    }
    SUBCASE("two dataset sources") {
        std::ofstream(tmp.path / "c.txt")
            << "data.synthetic_task = binary\ndata.manifest = m.txt\n";
        CHECK_THROWS_AS(load_experiment_config(tmp.path / "c.txt"), ConfigError);
    }
    SUBCASE("unknown preset") {
        std::ofstream(tmp.path / "c.txt") << "data.synthetic_task = binary\nrun.preset = huge\n";
        CHECK_THROWS_WITH_AS(load_experiment_config(tmp.path / "c.txt"),
                             doctest::Contains("huge"), ConfigError);
    }
}

TEST_CASE("presets expand to the documented budgets") {
    ExperimentConfig cfg;
    cfg.synthetic = true;
    apply_preset(cfg, "desk");
    CHECK(cfg.niche.n_niches == 2);
    CHECK(cfg.niche.ivfs_pop == 50);
    CHECK(cfg.niche.ivfs_gen == 100);
    apply_preset(cfg, "paper");
    CHECK(cfg.niche.n_niches == 6);
    CHECK(cfg.niche.ivfs_pop == 0);  // auto-sized from the data
    CHECK_THROWS_AS(apply_preset(cfg, "galactic"), ConfigError);
}

TEST_CASE("mask file round trip survives column reordering") {
    SyntheticSpec spec = SyntheticSpec::make(SyntheticTask::binary);
    spec.view_dims = {8, 8, 8, 8, 8};
    spec.samples_per_class = 10;
    const auto synth = generate_synthetic(spec, 4);

    std::vector<std::uint8_t> mask(synth.data.total_features(), 0);
    mask[1] = mask[9] = mask[17] = mask[39] = 1;
    TempDir tmp;
    write_mask_file(tmp.path / "mask.txt", synth.data, mask);
    CHECK(read_mask_file(tmp.path / "mask.txt", synth.data) == mask);

    // reorder columns within each view; the named mask must follow
    MultiViewDataset shuffled = synth.data;
    for (int v = 0; v < shuffled.view_count(); ++v) {
        std::reverse(shuffled.feature_names[v].begin(), shuffled.feature_names[v].end());
        shuffled.views[v] = shuffled.views[v].rowwise().reverse().eval();
    }
    const auto remapped = read_mask_file(tmp.path / "mask.txt", shuffled);
    CHECK(remapped[8 - 1 - 1] == 1);  // view 0, reversed position of feature 1
    CHECK(std::count(remapped.begin(), remapped.end(), std::uint8_t{1}) == 4);
}

TEST_CASE("mask file errors on unknown views or features") {
    SyntheticSpec spec = SyntheticSpec::make(SyntheticTask::binary);
    spec.view_dims = {8, 8, 8, 8, 8};
    spec.samples_per_class = 10;
    const auto synth = generate_synthetic(spec, 4);
    TempDir tmp;
    std::ofstream(tmp.path / "bad_view.txt") << "ViewX: v1_f0\n";
    CHECK_THROWS_WITH_AS(read_mask_file(tmp.path / "bad_view.txt", synth.data),
                         doctest::Contains("ViewX"), std::runtime_error);
    std::ofstream(tmp.path / "bad_feat.txt") << "View1: v1_nope\n";
    CHECK_THROWS_WITH_AS(read_mask_file(tmp.path / "bad_feat.txt", synth.data),
                         doctest::Contains("v1_nope"), std::runtime_error);
}
