#include <catch2/catch_amalgamated.hpp>

#include "mtskl/dataset_io.hpp"
#include "mtskl/model_io.hpp"
#include "mtskl/paf_schema.hpp"
#include "mtskl/pipeline.hpp"
#include "test_helpers.hpp"

#include <filesystem>
#include <fstream>

using namespace mtskl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("dataset directory round-trip is exact") {
    auto ds = mtskl_test::make_two_class_dataset(4, 3, 9, 3.0, 0.25, 555);
    ds.variable_names = {"R_Position", "P_Width", "RR_Interval"};

    TempDir tmp("mtskl_io_roundtrip");
    write_dataset_dir(tmp.path, ds);
    const MtsDataset back = load_dataset_dir(tmp.path);

    REQUIRE(back.size() == ds.size());
    CHECK(back.variable_names == ds.variable_names);
    REQUIRE(back.labels.has_value());
    CHECK(*back.labels == *ds.labels);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(back.samples[i].id == ds.samples[i].id);
        CHECK(back.samples[i].mask == ds.samples[i].mask);
        for (int v = 0; v < ds.samples[i].n_variables(); ++v)
            for (int t = 0; t < ds.samples[i].length(); ++t)
                if (ds.samples[i].mask(v, t))
                    CHECK(back.samples[i].values(v, t) == ds.samples[i].values(v, t));
    }
}

TEST_CASE("NaN and empty cells are masked out") {
    TempDir tmp("mtskl_io_nan");
    {
        std::ofstream m(tmp.path / "manifest.txt");
        m << "n_samples=1\nvariables=a,b\n";
        std::ofstream s(tmp.path / "x.csv");
        s << "a,b\n1.5,NaN\n,2.5\n";
    }
    const MtsDataset ds = load_dataset_dir(tmp.path);
    REQUIRE(ds.size() == 1);
    CHECK(ds.samples[0].length() == 2);
    CHECK(ds.samples[0].mask(0, 0));
    CHECK_FALSE(ds.samples[0].mask(1, 0)); // NaN
    CHECK_FALSE(ds.samples[0].mask(0, 1)); // empty cell
    CHECK(ds.samples[0].mask(1, 1));
    CHECK(ds.samples[0].values(1, 1) == 2.5);
}

TEST_CASE("loader errors name the file") {
    TempDir tmp("mtskl_io_errors");

    SECTION("missing manifest") {
        CHECK_THROWS_WITH(load_dataset_dir(tmp.path), Catch::Matchers::ContainsSubstring("manifest"));
    }
    SECTION("header mismatch") {
        std::ofstream m(tmp.path / "manifest.txt");
        m << "variables=a,b\n";
        m.close();
        std::ofstream s(tmp.path / "x.csv");
        s << "b,a\n1,2\n";
        s.close();
        CHECK_THROWS_WITH(load_dataset_dir(tmp.path),
                          Catch::Matchers::ContainsSubstring("x.csv") &&
                              Catch::Matchers::ContainsSubstring("header"));
    }
    SECTION("non-numeric cell names file and line") {
        std::ofstream m(tmp.path / "manifest.txt");
        m << "variables=a\n";
        m.close();
        std::ofstream s(tmp.path / "x.csv");
        s << "a\n1.0\nbogus\n";
        s.close();
        CHECK_THROWS_WITH(load_dataset_dir(tmp.path),
                          Catch::Matchers::ContainsSubstring("x.csv:3"));
    }
}

TEST_CASE("kernel matrix CSV round-trip") {
    auto ds = mtskl_test::make_random_dataset(6, 2, 12, 0.1, 808);
    LpsParams p;
    p.n_trees = 8;
    p.seg_len = 4;
    const auto model = lps_fit(ds, p, 2);
    const auto [ktr, kte] = lps_kernel_matrices(model, ds, MtsDataset{});

    TempDir tmp("mtskl_io_kernel");
    write_kernel_csv(tmp.path / "K_tr.csv", ktr, 2);
    const KernelMatrix back = read_kernel_csv(tmp.path / "K_tr.csv");
    CHECK(back.method == "lps");
    CHECK(back.symmetric);
    CHECK(back.row_ids == ktr.row_ids);
    CHECK(back.col_ids == ktr.col_ids);
    CHECK(back.values == ktr.values); // exact: shortest round-trip formatting
}

TEST_CASE("LPS model file round-trip preserves every similarity") {
    auto ds = mtskl_test::make_random_dataset(8, 3, 15, 0.15, 606);
    LpsParams p;
    p.n_trees = 12;
    p.seg_len = 5;
    const auto model = lps_fit(ds, p, 44);

    TempDir tmp("mtskl_io_lps");
    save_lps_model(tmp.path / "model.txt", model);
    const LpsModel back = load_lps_model(tmp.path / "model.txt");

    CHECK(back.params.n_trees == model.params.n_trees);
    CHECK(back.total_leaves == model.total_leaves);
    CHECK(back.n_variables == model.n_variables);
    const auto [k1, e1] = lps_kernel_matrices(model, ds, MtsDataset{});
    const auto [k2, e2] = lps_kernel_matrices(back, ds, MtsDataset{});
    CHECK(k1.values == k2.values);
}

TEST_CASE("TCK model file round-trip preserves test scoring") {
    auto train = mtskl_test::make_random_dataset(12, 2, 10, 0.1, 707);
    auto test = mtskl_test::make_random_dataset(4, 2, 10, 0.1, 708, "t");
    TckParams p;
    p.q = 3;
    p.c_max = 4;
    const auto [model, ktr] = tck_fit(train, p, 77);

    TempDir tmp("mtskl_io_tck");
    save_tck_model(tmp.path / "model.txt", model);
    const TckModel back = load_tck_model(tmp.path / "model.txt");
    CHECK(back.partitions.size() == model.partitions.size());
    CHECK(back.train_ids == model.train_ids);

    const auto kte_a = tck_test_kernel(model, test);
    const auto kte_b = tck_test_kernel(back, test);
    CHECK(kte_a.values == kte_b.values);
}

TEST_CASE("a full-size ragged dataset loads cleanly") {
    // shaped like the real extraction output: 106 samples, 22 variables,
    // lengths between 992 and 3364
    TempDir tmp("mtskl_io_fullsize");
    MtsDataset ds;
    ds.variable_names = paf_feature_names();
    Rng rng(derive_seed(2, "test.fullsize"));
    for (int i = 0; i < 106; ++i) {
        const int len = 992 + static_cast<int>(rng.uniform_int(0, 3364 - 992));
        Eigen::MatrixXd vals(22, len);
        BoolMatrix mask(22, len);
        for (int v = 0; v < 22; ++v)
            for (int t = 0; t < len; ++t) {
                const bool obs = rng.uniform01() >= 0.02;
                mask(v, t) = obs;
                vals(v, t) = obs ? rng.normal() : missing_value();
            }
        char buf[8];
        std::snprintf(buf, sizeof(buf), "p%03d", i);
        ds.samples.emplace_back(buf, std::move(vals), std::move(mask));
    }
    write_dataset_dir(tmp.path, ds);
    const MtsDataset back = load_dataset_dir(tmp.path);
    CHECK(back.size() == 106);
    CHECK(back.n_variables() == 22);
    CHECK(back.min_length() >= 992);
    CHECK(back.max_length() <= 3364);
    CHECK(target_length(back.max_length()) <= 25);
}

TEST_CASE("prepare pipeline: selection, resampling and standardization") {
    // two highly correlated variables plus an independent one
    MtsDataset train;
    train.variable_names = {"a", "a_copy", "b"};
    Rng rng(derive_seed(1, "test.prepare"));
    for (int i = 0; i < 6; ++i) {
        Eigen::MatrixXd vals(3, 40);
        BoolMatrix mask = BoolMatrix::Constant(3, 40, true);
        for (int t = 0; t < 40; ++t) {
            const double x = rng.normal();
            vals(0, t) = x;
            vals(1, t) = 2.0 * x + 0.75; // perfectly correlated with a
            vals(2, t) = rng.normal();
        }
        train.samples.emplace_back("s" + std::to_string(i), std::move(vals), std::move(mask));
    }

    PrepareOptions opt;
    opt.theta_c = 0.4;
    opt.standardize = true;
    opt.resample_base = 25;
    const PrepareResult res = prepare_datasets(train, MtsDataset{}, opt);

    CHECK(res.selected == std::vector<int>{0, 2}); // the copy is dropped
    CHECK(res.train.variable_names == std::vector<std::string>{"a", "b"});
    CHECK(res.target_len == target_length(40, 25));
    CHECK(res.train.common_length() == res.target_len);

    // standardized: pooled mean ~0, population std ~1 per variable
    const auto stats = compute_variable_stats(res.train);
    CHECK(stats.means(0) == Catch::Approx(0.0).margin(1e-9));
    CHECK(stats.stds(0) == Catch::Approx(1.0).margin(1e-9));
}
