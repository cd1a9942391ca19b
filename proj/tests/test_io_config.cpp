#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "itksf/error.hpp"
#include "itksf/experiment.hpp"
#include "itksf/io.hpp"
#include "itksf/random.hpp"
#include "itksf/synthetic.hpp"

using namespace itksf;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("point files round-trip exactly") {
    LineSceneSpec spec;
    spec.n_lines = 2;
    spec.inliers_per_line = 15;
    spec.n_outliers = 10;
    Rng rng(5);
    const DataSet data = generate_synthetic_lines(spec, rng).data;

    const std::string path = "/tmp/itksf_test_points.csv";
    save_dataset(path, data);
    const DataSet back = load_dataset(path);

    CHECK(back.coords == DataSet::Coords::Points2D);
    REQUIRE(back.size() == data.size());
    for (int i = 0; i < data.size(); ++i) {
        CHECK(back.data[static_cast<std::size_t>(i)].x1 ==
              data.data[static_cast<std::size_t>(i)].x1);
        CHECK(back.data[static_cast<std::size_t>(i)].y1 ==
              data.data[static_cast<std::size_t>(i)].y1);
        CHECK(back.data[static_cast<std::size_t>(i)].label ==
              data.data[static_cast<std::size_t>(i)].label);
    }
    CHECK(back.has_labels());
    CHECK(back.structure_ids() == std::vector<int>{1, 2});
}

TEST_CASE("correspondence files round-trip exactly") {
    CorrespondenceSceneSpec spec;
    spec.n_structures = 1;
    spec.inliers_per_structure = 12;
    spec.n_outliers = 5;
    Rng rng(6);
    const DataSet data = generate_synthetic_homographies(spec, rng).data;

    const std::string path = "/tmp/itksf_test_corr.csv";
    save_dataset(path, data);
    const DataSet back = load_dataset(path);

    CHECK(back.coords == DataSet::Coords::Correspondences);
    REQUIRE(back.size() == data.size());
    for (int i = 0; i < data.size(); ++i) {
        CHECK(back.data[static_cast<std::size_t>(i)].x2 ==
              data.data[static_cast<std::size_t>(i)].x2);
        CHECK(back.data[static_cast<std::size_t>(i)].y2 ==
              data.data[static_cast<std::size_t>(i)].y2);
    }
}

TEST_CASE("blank labels load as unlabeled") {
    const std::string path =
        write_temp("itksf_test_blank.csv", "x,y,label\n0.5,0.25,1\n0.1,0.9,\n");
    const DataSet data = load_points(path);
    REQUIRE(data.size() == 2);
    CHECK(data.data[0].label == 1);
    CHECK_FALSE(data.data[1].label.has_value());
    CHECK_FALSE(data.has_labels());

    const std::string out = "/tmp/itksf_test_blank_out.csv";
    save_dataset(out, data);
    const DataSet back = load_dataset(out);
    CHECK_FALSE(back.data[1].label.has_value());
}

TEST_CASE("malformed files raise parse errors with line numbers") {
    const std::string bad_number =
        write_temp("itksf_test_badnum.csv", "x,y,label\n0.5,oops,1\n");
    try {
        load_points(bad_number);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }

    const std::string short_row =
        write_temp("itksf_test_shortrow.csv", "x,y,label\n0.5,0.2,1\n0.4\n");
    try {
        load_points(short_row);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }

    const std::string empty = write_temp("itksf_test_empty.csv", "");
    CHECK_THROWS_AS(load_dataset(empty), ParseError);

    const std::string wrong_header =
        write_temp("itksf_test_header.csv", "foo,bar\n1,2\n");
    CHECK_THROWS_AS(load_dataset(wrong_header), MissingColumn);

    const std::string missing_label =
        write_temp("itksf_test_nolabel.csv", "x,y\n1,2\n");
    CHECK_THROWS_AS(load_points(missing_label), MissingColumn);

    CHECK_THROWS_AS(load_dataset("/tmp/itksf_no_such_file.csv"), Error);
}

TEST_CASE("experiment config text round-trips") {
    ExperimentConfig config;
    config.strategies = {SamplerStrategy{SamplerTag::Uniform, 0.0},
                         SamplerStrategy{SamplerTag::ITKSFS, 0.0}};
    config.budget = Budget::count(400);
    config.b = 50;
    config.k_fraction = 0.2;
    config.h_fraction = 0.15;
    config.runs = 3;
    config.seed = 99;
    config.clustering.cluster_count = 4;
    config.clustering.min_cluster_size = 2;
    config.inlier_threshold = 0.04;
    config.synthetic.n_lines = 3;
    config.synthetic.inliers_per_line = 20;
    config.synthetic.n_outliers = 10;
    config.synthetic.noise_sigma = 0.02;

    const std::string text = experiment_config_text(config);
    const ExperimentConfig back = parse_experiment_config_text(text);

    REQUIRE(back.strategies.size() == 2);
    CHECK(back.strategies[0].tag == SamplerTag::Uniform);
    CHECK(back.strategies[1].tag == SamplerTag::ITKSFS);
    CHECK(back.budget.by_count());
    CHECK(*back.budget.hypothesis_count == 400);
    CHECK(back.b == 50);
    CHECK(back.k_fraction == 0.2);
    CHECK(back.h_fraction == 0.15);
    CHECK(back.runs == 3);
    CHECK(back.seed == 99);
    CHECK(back.clustering.cluster_count == 4);
    CHECK(back.clustering.min_cluster_size == 2);
    CHECK(back.inlier_threshold == 0.04);
    CHECK(back.synthetic.n_lines == 3);
    CHECK(back.synthetic.inliers_per_line == 20);
    CHECK(back.synthetic.n_outliers == 10);
    CHECK(back.synthetic.noise_sigma == 0.02);

    CHECK(experiment_config_text(back) == text);
}

TEST_CASE("config parser accepts comments and rejects junk") {
    const ExperimentConfig config = parse_experiment_config_text(
        "# comment line\n"
        "strategy=itksf\n"
        "\n"
        "budget.hypothesis_count=250\n"
        "cluster_count=auto\n"
        "seed=11\n");
    REQUIRE(config.strategies.size() == 1);
    CHECK(config.strategies[0].tag == SamplerTag::ITKSF);
    CHECK(*config.budget.hypothesis_count == 250);
    CHECK_FALSE(config.clustering.cluster_count.has_value());
    CHECK(config.seed == 11);

    CHECK_THROWS_AS(parse_experiment_config_text("nonsense_key=3\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_experiment_config_text("runs\n"), ParseError);
    CHECK_THROWS_AS(parse_experiment_config_text("runs=0\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_experiment_config_text("b=zero\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_experiment_config_text("strategy=warp\n"), InvalidConfig);

    // the two budget keys overwrite each other; the last one wins
    const ExperimentConfig last = parse_experiment_config_text(
        "budget.cpu_seconds=5\nbudget.hypothesis_count=100\n");
    CHECK(last.budget.by_count());
    CHECK(*last.budget.hypothesis_count == 100);
}

TEST_CASE("config file loading") {
    const std::string path = write_temp("itksf_test_config.txt",
                                        "strategy=uniform\n"
                                        "budget.hypothesis_count=120\n"
                                        "runs=2\n"
                                        "seed=3\n");
    const ExperimentConfig config = load_experiment_config(path);
    CHECK(config.runs == 2);
    CHECK(*config.budget.hypothesis_count == 120);
    CHECK_THROWS_AS(load_experiment_config("/tmp/itksf_no_config.txt"), Error);
}
