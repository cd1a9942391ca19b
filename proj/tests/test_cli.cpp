#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "itksf/io.hpp"

namespace {

const std::string kCli = ITKSF_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("help exits cleanly") {
    CHECK(run("--help") == 0);
    CHECK(run("gen --help") == 0);
    CHECK(run("fit --help") == 0);
}

TEST_CASE("bad invocations are input errors") {
    CHECK(run("definitely-not-a-command") == 1);
    CHECK(run("fit --no-such-flag") == 1);
    CHECK(run("fit -i /tmp/itksf_cli_missing.csv -o /tmp/itksf_cli_out.json") == 1);
    CHECK(run("gen --kind line --seed 1") == 1);  // -o is required

    write_file("/tmp/itksf_cli_ok.csv", "x,y,label\n0,0,1\n1,1,1\n2,0,2\n");
    CHECK(run("fit -i /tmp/itksf_cli_ok.csv --clusters banana -o /tmp/x.json") == 1);
}

TEST_CASE("malformed input files are input errors") {
    write_file("/tmp/itksf_cli_bad.csv", "x,y,label\n1,huh,0\n");
    CHECK(run("fit -i /tmp/itksf_cli_bad.csv -o /tmp/itksf_cli_bad_out.json") == 1);

    write_file("/tmp/itksf_cli_badhdr.csv", "a,b\n1,2\n");
    CHECK(run("fit -i /tmp/itksf_cli_badhdr.csv -o /tmp/itksf_cli_bad_out.json") == 1);
}

TEST_CASE("gen writes a loadable labeled scene") {
    CHECK(run("gen --kind line --structures 3 --inliers 20 --outliers 10 --noise 0.01 "
              "--seed 42 -o /tmp/itksf_cli_scene.csv") == 0);
    const itksf::DataSet data = itksf::load_dataset("/tmp/itksf_cli_scene.csv");
    CHECK(data.size() == 3 * 20 + 10);
    CHECK(data.has_labels());
    CHECK(data.structure_ids() == std::vector<int>{1, 2, 3});
}

TEST_CASE("fit emits a structured json report") {
    REQUIRE(run("gen --kind line --structures 2 --inliers 25 --outliers 10 --noise 0.008 "
                "--seed 7 -o /tmp/itksf_cli_fit_scene.csv") == 0);
    CHECK(run("fit -i /tmp/itksf_cli_fit_scene.csv --strategy itksf --budget-count 200 "
              "--block-size 50 --seed 3 --inlier-threshold 0.03 "
              "-o /tmp/itksf_cli_fit.json --svg /tmp/itksf_cli_fit.svg") == 0);

    const nlohmann::json report = nlohmann::json::parse(slurp("/tmp/itksf_cli_fit.json"));
    REQUIRE(report.contains("structures"));
    REQUIRE(report.contains("metrics"));
    REQUIRE(report.contains("provenance"));
    CHECK(report["metrics"]["M"] == 200);
    CHECK(report["metrics"].contains("is_percent"));
    CHECK(report["metrics"].contains("per_structure"));
    CHECK(report["provenance"]["seed"] == 3);
    CHECK(report["provenance"].contains("version"));
    for (const auto& s : report["structures"]) {
        REQUIRE(s.contains("params"));
        CHECK(s["params"].size() == 3);
        CHECK(s.contains("representative"));
        CHECK(s.contains("members"));
        CHECK(s.contains("inliers"));
    }

    const std::string svg = slurp("/tmp/itksf_cli_fit.svg");
    CHECK(svg.find("<svg") != std::string::npos);
}

TEST_CASE("bench reports are reproducible byte for byte") {
    write_file("/tmp/itksf_cli_bench.cfg",
               "strategy=uniform,itksf\n"
               "budget.hypothesis_count=120\n"
               "b=40\n"
               "runs=2\n"
               "seed=9\n"
               "synthetic.n_lines=2\n"
               "synthetic.inliers_per_line=15\n"
               "synthetic.n_outliers=8\n"
               "synthetic.noise_sigma=0.01\n");
    CHECK(run("bench --config /tmp/itksf_cli_bench.cfg --format csv "
              "-o /tmp/itksf_cli_bench1.csv") == 0);
    CHECK(run("bench --config /tmp/itksf_cli_bench.cfg --format csv "
              "-o /tmp/itksf_cli_bench2.csv") == 0);
    const std::string first = slurp("/tmp/itksf_cli_bench1.csv");
    CHECK_FALSE(first.empty());
    CHECK(first == slurp("/tmp/itksf_cli_bench2.csv"));

    CHECK(run("bench --config /tmp/itksf_cli_bench.cfg --format md "
              "-o /tmp/itksf_cli_bench.md") == 0);
    CHECK(slurp("/tmp/itksf_cli_bench.md").find("| Strategy |") != std::string::npos);
}

TEST_CASE("dump-k writes one row per datum") {
    REQUIRE(run("gen --kind line --structures 2 --inliers 10 --outliers 5 --noise 0.01 "
                "--seed 11 -o /tmp/itksf_cli_dumpk_scene.csv") == 0);
    CHECK(run("dump-k -i /tmp/itksf_cli_dumpk_scene.csv --budget-count 80 --block-size 40 "
              "--seed 2 -o /tmp/itksf_cli_k.csv") == 0);
    std::ifstream in("/tmp/itksf_cli_k.csv");
    REQUIRE(in.good());
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 25);
}
