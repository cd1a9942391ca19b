#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "itksf/error.hpp"
#include "itksf/experiment.hpp"
#include "itksf/fitting.hpp"
#include "itksf/io.hpp"
#include "itksf/metrics.hpp"
#include "itksf/svg.hpp"
#include "itksf/synthetic.hpp"
#include "itksf/version.hpp"

namespace {

using nlohmann::json;

struct CommonOptions {
    std::string config_path;
    std::string input;
    std::string strategy;
    std::string clusters;
    std::optional<double> budget_seconds;
    std::optional<long> budget_count;
    std::optional<int> block_size;
    std::optional<double> k_fraction;
    std::optional<double> h_fraction;
    std::optional<int> min_cluster_size;
    std::optional<double> inlier_threshold;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> kind;
};

void add_common_options(CLI::App* cmd, CommonOptions& opt, bool with_config) {
    if (with_config)
        cmd->add_option("--config", opt.config_path, "key=value config file");
    cmd->add_option("-i,--input", opt.input, "dataset CSV (x,y,label or x1,y1,x2,y2,label)");
    cmd->add_option("--kind", opt.kind, "model kind: line, homography, fundamental");
    cmd->add_option("--strategy", opt.strategy,
                    "sampling strategies, comma separated: uniform, proximity, itksf, itksf-s");
    cmd->add_option("--budget-seconds", opt.budget_seconds, "CPU-seconds budget");
    cmd->add_option("--budget-count", opt.budget_count, "hypothesis-count budget")
        ->excludes("--budget-seconds");
    cmd->add_option("--block-size", opt.block_size, "hypotheses per block");
    cmd->add_option("--k-fraction", opt.k_fraction, "top-k length as a fraction of t");
    cmd->add_option("--h-fraction", opt.h_fraction, "top-h length as a fraction of N");
    cmd->add_option("--clusters", opt.clusters, "structure count, or 'auto'");
    cmd->add_option("--min-cluster-size", opt.min_cluster_size,
                    "smallest hypothesis cluster kept");
    cmd->add_option("--inlier-threshold", opt.inlier_threshold,
                    "residual bound for datum-to-structure assignment");
    cmd->add_option("--seed", opt.seed, "master RNG seed");
}

itksf::ExperimentConfig resolve_config(const CommonOptions& opt) {
    itksf::ExperimentConfig config;
    if (!opt.config_path.empty()) config = itksf::load_experiment_config(opt.config_path);
    if (!opt.input.empty()) config.input = opt.input;
    if (opt.kind) config.kind = itksf::model_kind_from_string(*opt.kind);
    if (!opt.strategy.empty()) {
        config.strategies.clear();
        std::stringstream items(opt.strategy);
        std::string item;
        while (std::getline(items, item, ','))
            config.strategies.push_back(
                itksf::SamplerStrategy{itksf::sampler_tag_from_string(item), 0.0});
    }
    if (opt.budget_seconds) config.budget = itksf::Budget::seconds(*opt.budget_seconds);
    if (opt.budget_count) config.budget = itksf::Budget::count(*opt.budget_count);
    if (opt.block_size) config.b = *opt.block_size;
    if (opt.k_fraction) config.k_fraction = *opt.k_fraction;
    if (opt.h_fraction) config.h_fraction = *opt.h_fraction;
    if (!opt.clusters.empty()) {
        if (opt.clusters == "auto") {
            config.clustering.cluster_count.reset();
        } else {
            try {
                std::size_t used = 0;
                config.clustering.cluster_count = std::stoi(opt.clusters, &used);
                if (used != opt.clusters.size()) throw std::invalid_argument(opt.clusters);
            } catch (const std::exception&) {
                throw itksf::InvalidConfig("--clusters expects a count or 'auto', got '" +
                                           opt.clusters + "'");
            }
        }
    }
    if (opt.min_cluster_size) config.clustering.min_cluster_size = *opt.min_cluster_size;
    if (opt.inlier_threshold) config.inlier_threshold = *opt.inlier_threshold;
    if (opt.seed) config.seed = *opt.seed;
    return config;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw itksf::Error("cannot open " + path + " for writing");
    out << text;
}

int run_gen(const std::string& kind_name, int structures, int inliers, int outliers,
            double noise, double image_size, std::uint64_t seed, const std::string& out_path) {
    const itksf::ModelKind kind = itksf::model_kind_from_string(kind_name);
    itksf::Rng rng(seed);
    itksf::DataSet data;
    if (kind == itksf::ModelKind::Line2D) {
        itksf::LineSceneSpec spec;
        spec.n_lines = structures;
        spec.inliers_per_line = inliers;
        spec.n_outliers = outliers;
        spec.noise_sigma = noise;
        data = itksf::generate_synthetic_lines(spec, rng).data;
    } else {
        itksf::CorrespondenceSceneSpec spec;
        spec.n_structures = structures;
        spec.inliers_per_structure = inliers;
        spec.n_outliers = outliers;
        spec.noise_sigma = noise;
        spec.image_size = image_size;
        data = kind == itksf::ModelKind::Homography
                   ? itksf::generate_synthetic_homographies(spec, rng).data
                   : itksf::generate_synthetic_fundamentals(spec, rng).data;
    }
    itksf::save_dataset(out_path, data);
    return 0;
}

int run_fit(const CommonOptions& opt, const std::string& out_path, const std::string& svg_path) {
    const itksf::ExperimentConfig config = resolve_config(opt);
    const itksf::DataSet data = itksf::experiment_dataset(config);

    itksf::FitConfig fit_config;
    fit_config.sampling = config.sampling_for(config.strategies.front());
    fit_config.clustering = config.clustering;
    fit_config.inlier_threshold = config.inlier_threshold;

    itksf::Rng rng(itksf::Rng::derive(config.seed, 0));
    const itksf::FitReport report =
        itksf::fit_multi_structure(data, config.kind, fit_config, rng);

    json doc;
    doc["structures"] = json::array();
    for (const auto& s : report.structures) {
        json entry;
        entry["params"] = std::vector<double>(s.model.params.data(),
                                              s.model.params.data() + s.model.params.size());
        entry["representative"] = s.representative;
        entry["members"] = s.member_hypotheses;
        if (s.inliers) entry["inliers"] = *s.inliers;
        doc["structures"].push_back(entry);
    }
    json metrics;
    metrics["M"] = report.sampling.store.size();
    if (data.has_labels()) {
        const itksf::RunMetrics m =
            itksf::evaluate_run(report.sampling.store, data, config.budget);
        metrics["hit_s"] = m.hit_seconds;
        metrics["hit_index"] = m.hit_index;
        metrics["per_structure"] = m.per_structure;
        metrics["is_percent"] = m.is_percent;
        metrics["good_per_structure"] = m.good_per_structure;
        metrics["good_is_percent"] = m.good_is_percent;
        metrics["good_count"] = m.good_count;
    }
    doc["metrics"] = metrics;
    doc["provenance"] = {{"seed", config.seed},
                         {"config", itksf::experiment_config_text(config)},
                         {"version", itksf::kVersion}};

    write_text(out_path, doc.dump(2) + "\n");
    if (!svg_path.empty()) itksf::write_svg(svg_path, data, report.structures);
    return 0;
}

int run_bench(const CommonOptions& opt, const std::string& format, const std::string& out_path) {
    if (opt.config_path.empty()) throw itksf::InvalidConfig("bench needs --config");
    const itksf::ExperimentConfig config = resolve_config(opt);
    const itksf::ExperimentReport report = itksf::run_experiment(config);
    if (format == "csv")
        write_text(out_path, itksf::render_report_csv(report));
    else
        write_text(out_path, itksf::render_report_markdown(report));
    return 0;
}

int run_dump_k(const CommonOptions& opt, const std::string& out_path) {
    const itksf::ExperimentConfig config = resolve_config(opt);
    const itksf::DataSet data = itksf::experiment_dataset(config);
    itksf::Rng rng(itksf::Rng::derive(config.seed, 0));
    const itksf::SamplingResult result = itksf::run_sampling(
        data, config.kind, config.sampling_for(config.strategies.front()), rng);
    result.similarity.write_csv(out_path);
    return 0;
}

bool is_input_error(const itksf::Error& e) {
    return typeid(e) == typeid(itksf::Error) ||
           dynamic_cast<const itksf::ParseError*>(&e) != nullptr ||
           dynamic_cast<const itksf::MissingColumn*>(&e) != nullptr ||
           dynamic_cast<const itksf::InvalidConfig*>(&e) != nullptr ||
           dynamic_cast<const itksf::NoLabels*>(&e) != nullptr ||
           dynamic_cast<const itksf::BudgetTooSmall*>(&e) != nullptr;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-structure robust fitting via incremental top-k preference analysis"};
    app.require_subcommand(1);

    CommonOptions fit_opt, bench_opt, dump_opt;
    std::string fit_out, fit_svg, bench_out, bench_format = "md", dump_out;

    std::string gen_kind = "line", gen_out;
    int gen_structures = 5, gen_inliers = 100, gen_outliers = 250;
    double gen_noise = 0.01, gen_image_size = 512.0;
    std::uint64_t gen_seed = 0;

    CLI::App* gen = app.add_subcommand("gen", "generate a labeled synthetic dataset CSV");
    gen->add_option("--kind", gen_kind, "model kind: line, homography, fundamental");
    gen->add_option("--structures", gen_structures, "planted structure count");
    gen->add_option("--inliers", gen_inliers, "inliers per structure");
    gen->add_option("--outliers", gen_outliers, "gross outlier count");
    gen->add_option("--noise", gen_noise, "inlier noise scale");
    gen->add_option("--image-size", gen_image_size, "image extent for correspondence scenes");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("-o,--out", gen_out, "output CSV path")->required();

    CLI::App* fit = app.add_subcommand("fit", "fit structures and emit a JSON report");
    add_common_options(fit, fit_opt, true);
    fit->add_option("-o,--out", fit_out, "report path (default stdout)");
    fit->add_option("--svg", fit_svg, "also write an SVG scatter of the result");

    CLI::App* bench = app.add_subcommand("bench", "run a strategy-comparison experiment");
    add_common_options(bench, bench_opt, true);
    bench->add_option("-o,--out", bench_out, "table path (default stdout)");
    bench->add_option("--format", bench_format, "table format: md or csv")
        ->check(CLI::IsMember({"md", "csv"}));

    CLI::App* dump = app.add_subcommand("dump-k", "write the data similarity matrix as CSV");
    add_common_options(dump, dump_opt, true);
    dump->add_option("-o,--out", dump_out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (gen->parsed())
            return run_gen(gen_kind, gen_structures, gen_inliers, gen_outliers, gen_noise,
                           gen_image_size, gen_seed, gen_out);
        if (fit->parsed()) return run_fit(fit_opt, fit_out, fit_svg);
        if (bench->parsed()) return run_bench(bench_opt, bench_format, bench_out);
        if (dump->parsed()) return run_dump_k(dump_opt, dump_out);
    } catch (const itksf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_input_error(e) ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
