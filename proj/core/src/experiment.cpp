#include "itksf/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "itksf/error.hpp"
#include "itksf/io.hpp"

namespace itksf {

namespace {

constexpr std::uint64_t kDatasetStream = 0x5CE11E;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InvalidConfig("key '" + key + "' needs a number, got '" + value + "'");
    }
}

long parse_integer(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InvalidConfig("key '" + key + "' needs an integer, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InvalidConfig("key '" + key + "' needs an unsigned integer, got '" + value + "'");
    }
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double mean_of(const std::vector<RunMetrics>& runs, double (*pick)(const RunMetrics&)) {
    if (runs.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& r : runs) acc += pick(r);
    return acc / static_cast<double>(runs.size());
}

std::string fixed2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fixed4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

SamplingConfig ExperimentConfig::sampling_for(const SamplerStrategy& strategy) const {
    SamplingConfig out;
    out.strategy = strategy;
    out.budget = budget;
    out.block_size = b;
    out.k_fraction = k_fraction;
    out.h_fraction = h_fraction;
    return out;
}

ExperimentConfig parse_experiment_config_text(const std::string& text) {
    ExperimentConfig config;
    config.strategies.clear();
    std::optional<double> proximity_sigma;

    std::stringstream lines(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(lines, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value, got '" + line + "'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "strategy") {
            std::stringstream items(value);
            std::string item;
            while (std::getline(items, item, ','))
                config.strategies.push_back(SamplerStrategy{sampler_tag_from_string(trim(item)), 0.0});
        } else if (key == "kind") {
            config.kind = model_kind_from_string(value);
        } else if (key == "budget.cpu_seconds") {
            config.budget = Budget::seconds(parse_real(key, value));
        } else if (key == "budget.hypothesis_count") {
            config.budget = Budget::count(parse_integer(key, value));
        } else if (key == "b") {
            config.b = static_cast<int>(parse_integer(key, value));
        } else if (key == "k_fraction") {
            config.k_fraction = parse_real(key, value);
        } else if (key == "h_fraction") {
            config.h_fraction = parse_real(key, value);
        } else if (key == "runs") {
            config.runs = static_cast<int>(parse_integer(key, value));
        } else if (key == "seed") {
            config.seed = parse_u64(key, value);
        } else if (key == "cluster_count") {
            if (value == "auto")
                config.clustering.cluster_count.reset();
            else
                config.clustering.cluster_count = static_cast<int>(parse_integer(key, value));
        } else if (key == "min_cluster_size") {
            config.clustering.min_cluster_size = static_cast<int>(parse_integer(key, value));
        } else if (key == "inlier_threshold") {
            config.inlier_threshold = parse_real(key, value);
        } else if (key == "proximity_sigma") {
            proximity_sigma = parse_real(key, value);
        } else if (key == "input") {
            config.input = value;
        } else if (key == "synthetic.n_lines") {
            config.synthetic.n_lines = static_cast<int>(parse_integer(key, value));
        } else if (key == "synthetic.inliers_per_line") {
            config.synthetic.inliers_per_line = static_cast<int>(parse_integer(key, value));
        } else if (key == "synthetic.n_outliers") {
            config.synthetic.n_outliers = static_cast<int>(parse_integer(key, value));
        } else if (key == "synthetic.noise_sigma") {
            config.synthetic.noise_sigma = parse_real(key, value);
        } else if (key == "synthetic.box_min_x") {
            config.synthetic.box_min_x = parse_real(key, value);
        } else if (key == "synthetic.box_min_y") {
            config.synthetic.box_min_y = parse_real(key, value);
        } else if (key == "synthetic.box_max_x") {
            config.synthetic.box_max_x = parse_real(key, value);
        } else if (key == "synthetic.box_max_y") {
            config.synthetic.box_max_y = parse_real(key, value);
        } else {
            throw InvalidConfig("unknown config key '" + key + "'");
        }
    }

    if (config.strategies.empty()) config.strategies.push_back(SamplerStrategy{});
    if (proximity_sigma)
        for (auto& s : config.strategies)
            if (s.tag == SamplerTag::Proximity) s.proximity_sigma = *proximity_sigma;
    if (config.runs < 1) throw InvalidConfig("runs must be at least 1");
    if (config.b < 1) throw InvalidConfig("b must be at least 1");
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config_text(buffer.str());
}

std::string experiment_config_text(const ExperimentConfig& config) {
    std::string out;
    out += "strategy=";
    for (std::size_t i = 0; i < config.strategies.size(); ++i) {
        if (i) out += ',';
        out += to_string(config.strategies[i].tag);
    }
    out += '\n';
    out += "kind=" + to_string(config.kind) + '\n';
    if (config.budget.by_count())
        out += "budget.hypothesis_count=" + std::to_string(*config.budget.hypothesis_count) + '\n';
    else
        out += "budget.cpu_seconds=" + format_real(*config.budget.cpu_seconds) + '\n';
    out += "b=" + std::to_string(config.b) + '\n';
    out += "k_fraction=" + format_real(config.k_fraction) + '\n';
    out += "h_fraction=" + format_real(config.h_fraction) + '\n';
    out += "runs=" + std::to_string(config.runs) + '\n';
    out += "seed=" + std::to_string(config.seed) + '\n';
    out += "cluster_count=" +
           (config.clustering.cluster_count ? std::to_string(*config.clustering.cluster_count)
                                            : std::string("auto")) +
           '\n';
    out += "min_cluster_size=" + std::to_string(config.clustering.min_cluster_size) + '\n';
    if (config.inlier_threshold)
        out += "inlier_threshold=" + format_real(*config.inlier_threshold) + '\n';
    for (const auto& s : config.strategies)
        if (s.tag == SamplerTag::Proximity && s.proximity_sigma > 0.0) {
            out += "proximity_sigma=" + format_real(s.proximity_sigma) + '\n';
            break;
        }
    if (!config.input.empty()) {
        out += "input=" + config.input + '\n';
    } else {
        out += "synthetic.n_lines=" + std::to_string(config.synthetic.n_lines) + '\n';
        out += "synthetic.inliers_per_line=" + std::to_string(config.synthetic.inliers_per_line) +
               '\n';
        out += "synthetic.n_outliers=" + std::to_string(config.synthetic.n_outliers) + '\n';
        out += "synthetic.noise_sigma=" + format_real(config.synthetic.noise_sigma) + '\n';
    }
    return out;
}

DataSet experiment_dataset(const ExperimentConfig& config) {
    if (!config.input.empty()) return load_dataset(config.input);
    if (config.kind != ModelKind::Line2D)
        throw InvalidConfig("synthetic experiments cover line fitting; pass input=<file> for " +
                            to_string(config.kind));
    Rng rng(Rng::derive(config.seed, kDatasetStream));
    return generate_synthetic_lines(config.synthetic, rng).data;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    const DataSet data = experiment_dataset(config);
    ExperimentReport report;
    report.config = config;
    if (data.has_labels()) report.structure_ids = data.structure_ids();

    for (const auto& strategy : config.strategies) {
        StrategySummary summary;
        summary.strategy = strategy;
        for (int run = 0; run < config.runs; ++run) {
            Rng rng(Rng::derive(config.seed, static_cast<std::uint64_t>(run)));
            try {
                const SamplingResult result =
                    run_sampling(data, config.kind, config.sampling_for(strategy), rng);
                if (data.has_labels()) {
                    summary.runs.push_back(evaluate_run(result.store, data, config.budget));
                } else {
                    RunMetrics m;
                    m.m = result.store.size();
                    m.good_count = static_cast<long>(result.store.good_set.size());
                    summary.runs.push_back(m);
                }
            } catch (const std::exception& e) {
                summary.failures.push_back(to_string(strategy.tag) + " run " +
                                           std::to_string(run) + ": " + e.what());
            }
        }
        report.strategies.push_back(std::move(summary));
    }
    return report;
}

std::string render_report_markdown(const ExperimentReport& report) {
    const bool by_count = report.config.budget.by_count();
    const bool labeled = !report.structure_ids.empty();
    std::string out;

    out += "# Sampling comparison\n\n";
    if (report.config.input.empty()) {
        const auto& s = report.config.synthetic;
        out += "dataset: synthetic lines (" + std::to_string(s.n_lines) + " x " +
               std::to_string(s.inliers_per_line) + " inliers, " +
               std::to_string(s.n_outliers) + " outliers, noise " +
               format_real(s.noise_sigma) + ")\n";
    } else {
        out += "dataset: " + report.config.input + "\n";
    }
    out += "budget: " +
           (by_count ? std::to_string(*report.config.budget.hypothesis_count) + " hypotheses"
                     : format_real(*report.config.budget.cpu_seconds) + " CPU seconds") +
           "; runs: " + std::to_string(report.config.runs) +
           "; seed: " + std::to_string(report.config.seed) + "\n\n";

    out += "| Strategy | M | ";
    out += by_count ? "HIT(#)" : "HIT(s)";
    out += " |";
    if (labeled) {
        for (int id : report.structure_ids) out += " S" + std::to_string(id) + " |";
        out += " IS(%) |";
    }
    out += " Good |\n";
    out += "|---|---|---|";
    if (labeled)
        for (std::size_t i = 0; i < report.structure_ids.size() + 1; ++i) out += "---|";
    out += "---|\n";

    for (const auto& summary : report.strategies) {
        out += "| " + to_string(summary.strategy.tag) + " | ";
        out += fixed2(mean_of(summary.runs, [](const RunMetrics& r) {
                   return static_cast<double>(r.m);
               })) +
               " | ";
        out += by_count ? fixed2(mean_of(summary.runs,
                                         [](const RunMetrics& r) {
                                             return static_cast<double>(r.hit_index);
                                         }))
                        : fixed2(mean_of(summary.runs,
                                         [](const RunMetrics& r) { return r.hit_seconds; }));
        out += " |";
        if (labeled) {
            for (std::size_t s = 0; s < report.structure_ids.size(); ++s) {
                double plain = 0.0, good = 0.0;
                for (const auto& r : summary.runs) {
                    plain += r.per_structure.size() > s ? r.per_structure[s] : 0;
                    good += r.good_per_structure.size() > s ? r.good_per_structure[s] : 0;
                }
                const double denom = summary.runs.empty() ? 1.0 : summary.runs.size();
                out += " " + fixed2(plain / denom) + "(" + fixed2(good / denom) + ") |";
            }
            out += " " +
                   fixed2(mean_of(summary.runs,
                                  [](const RunMetrics& r) { return r.is_percent; })) +
                   "(" +
                   fixed2(mean_of(summary.runs,
                                  [](const RunMetrics& r) { return r.good_is_percent; })) +
                   ") |";
        }
        out += " " + fixed2(mean_of(summary.runs, [](const RunMetrics& r) {
                   return static_cast<double>(r.good_count);
               })) +
               " |\n";
    }

    int failures = 0;
    for (const auto& s : report.strategies) failures += static_cast<int>(s.failures.size());
    if (failures > 0) {
        out += "\nfailed runs: " + std::to_string(failures) + "\n";
        for (const auto& s : report.strategies)
            for (const auto& f : s.failures) out += "- " + f + "\n";
    }
    return out;
}

std::string render_report_csv(const ExperimentReport& report) {
    const bool by_count = report.config.budget.by_count();
    std::string out = "strategy,completed_runs,failed_runs,mean_m,";
    out += by_count ? "mean_hit_count" : "mean_hit_seconds";
    out += ",mean_is_percent,mean_good_is_percent,mean_good_count";
    for (int id : report.structure_ids)
        out += ",mean_s" + std::to_string(id) + ",mean_good_s" + std::to_string(id);
    out += "\n";

    for (const auto& summary : report.strategies) {
        out += to_string(summary.strategy.tag);
        out += "," + std::to_string(summary.runs.size());
        out += "," + std::to_string(summary.failures.size());
        out += "," + fixed4(mean_of(summary.runs, [](const RunMetrics& r) {
                   return static_cast<double>(r.m);
               }));
        out += "," + (by_count ? fixed4(mean_of(summary.runs,
                                                [](const RunMetrics& r) {
                                                    return static_cast<double>(r.hit_index);
                                                }))
                               : fixed4(mean_of(summary.runs, [](const RunMetrics& r) {
                                     return r.hit_seconds;
                                 })));
        out += "," + fixed4(mean_of(summary.runs,
                                    [](const RunMetrics& r) { return r.is_percent; }));
        out += "," + fixed4(mean_of(summary.runs,
                                    [](const RunMetrics& r) { return r.good_is_percent; }));
        out += "," + fixed4(mean_of(summary.runs, [](const RunMetrics& r) {
                   return static_cast<double>(r.good_count);
               }));
        for (std::size_t s = 0; s < report.structure_ids.size(); ++s) {
            double plain = 0.0, good = 0.0;
            for (const auto& r : summary.runs) {
                plain += r.per_structure.size() > s ? r.per_structure[s] : 0;
                good += r.good_per_structure.size() > s ? r.good_per_structure[s] : 0;
            }
            const double denom = summary.runs.empty() ? 1.0 : summary.runs.size();
            out += "," + fixed4(plain / denom) + "," + fixed4(good / denom);
        }
        out += "\n";
    }
    return out;
}

}  // namespace itksf
