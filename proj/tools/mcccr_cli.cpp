// mcccr: resampling, cross-validated evaluation, noise sweeps and report
// aggregation from the command line.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <mcccr/mcccr.hpp>

namespace {

using namespace mcccr;

std::string counts_line(const LabeledDataset& ds) {
    std::ostringstream out;
    const auto counts = ds.class_counts();
    for (ClassId c = 0; c < counts.size(); ++c) out << (c ? " " : "") << class_name(ds, c) << ':' << counts[c];
    return out.str();
}

std::string resolve_input(const std::string& path) {
    namespace fs = std::filesystem;
    if (fs::exists(path) || fs::path(path).is_absolute()) return path;
    if (const char* env = std::getenv(kDataDirEnv); env && *env) {
        const auto candidate = fs::path(env) / path;
        if (fs::exists(candidate)) return candidate.string();
    }
    return path;
}

struct ResampleArgs {
    std::string input;
    std::string format;
    std::string method = "mc-ccr";
    double energy = 0.25;
    std::string p = "2";
    std::string ratio = "balance";
    std::string cleaning = "translation";
    std::string selection = "proportional";
    std::string decomposition = "sampling";
    std::size_t k = 5;
    std::string output;
    std::uint64_t seed = 0;
};

double parse_norm(const std::string& s) {
    if (s == "inf") return kInfinityNorm;
    auto v = detail::parse_double(s);
    if (!v || *v < 1.0) throw Error("invalid p-norm order '" + s + "' (expected a number >= 1 or 'inf')");
    return *v;
}

int cmd_resample(const ResampleArgs& a) {
    const std::string input = resolve_input(a.input);
    const auto format = a.format.empty() ? detect_format(input) : parse_format(a.format);
    const LabeledDataset data = load_dataset(input, format);

    MethodParams params;
    params.kind = parse_method(a.method);
    params.ccr.energy = a.energy;
    params.ccr.p = parse_norm(a.p);
    params.ccr.ratio = parse_ratio(a.ratio);
    params.ccr.cleaning = parse_cleaning(a.cleaning);
    params.ccr.selection = parse_selection(a.selection);
    params.ccr.decomposition = parse_decomposition(a.decomposition);
    params.smote_k = a.k;

    const auto result = resample(data, params, a.seed);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

    write_dataset(result.dataset, a.output, format);
    const std::string sidecar = a.output + ".synthetic.txt";
    std::ofstream side(sidecar);
    if (!side) throw Error("cannot write '" + sidecar + "'");
    for (std::size_t row : result.synthetic_rows()) side << row << '\n';
    side.flush();
    if (!side) throw Error("failed writing '" + sidecar + "'");

    std::cout << "before: " << counts_line(data) << '\n';
    std::cout << "after:  " << counts_line(result.dataset) << '\n';
    std::cout << "synthetic rows: " << result.synthetic_count() << " (listed in " << sidecar << ")\n";
    return 0;
}

struct ExperimentArgs {
    std::string config;
    std::string output;
    std::string format;
    std::string timings;
    std::optional<std::size_t> jobs, outer_folds, outer_repeats, inner_folds;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> selection_metric, data_dir;
    std::optional<bool> standardize;
    bool dry_run = false;
};

ExperimentConfig load_with_overrides(const ExperimentArgs& a) {
    std::ifstream in(a.config);
    if (!in) throw Error("cannot open config '" + a.config + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("config: " + a.config + ": invalid JSON: " + e.what());
    }
    if (a.data_dir) j["data_dir"] = *a.data_dir;
    ExperimentConfig cfg = parse_config(j, std::filesystem::path(a.config).parent_path().string());
    if (a.jobs) cfg.jobs = *a.jobs;
    if (a.outer_folds) cfg.outer_folds = *a.outer_folds;
    if (a.outer_repeats) cfg.outer_repeats = *a.outer_repeats;
    if (a.inner_folds) cfg.inner_folds = *a.inner_folds;
    if (a.seed) cfg.seed = *a.seed;
    if (a.selection_metric) cfg.selection_metric = parse_metric(*a.selection_metric);
    if (a.standardize) cfg.standardize = *a.standardize;
    return cfg;
}

void print_plan(const ExperimentConfig& cfg) {
    std::size_t total = 0;
    std::cout << "dataset,method,noise,cells\n";
    for (const auto& p : plan_experiment(cfg)) {
        std::cout << p.dataset << ',' << p.method << ',' << p.noise << ',' << p.cells << '\n';
        total += p.cells;
    }
    std::cout << "total cells: " << total << '\n';
}

void write_outputs(const ExperimentReport& report, const ExperimentArgs& a, const std::string& default_output) {
    const std::string out = a.output.empty() ? default_output : a.output;
    const auto fmt = a.format.empty() ? detect_report_format(out) : parse_report_format(a.format);
    emit_report(report, out, fmt, false);
    const std::string timings = a.timings.empty() ? out + ".timings.csv" : a.timings;
    emit_report(report, timings, ReportFormat::csv, true);
    std::cerr << "report: " << out << " (" << report.records.size() << " records; timings in " << timings << ")\n";
}

int cmd_evaluate(const ExperimentArgs& a) {
    ExperimentConfig cfg = load_with_overrides(a);
    cfg.validate();
    if (a.dry_run) {
        print_plan(cfg);
        return 0;
    }
    const auto report = run_experiment(cfg, &std::cerr);
    if (report.records.empty()) throw Error("no experiment cell completed");
    write_outputs(report, a, "report.csv");
    print_aggregate(std::cout, report);
    return 0;
}

int cmd_noise_sweep(const ExperimentArgs& a, const std::string& levels_arg, const std::string& sweep_out) {
    ExperimentConfig cfg = load_with_overrides(a);
    std::vector<double> levels = default_noise_levels();
    if (!levels_arg.empty()) {
        levels.clear();
        for (const auto& f : detail::split_fields(levels_arg)) {
            auto v = detail::parse_double(f);
            if (!v || *v < 0.0 || *v > 1.0) throw Error("--levels: invalid noise level '" + f + "'");
            levels.push_back(*v);
        }
    }
    const NoiseSetting base = cfg.noise.front();
    cfg.noise.clear();
    for (double l : levels) {
        NoiseSetting s = base;
        s.level = l;
        cfg.noise.push_back(s);
    }
    cfg.validate();
    if (a.dry_run) {
        print_plan(cfg);
        return 0;
    }
    const auto report = run_experiment(cfg, &std::cerr);
    if (report.records.empty()) throw Error("no experiment cell completed");
    if (!a.output.empty()) write_outputs(report, a, a.output);
    const std::string out = sweep_out.empty() ? "noise_sweep.csv" : sweep_out;
    std::ofstream f(out);
    if (!f) throw Error("cannot write '" + out + "'");
    write_noise_sweep(f, report);
    f.flush();
    if (!f) throw Error("failed writing '" + out + "'");
    write_noise_sweep(std::cout, report);
    std::cerr << "sweep: " << out << '\n';
    return 0;
}

int cmd_report(const std::string& path, const std::string& metric) {
    const auto report = load_report(path);
    if (metric.empty()) {
        print_aggregate(std::cout, report);
        return 0;
    }
    const Metric m = parse_metric(metric);
    bool first = true;
    for (const auto& t : aggregate(report)) {
        if (!first) std::cout << '\n';
        first = false;
        print_table(std::cout, t, m);
    }
    return 0;
}

void add_experiment_options(CLI::App* cmd, ExperimentArgs& a) {
    cmd->add_option("config", a.config, "Experiment configuration (JSON)")->required();
    cmd->add_option("--output,-o", a.output, "Report file (.csv or .json)");
    cmd->add_option("--format", a.format, "Report format: json or csv (default: from extension)");
    cmd->add_option("--timings", a.timings, "Timing sidecar (default: <output>.timings.csv)");
    cmd->add_option("--jobs,-j", a.jobs, "Worker threads; output is identical for every value");
    cmd->add_option("--outer-folds", a.outer_folds, "Override outer_folds");
    cmd->add_option("--outer-repeats", a.outer_repeats, "Override outer_repeats");
    cmd->add_option("--inner-folds", a.inner_folds, "Override inner_folds");
    cmd->add_option("--seed", a.seed, "Override seed");
    cmd->add_option("--selection-metric", a.selection_metric, "Override selection_metric");
    cmd->add_option("--standardize", a.standardize, "Override standardize (true/false)");
    cmd->add_option("--data-dir", a.data_dir, "Override data_dir");
    cmd->add_flag("--dry-run", a.dry_run, "Print the cell plan without running");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MC-CCR resampling and imbalanced-classification experiments"};
    app.require_subcommand(1);

    ResampleArgs ra;
    auto* rs = app.add_subcommand("resample", "Resample a dataset and write it with synthetic rows appended");
    rs->add_option("--input,-i", ra.input, "Input dataset (KEEL .dat or .csv)")->required();
    rs->add_option("--format", ra.format, "keel or csv (default: from extension)");
    rs->add_option("--method", ra.method, "mc-ccr, smote-all or none");
    rs->add_option("--energy", ra.energy, "Sphere expansion energy");
    rs->add_option("--p", ra.p, "p-norm order (number >= 1 or inf)");
    rs->add_option("--ratio", ra.ratio, "balance or a percentage of the class size");
    rs->add_option("--cleaning", ra.cleaning, "translation, removal or ignoring");
    rs->add_option("--selection", ra.selection, "proportional or random");
    rs->add_option("--decomposition", ra.decomposition, "sampling or complete");
    rs->add_option("--k", ra.k, "SMOTE neighbour count");
    rs->add_option("--output,-o", ra.output, "Output dataset path")->required();
    rs->add_option("--seed", ra.seed, "Random seed");

    ExperimentArgs ea;
    auto* ev = app.add_subcommand("evaluate", "Run a cross-validated experiment and print the rank tables");
    add_experiment_options(ev, ea);

    ExperimentArgs na;
    std::string levels, sweep_out;
    auto* ns = app.add_subcommand("noise-sweep", "Run an experiment across label-noise levels");
    add_experiment_options(ns, na);
    ns->add_option("--levels", levels, "Comma-separated noise levels (default 0,0.05,0.1,0.15,0.2,0.25)");
    ns->add_option("--sweep-output", sweep_out, "Plot-ready sweep CSV (default noise_sweep.csv)");

    std::string report_path, report_metric;
    auto* rp = app.add_subcommand("report", "Aggregate an existing report into rank tables");
    rp->add_option("report", report_path, "Report file (.csv or .json)")->required();
    rp->add_option("--metric", report_metric, "Only this metric: avacc, cba, mgm or cen");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*rs) return cmd_resample(ra);
        if (*ev) return cmd_evaluate(ea);
        if (*ns) return cmd_noise_sweep(na, levels, sweep_out);
        if (*rp) return cmd_report(report_path, report_metric);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
