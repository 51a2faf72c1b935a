#pragma once

// Cross-validated evaluation harness. For every (dataset, noise spec, repeat,
// outer fold, method) cell the training split is noise-injected, parameters
// are chosen by inner stratified CV, the winner is refit on the whole
// training split and the untouched test split is scored with k-NN.
//
// Every cell derives its random streams from the master seed and its own
// coordinates, so results do not depend on execution order or thread count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dataset.hpp"
#include "evaluation.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "noise.hpp"
#include "resample.hpp"

namespace mcccr {

/// Energy grid: the 1 / 2.5 / 5 decade pattern from 0.001 to 100.
inline std::vector<double> default_energy_grid() {
    return {0.001, 0.0025, 0.005, 0.01, 0.025, 0.05, 0.1, 0.25, 0.5, 1.0, 2.5, 5.0, 10.0, 25.0, 50.0, 100.0};
}

inline std::vector<OversamplingRatio> default_ratio_grid() {
    std::vector<OversamplingRatio> out;
    for (int r = 50; r <= 500; r += 50) out.push_back(OversamplingRatio::of_percent(r));
    return out;
}

inline std::vector<std::size_t> default_knn_grid() { return {1, 3, 5, 7, 9, 11}; }

inline std::vector<double> default_noise_levels() { return {0.0, 0.05, 0.1, 0.15, 0.2, 0.25}; }

struct MethodSpec {
    std::string label;
    MethodKind kind = MethodKind::mc_ccr;
    std::vector<double> energy = default_energy_grid();
    std::vector<double> p = {2.0};
    std::vector<OversamplingRatio> ratio = default_ratio_grid();
    std::vector<CleaningStrategy> cleaning = {CleaningStrategy::translation};
    std::vector<SelectionStrategy> selection = {SelectionStrategy::proportional};
    std::vector<Decomposition> decomposition = {Decomposition::sampling};
    std::vector<std::size_t> smote_k = {5};

    std::string name() const { return label.empty() ? std::string(to_string(kind)) : label; }

    /// Cartesian product of the grids relevant to this method.
    std::vector<MethodParams> expand() const {
        std::vector<MethodParams> out;
        if (kind == MethodKind::none) {
            out.push_back(MethodParams{MethodKind::none, {}, 0});
            return out;
        }
        if (kind == MethodKind::smote_all) {
            for (std::size_t k : smote_k)
                for (const auto& r : ratio) {
                    MethodParams mp{MethodKind::smote_all, {}, k};
                    mp.ccr.ratio = r;
                    out.push_back(mp);
                }
            return out;
        }
        for (auto c : cleaning)
            for (auto s : selection)
                for (auto d : decomposition)
                    for (double pp : p)
                        for (const auto& r : ratio)
                            for (double e : energy) {
                                MethodParams mp;
                                mp.kind = MethodKind::mc_ccr;
                                mp.ccr.energy = e;
                                mp.ccr.p = pp;
                                mp.ccr.ratio = r;
                                mp.ccr.cleaning = c;
                                mp.ccr.selection = s;
                                mp.ccr.decomposition = d;
                                out.push_back(mp);
                            }
        return out;
    }
};

struct NoiseSetting {
    double level = 0.0;
    /// Affected classes by id; names are resolved per dataset.
    std::vector<ClassId> class_ids;
    std::vector<std::string> class_names;
    std::uint64_t seed = 0;

    std::string describe_classes() const {
        if (class_ids.empty() && class_names.empty()) return "all";
        std::string s;
        for (ClassId c : class_ids) s += (s.empty() ? "" : "|") + std::to_string(c);
        for (const auto& n : class_names) s += (s.empty() ? "" : "|") + n;
        return s;
    }
};

struct DatasetSource {
    std::string name;
    std::string path;
    std::optional<DatasetFormat> format;
    /// Preloaded data; used instead of `path` when set.
    std::optional<LabeledDataset> data;
};

struct ExperimentConfig {
    std::vector<DatasetSource> datasets;
    std::vector<MethodSpec> methods;
    std::vector<std::size_t> knn_k = default_knn_grid();
    double knn_p = 2.0;
    std::size_t outer_folds = 10;
    std::size_t outer_repeats = 10;
    std::size_t inner_folds = 3;
    Metric selection_metric = Metric::cba;
    std::vector<NoiseSetting> noise = {NoiseSetting{}};
    bool standardize = false;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;

    void validate() const {
        if (outer_folds < 2) throw Error("outer_folds must be >= 2");
        if (inner_folds < 2) throw Error("inner_folds must be >= 2");
        if (outer_repeats < 1) throw Error("outer_repeats must be >= 1");
        if (datasets.empty()) throw Error("datasets: at least one dataset is required");
        if (methods.empty()) throw Error("methods: at least one method is required");
        if (knn_k.empty()) throw Error("classifier.k: grid must not be empty");
        if (noise.empty()) throw Error("noise: at least one noise setting is required");
        for (const auto& m : methods) {
            if (m.expand().empty()) throw Error("methods." + m.name() + ": parameter grid is empty");
        }
    }
};

struct ExperimentRecord {
    std::string dataset;
    std::string method;
    double noise_level = 0.0;
    std::string noise_classes = "all";
    std::size_t repeat = 0;
    std::size_t fold = 0;
    std::string params;
    MetricReport metrics;
    double resample_seconds = 0.0;
    double total_seconds = 0.0;
};

struct ExperimentReport {
    std::vector<ExperimentRecord> records;
    std::vector<std::string> skipped;
};

inline bool better(double candidate, double incumbent, Metric metric) {
    return higher_is_better(metric) ? candidate > incumbent : candidate < incumbent;
}

inline double worst_score(Metric metric) {
    return higher_is_better(metric) ? -std::numeric_limits<double>::infinity()
                                    : std::numeric_limits<double>::infinity();
}

struct Selection {
    MethodParams params;
    std::size_t knn_k = 1;
    double score = 0.0;
};

namespace detail {

struct PreparedSplit {
    LabeledDataset train;
    Matrix test;
};

inline PreparedSplit prepare(const LabeledDataset& data, std::span<const std::size_t> train_rows,
                             const Matrix& test_raw, bool standardize) {
    PreparedSplit out{data.subset(train_rows), test_raw};
    if (standardize) {
        Standardizer s;
        s.fit(out.train.features);
        out.train.features = s.transform(out.train.features);
        out.test = s.transform(test_raw);
    }
    return out;
}

inline std::string describe_selection(const Selection& s) {
    std::string d = s.params.describe();
    return d + (d.empty() ? "" : ";") + "knn_k=" + std::to_string(s.knn_k);
}

}  // namespace detail

/// Grid search by inner stratified CV on `train`; the mean fold score under
/// `metric` decides. Ties keep the earlier grid point.
inline Selection select_parameters(const LabeledDataset& train, const MethodSpec& method,
                                   const ExperimentConfig& config, std::uint64_t seed) {
    const auto grid = method.expand();
    Rng fold_rng(derive_seed(seed, {0x494e4e45ULL}));
    const auto plan = stratified_folds(train.labels, config.inner_folds, fold_rng);
    const std::size_t k_max = *std::max_element(config.knn_k.begin(), config.knn_k.end());
    const std::size_t classes = train.class_count();

    Selection best{grid.front(), config.knn_k.front(), worst_score(config.selection_metric)};
    bool found = false;
    if (grid.size() == 1 && config.knn_k.size() == 1) {
        best.score = 0.0;
        return best;
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::vector<double> totals(config.knn_k.size(), 0.0);
        bool ok = true;
        for (std::size_t f = 0; f < plan.folds.size() && ok; ++f) {
            const auto& fold = plan.folds[f];
            if (fold.test.empty() || fold.train.empty()) continue;
            const Matrix test_raw = train.features.select_rows(fold.test);
            auto split = detail::prepare(train, fold.train, test_raw, config.standardize);
            try {
                const auto resampled = resample(split.train, grid[g], derive_seed(seed, {0x47524944ULL, g, f}));
                const auto nn = nearest_neighbors(resampled.dataset.features, split.test, k_max, config.knn_p);
                std::vector<ClassId> truth(fold.test.size());
                for (std::size_t t = 0; t < fold.test.size(); ++t) truth[t] = train.labels[fold.test[t]];
                for (std::size_t kk = 0; kk < config.knn_k.size(); ++kk) {
                    std::vector<ClassId> pred(fold.test.size());
                    for (std::size_t t = 0; t < nn.size(); ++t)
                        pred[t] = vote(nn[t], resampled.dataset.labels, config.knn_k[kk]);
                    totals[kk] += metric_value(evaluate(confusion_matrix(truth, pred, classes)), config.selection_metric);
                }
            } catch (const Error&) {
                ok = false;
            }
        }
        if (!ok) continue;
        for (std::size_t kk = 0; kk < config.knn_k.size(); ++kk) {
            const double score = totals[kk] / static_cast<double>(plan.folds.size());
            if (!found || better(score, best.score, config.selection_metric)) {
                best = {grid[g], config.knn_k[kk], score};
                found = true;
            }
        }
    }
    if (!found) throw Error("every grid point failed during parameter selection");
    return best;
}

namespace detail {

struct LoadedDataset {
    std::string name;
    LabeledDataset data;
    std::vector<FoldPlan> plans;  // one per repeat
};

struct Cell {
    std::size_t dataset, noise, repeat, fold, method;
};

inline std::vector<ClassId> resolve_noise_classes(const NoiseSetting& s, const LabeledDataset& d) {
    std::vector<ClassId> ids = s.class_ids;
    for (const auto& n : s.class_names) {
        const auto it = std::find(d.class_names.begin(), d.class_names.end(), n);
        if (it == d.class_names.end()) throw Error("noise: class '" + n + "' not present in dataset");
        ids.push_back(static_cast<ClassId>(it - d.class_names.begin()));
    }
    return ids;
}

inline std::string dataset_display_name(const DatasetSource& src) {
    if (!src.name.empty()) return src.name;
    std::string base = src.path.substr(src.path.find_last_of("/\\") + 1);
    const auto dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

}  // namespace detail

/// Runs one cell; throws on failure.
inline ExperimentRecord run_cell(const detail::LoadedDataset& ds, const ExperimentConfig& config,
                                 const detail::Cell& cell) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const auto& setting = config.noise[cell.noise];
    const auto& method = config.methods[cell.method];
    const auto& fold = ds.plans[cell.repeat].folds[cell.fold];
    if (fold.test.empty()) throw Error("empty test fold");

    LabeledDataset train = ds.data.subset(fold.train);
    NoiseSpec spec;
    spec.level = setting.level;
    spec.affected_classes = detail::resolve_noise_classes(setting, ds.data);
    spec.seed = derive_seed(config.seed ^ setting.seed, {0x4e4f4953ULL, cell.dataset, cell.noise, cell.repeat, cell.fold});
    train = inject_noise(train, spec).dataset;

    const std::uint64_t cell_seed =
        derive_seed(config.seed, {0x43454c4cULL, cell.dataset, cell.noise, cell.repeat, cell.fold, cell.method});
    const Selection chosen = select_parameters(train, method, config, cell_seed);

    std::vector<std::size_t> all(train.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    auto split = detail::prepare(train, all, ds.data.features.select_rows(fold.test), config.standardize);

    const auto resample_start = clock::now();
    const auto resampled = resample(split.train, chosen.params, derive_seed(cell_seed, {0x46494e41ULL}));
    const double resample_seconds = std::chrono::duration<double>(clock::now() - resample_start).count();

    const auto pred = knn_classify(resampled.dataset, split.test, chosen.knn_k, config.knn_p);
    std::vector<ClassId> truth;
    for (std::size_t t : fold.test) truth.push_back(ds.data.labels[t]);

    ExperimentRecord rec;
    rec.dataset = ds.name;
    rec.method = method.name();
    rec.noise_level = setting.level;
    rec.noise_classes = setting.describe_classes();
    rec.repeat = cell.repeat;
    rec.fold = cell.fold;
    rec.params = detail::describe_selection(chosen);
    rec.metrics = evaluate(confusion_matrix(truth, pred, ds.data.class_count()));
    rec.resample_seconds = resample_seconds;
    rec.total_seconds = std::chrono::duration<double>(clock::now() - start).count();
    return rec;
}

struct CellPlan {
    std::string dataset;
    std::string method;
    std::string noise;
    std::size_t cells = 0;
};

/// Number of cells per dataset x method x noise setting, without running.
inline std::vector<CellPlan> plan_experiment(const ExperimentConfig& config) {
    std::vector<CellPlan> out;
    for (const auto& d : config.datasets)
        for (const auto& m : config.methods)
            for (const auto& n : config.noise)
                out.push_back({detail::dataset_display_name(d), m.name(),
                               format_number(n.level) + "@" + n.describe_classes(),
                               config.outer_repeats * config.outer_folds});
    return out;
}

inline ExperimentReport run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr) {
    config.validate();
    ExperimentReport report;

    std::vector<detail::LoadedDataset> loaded;
    std::vector<std::size_t> dataset_index;  // coordinate in config.datasets
    for (std::size_t d = 0; d < config.datasets.size(); ++d) {
        const auto& src = config.datasets[d];
        detail::LoadedDataset ds;
        ds.name = detail::dataset_display_name(src);
        try {
            ds.data = src.data ? *src.data : load_dataset(src.path, src.format);
            ds.data.validate();
            if (ds.data.class_count() < 2) throw Error("dataset has fewer than 2 classes");
            for (std::size_t r = 0; r < config.outer_repeats; ++r) {
                Rng rng(derive_seed(config.seed, {0x464f4c44ULL, d, r}));
                ds.plans.push_back(stratified_folds(ds.data.labels, config.outer_folds, rng));
            }
        } catch (const std::exception& e) {
            report.skipped.push_back("dataset '" + ds.name + "' skipped: " + e.what());
            if (log) *log << "skip: dataset '" << ds.name << "': " << e.what() << '\n';
            continue;
        }
        loaded.push_back(std::move(ds));
        dataset_index.push_back(d);
    }

    std::vector<detail::Cell> cells;
    std::vector<std::size_t> cell_loaded;
    for (std::size_t l = 0; l < loaded.size(); ++l)
        for (std::size_t s = 0; s < config.noise.size(); ++s)
            for (std::size_t r = 0; r < config.outer_repeats; ++r)
                for (std::size_t f = 0; f < config.outer_folds; ++f)
                    for (std::size_t m = 0; m < config.methods.size(); ++m) {
                        cells.push_back({dataset_index[l], s, r, f, m});
                        cell_loaded.push_back(l);
                    }

    std::vector<std::optional<ExperimentRecord>> results(cells.size());
    std::vector<std::string> failures(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                results[i] = run_cell(loaded[cell_loaded[i]], config, cells[i]);
            } catch (const std::exception& e) {
                const auto& c = cells[i];
                failures[i] = "cell " + loaded[cell_loaded[i]].name + "/" + config.methods[c.method].name() +
                              " noise=" + format_number(config.noise[c.noise].level) + " repeat=" +
                              std::to_string(c.repeat) + " fold=" + std::to_string(c.fold) + " skipped: " + e.what();
                if (log) {
                    std::lock_guard lock(log_mutex);
                    *log << "skip: " << failures[i] << '\n';
                }
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, cells.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (results[i]) report.records.push_back(std::move(*results[i]));
        else report.skipped.push_back(failures[i]);
    }
    return report;
}

}  // namespace mcccr
