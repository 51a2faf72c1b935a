#pragma once

// Declarative experiment configuration (JSON). Schema, all keys optional
// unless noted:
//
//   datasets        (required) array of paths or {"path", "format", "name"}
//   data_dir        base directory for relative dataset paths
//   methods         (required) array of {"name": "mc-ccr"|"smote-all"|"none",
//                   "label", "energy", "p", "ratio", "cleaning", "selection",
//                   "decomposition", "k"}; every grid key takes an array
//   classifier      {"k": [...], "p": number}
//   outer_folds, outer_repeats, inner_folds   integers
//   selection_metric                          "avacc"|"cba"|"mgm"|"cen"
//   noise           array of numbers or {"level", "affected_classes", "seed"}
//   standardize     boolean
//   seed, jobs      integers
//
// Relative dataset paths resolve against data_dir (itself relative to the
// config file), then the MCCCR_DATA_DIR
// environment variable, then the directory holding the config file.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "experiment.hpp"

namespace mcccr {

inline constexpr const char* kDataDirEnv = "MCCCR_DATA_DIR";

namespace detail {

using json = nlohmann::json;

inline Error config_error(const std::string& path, const std::string& msg) {
    return Error("config: " + path + ": " + msg);
}

inline const json& expect_array(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw config_error(path, "expected a non-empty array");
    return j;
}

inline double expect_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw config_error(path, "expected a number");
    return j.get<double>();
}

inline std::size_t expect_count(const json& j, const std::string& path, std::size_t min_value) {
    if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min_value)) {
        throw config_error(path, "expected an integer >= " + std::to_string(min_value));
    }
    return j.get<std::size_t>();
}

inline std::string expect_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw config_error(path, "expected a string");
    return j.get<std::string>();
}

template <typename T, typename F>
std::vector<T> parse_grid(const json& obj, const char* key, const std::string& path, std::vector<T> fallback, F convert) {
    if (!obj.contains(key)) return fallback;
    const std::string p = path + "." + key;
    std::vector<T> out;
    const json& arr = obj.at(key).is_array() ? obj.at(key) : json::array({obj.at(key)});
    expect_array(arr, p);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string ip = p + "[" + std::to_string(i) + "]";
        try {
            out.push_back(convert(arr[i], ip));
        } catch (const Error& e) {
            const std::string what = e.what();
            if (what.rfind("config: ", 0) == 0) throw;
            throw config_error(ip, what);
        }
    }
    return out;
}

inline std::string resolve_path(const std::string& p, const std::string& data_dir, const std::string& config_dir) {
    namespace fs = std::filesystem;
    if (p.empty() || fs::path(p).is_absolute()) return p;
    if (!data_dir.empty()) {
        fs::path base(data_dir);
        if (base.is_relative() && !config_dir.empty()) base = fs::path(config_dir) / base;
        return (base / p).string();
    }
    if (const char* env = std::getenv(kDataDirEnv); env && *env) return (fs::path(env) / p).string();
    if (!config_dir.empty()) return (fs::path(config_dir) / p).string();
    return p;
}

inline void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw config_error(path + "." + it.key(), "unknown key");
    }
}

}  // namespace detail

inline MethodSpec parse_method_spec(const nlohmann::json& j, const std::string& path) {
    using namespace detail;
    if (!j.is_object()) throw config_error(path, "expected an object");
    check_keys(j, path, {"name", "label", "energy", "p", "ratio", "cleaning", "selection", "decomposition", "k"});
    if (!j.contains("name")) throw config_error(path + ".name", "missing required key");
    MethodSpec m;
    try {
        m.kind = parse_method(expect_string(j.at("name"), path + ".name"));
    } catch (const Error& e) {
        if (std::string(e.what()).rfind("config: ", 0) == 0) throw;
        throw config_error(path + ".name", e.what());
    }
    if (j.contains("label")) m.label = expect_string(j.at("label"), path + ".label");
    m.energy = parse_grid<double>(j, "energy", path, m.energy, [](const json& v, const std::string& p) {
        const double e = expect_number(v, p);
        if (!(e > 0.0)) throw config_error(p, "energy must be positive");
        return e;
    });
    m.p = parse_grid<double>(j, "p", path, m.p, [](const json& v, const std::string& p) {
        if (v.is_string() && v.get<std::string>() == "inf") return kInfinityNorm;
        const double e = expect_number(v, p);
        if (!(e >= 1.0)) throw config_error(p, "p-norm order must be >= 1");
        return e;
    });
    m.ratio = parse_grid<OversamplingRatio>(j, "ratio", path, m.ratio, [](const json& v, const std::string& p) {
        if (v.is_string()) return parse_ratio(v.get<std::string>());
        const double r = expect_number(v, p);
        if (!(r > 0.0)) throw config_error(p, "ratio must be positive");
        return OversamplingRatio::of_percent(r);
    });
    m.cleaning = parse_grid<CleaningStrategy>(j, "cleaning", path, m.cleaning, [](const json& v, const std::string& p) {
        return parse_cleaning(expect_string(v, p));
    });
    m.selection = parse_grid<SelectionStrategy>(j, "selection", path, m.selection, [](const json& v, const std::string& p) {
        return parse_selection(expect_string(v, p));
    });
    m.decomposition = parse_grid<Decomposition>(j, "decomposition", path, m.decomposition,
                                                [](const json& v, const std::string& p) {
                                                    return parse_decomposition(expect_string(v, p));
                                                });
    m.smote_k = parse_grid<std::size_t>(j, "k", path, m.smote_k, [](const json& v, const std::string& p) {
        return expect_count(v, p, 1);
    });
    return m;
}

inline ExperimentConfig parse_config(const nlohmann::json& j, const std::string& config_dir = "") {
    using namespace detail;
    if (!j.is_object()) throw config_error("<root>", "expected an object");
    check_keys(j, "<root>", {"datasets", "data_dir", "methods", "classifier", "outer_folds", "outer_repeats",
                             "inner_folds", "selection_metric", "noise", "standardize", "seed", "jobs"});
    ExperimentConfig cfg;
    const std::string data_dir = j.contains("data_dir") ? expect_string(j.at("data_dir"), "data_dir") : "";

    if (!j.contains("datasets")) throw config_error("datasets", "missing required key");
    const auto& ds = expect_array(j.at("datasets"), "datasets");
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::string p = "datasets[" + std::to_string(i) + "]";
        DatasetSource src;
        if (ds[i].is_string()) {
            src.path = ds[i].get<std::string>();
        } else if (ds[i].is_object()) {
            check_keys(ds[i], p, {"path", "format", "name"});
            if (!ds[i].contains("path")) throw config_error(p + ".path", "missing required key");
            src.path = expect_string(ds[i].at("path"), p + ".path");
            if (ds[i].contains("name")) src.name = expect_string(ds[i].at("name"), p + ".name");
            if (ds[i].contains("format")) {
                try {
                    src.format = parse_format(expect_string(ds[i].at("format"), p + ".format"));
                } catch (const Error& e) {
                    if (std::string(e.what()).rfind("config: ", 0) == 0) throw;
                    throw config_error(p + ".format", e.what());
                }
            }
        } else {
            throw config_error(p, "expected a path string or an object");
        }
        src.path = resolve_path(src.path, data_dir, config_dir);
        cfg.datasets.push_back(std::move(src));
    }

    if (!j.contains("methods")) throw config_error("methods", "missing required key");
    const auto& ms = expect_array(j.at("methods"), "methods");
    for (std::size_t i = 0; i < ms.size(); ++i) cfg.methods.push_back(parse_method_spec(ms[i], "methods[" + std::to_string(i) + "]"));

    if (j.contains("classifier")) {
        const auto& c = j.at("classifier");
        if (!c.is_object()) throw config_error("classifier", "expected an object");
        check_keys(c, "classifier", {"k", "p"});
        cfg.knn_k = parse_grid<std::size_t>(c, "k", "classifier", cfg.knn_k, [](const json& v, const std::string& p) {
            return expect_count(v, p, 1);
        });
        if (c.contains("p")) {
            cfg.knn_p = expect_number(c.at("p"), "classifier.p");
            if (!(cfg.knn_p >= 1.0)) throw config_error("classifier.p", "p-norm order must be >= 1");
        }
    }
    if (j.contains("outer_folds")) cfg.outer_folds = expect_count(j.at("outer_folds"), "outer_folds", 2);
    if (j.contains("outer_repeats")) cfg.outer_repeats = expect_count(j.at("outer_repeats"), "outer_repeats", 1);
    if (j.contains("inner_folds")) cfg.inner_folds = expect_count(j.at("inner_folds"), "inner_folds", 2);
    if (j.contains("selection_metric")) {
        try {
            cfg.selection_metric = parse_metric(expect_string(j.at("selection_metric"), "selection_metric"));
        } catch (const Error& e) {
            if (std::string(e.what()).rfind("config: ", 0) == 0) throw;
            throw config_error("selection_metric", e.what());
        }
    }
    if (j.contains("noise")) {
        const auto& ns = expect_array(j.at("noise"), "noise");
        cfg.noise.clear();
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const std::string p = "noise[" + std::to_string(i) + "]";
            NoiseSetting s;
            if (ns[i].is_number()) {
                s.level = ns[i].get<double>();
            } else if (ns[i].is_object()) {
                check_keys(ns[i], p, {"level", "affected_classes", "seed"});
                if (!ns[i].contains("level")) throw config_error(p + ".level", "missing required key");
                s.level = expect_number(ns[i].at("level"), p + ".level");
                if (ns[i].contains("affected_classes")) {
                    const auto& ac = ns[i].at("affected_classes");
                    if (!ac.is_array()) throw config_error(p + ".affected_classes", "expected an array");
                    for (std::size_t k = 0; k < ac.size(); ++k) {
                        if (ac[k].is_number_integer() && ac[k].get<long long>() >= 0) s.class_ids.push_back(ac[k].get<ClassId>());
                        else if (ac[k].is_string()) s.class_names.push_back(ac[k].get<std::string>());
                        else throw config_error(p + ".affected_classes[" + std::to_string(k) + "]", "expected a class id or name");
                    }
                }
                if (ns[i].contains("seed")) s.seed = expect_count(ns[i].at("seed"), p + ".seed", 0);
            } else {
                throw config_error(p, "expected a number or an object");
            }
            if (!(s.level >= 0.0 && s.level <= 1.0)) throw config_error(p, "noise level must lie in [0, 1]");
            cfg.noise.push_back(std::move(s));
        }
    }
    if (j.contains("standardize")) {
        if (!j.at("standardize").is_boolean()) throw config_error("standardize", "expected a boolean");
        cfg.standardize = j.at("standardize").get<bool>();
    }
    if (j.contains("seed")) cfg.seed = expect_count(j.at("seed"), "seed", 0);
    if (j.contains("jobs")) cfg.jobs = expect_count(j.at("jobs"), "jobs", 1);
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("config: " + path + ": invalid JSON: " + e.what());
    }
    return parse_config(j, std::filesystem::path(path).parent_path().string());
}

}  // namespace mcccr
