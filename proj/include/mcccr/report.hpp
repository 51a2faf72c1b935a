#pragma once

// Report serialisation and aggregation.
//
// CSV column order (stable):
//   dataset, method, noise_level, noise_classes, repeat, fold, params,
//   avacc, cba, mgm, cen, warnings [, resample_seconds, total_seconds]
// Warnings are joined with '|'. JSON reports are an array of objects with the
// same keys. Metric values are written in shortest round-trip form.

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "experiment.hpp"
#include "metrics.hpp"

namespace mcccr {

enum class ReportFormat { json, csv };

inline ReportFormat parse_report_format(std::string_view s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    throw Error("unknown report format '" + std::string(s) + "' (expected json or csv)");
}

inline ReportFormat detect_report_format(const std::string& path) {
    return path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? ReportFormat::json : ReportFormat::csv;
}

inline nlohmann::ordered_json to_json(const MetricReport& m) {
    return {{"avacc", m.avacc}, {"cba", m.cba}, {"mgm", m.mgm}, {"cen", m.cen}, {"warnings", m.warnings}};
}

namespace detail {

inline std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? std::string(1, sep) : "") + parts[i];
    return out;
}

inline std::vector<std::string> split_nonempty(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    for (;;) {
        const auto end = s.find(sep, start);
        out.push_back(s.substr(start, end == std::string::npos ? std::string::npos : end - start));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::vector<std::string> csv_split_quoted(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

inline const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols = {"dataset", "method", "noise_level", "noise_classes", "repeat", "fold",
                                                  "params", "avacc", "cba", "mgm", "cen", "warnings"};
    return cols;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const ExperimentRecord& r, bool include_timing) {
    nlohmann::ordered_json j = {{"dataset", r.dataset},
                                {"method", r.method},
                                {"noise_level", r.noise_level},
                                {"noise_classes", r.noise_classes},
                                {"repeat", r.repeat},
                                {"fold", r.fold},
                                {"params", r.params},
                                {"avacc", r.metrics.avacc},
                                {"cba", r.metrics.cba},
                                {"mgm", r.metrics.mgm},
                                {"cen", r.metrics.cen},
                                {"warnings", detail::join(r.metrics.warnings, '|')}};
    if (include_timing) {
        j["resample_seconds"] = r.resample_seconds;
        j["total_seconds"] = r.total_seconds;
    }
    return j;
}

inline void write_report(std::ostream& out, const ExperimentReport& report, ReportFormat format,
                         bool include_timing = false) {
    if (format == ReportFormat::json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : report.records) arr.push_back(to_json(r, include_timing));
        out << arr.dump(2) << '\n';
        return;
    }
    out << detail::join(detail::report_columns(), ',');
    if (include_timing) out << ",resample_seconds,total_seconds";
    out << '\n';
    for (const auto& r : report.records) {
        out << detail::csv_escape(r.dataset) << ',' << detail::csv_escape(r.method) << ','
            << format_number(r.noise_level) << ',' << detail::csv_escape(r.noise_classes) << ',' << r.repeat << ','
            << r.fold << ',' << detail::csv_escape(r.params) << ',' << format_number(r.metrics.avacc) << ','
            << format_number(r.metrics.cba) << ',' << format_number(r.metrics.mgm) << ','
            << format_number(r.metrics.cen) << ',' << detail::csv_escape(detail::join(r.metrics.warnings, '|'));
        if (include_timing) out << ',' << format_number(r.resample_seconds) << ',' << format_number(r.total_seconds);
        out << '\n';
    }
}

inline void emit_report(const ExperimentReport& report, const std::string& path, ReportFormat format,
                        bool include_timing = false) {
    if (report.records.empty()) throw Error("refusing to write an empty report to '" + path + "'");
    std::ofstream out(path);
    if (!out) throw Error("cannot write report '" + path + "'");
    write_report(out, report, format, include_timing);
    out.flush();
    if (!out) throw Error("failed writing report '" + path + "'");
}

inline ExperimentRecord record_from_json(const nlohmann::json& j) {
    ExperimentRecord r;
    r.dataset = j.at("dataset").get<std::string>();
    r.method = j.at("method").get<std::string>();
    r.noise_level = j.at("noise_level").get<double>();
    r.noise_classes = j.value("noise_classes", std::string("all"));
    r.repeat = j.value("repeat", std::size_t{0});
    r.fold = j.value("fold", std::size_t{0});
    r.params = j.value("params", std::string());
    r.metrics.avacc = j.at("avacc").get<double>();
    r.metrics.cba = j.at("cba").get<double>();
    r.metrics.mgm = j.at("mgm").get<double>();
    r.metrics.cen = j.at("cen").get<double>();
    r.metrics.warnings = detail::split_nonempty(j.value("warnings", std::string()), '|');
    r.resample_seconds = j.value("resample_seconds", 0.0);
    r.total_seconds = j.value("total_seconds", 0.0);
    return r;
}

inline ExperimentReport read_report(std::istream& in, ReportFormat format) {
    ExperimentReport report;
    if (format == ReportFormat::json) {
        const auto j = nlohmann::json::parse(in);
        if (!j.is_array()) throw Error("report JSON must be an array of records");
        for (const auto& item : j) report.records.push_back(record_from_json(item));
        return report;
    }
    std::string line;
    if (!std::getline(in, line)) throw Error("report CSV is empty");
    const auto header = detail::csv_split_quoted(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const auto& name : detail::report_columns()) {
        if (!col.count(name)) throw Error("report CSV lacks column '" + name + "'");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = detail::csv_split_quoted(line);
        if (f.size() != header.size()) throw Error("report CSV line " + std::to_string(line_no) + ": wrong field count");
        nlohmann::json j;
        j["dataset"] = f[col["dataset"]];
        j["method"] = f[col["method"]];
        j["noise_level"] = std::stod(f[col["noise_level"]]);
        j["noise_classes"] = f[col["noise_classes"]];
        j["repeat"] = std::stoull(f[col["repeat"]]);
        j["fold"] = std::stoull(f[col["fold"]]);
        j["params"] = f[col["params"]];
        for (const char* m : {"avacc", "cba", "mgm", "cen"}) j[m] = std::stod(f[col[m]]);
        j["warnings"] = f[col["warnings"]];
        if (col.count("resample_seconds")) j["resample_seconds"] = std::stod(f[col["resample_seconds"]]);
        if (col.count("total_seconds")) j["total_seconds"] = std::stod(f[col["total_seconds"]]);
        report.records.push_back(record_from_json(j));
    }
    return report;
}

inline ExperimentReport load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open report '" + path + "'");
    return read_report(in, detect_report_format(path));
}

/// Per (noise setting, dataset, method) means plus mean ranks over datasets.
struct AggregateTable {
    std::string noise;
    std::vector<std::string> datasets;
    std::vector<std::string> methods;
    /// means[metric][dataset][method]; NaN where no record exists.
    std::map<Metric, std::vector<std::vector<double>>> means;
    std::map<Metric, std::vector<double>> ranks;
    std::vector<std::vector<std::size_t>> counts;
};

inline std::vector<AggregateTable> aggregate(const ExperimentReport& report) {
    std::vector<std::string> noises;
    for (const auto& r : report.records) {
        const std::string key = format_number(r.noise_level) + "@" + r.noise_classes;
        if (std::find(noises.begin(), noises.end(), key) == noises.end()) noises.push_back(key);
    }
    constexpr Metric all_metrics[] = {Metric::avacc, Metric::cba, Metric::mgm, Metric::cen};
    std::vector<AggregateTable> out;
    for (const auto& noise : noises) {
        AggregateTable t;
        t.noise = noise;
        std::vector<const ExperimentRecord*> recs;
        for (const auto& r : report.records) {
            if (format_number(r.noise_level) + "@" + r.noise_classes != noise) continue;
            recs.push_back(&r);
            if (std::find(t.datasets.begin(), t.datasets.end(), r.dataset) == t.datasets.end()) t.datasets.push_back(r.dataset);
            if (std::find(t.methods.begin(), t.methods.end(), r.method) == t.methods.end()) t.methods.push_back(r.method);
        }
        const std::size_t nd = t.datasets.size(), nm = t.methods.size();
        t.counts.assign(nd, std::vector<std::size_t>(nm, 0));
        for (Metric m : all_metrics) t.means[m].assign(nd, std::vector<double>(nm, 0.0));
        for (const auto* r : recs) {
            const auto d = static_cast<std::size_t>(std::find(t.datasets.begin(), t.datasets.end(), r->dataset) - t.datasets.begin());
            const auto k = static_cast<std::size_t>(std::find(t.methods.begin(), t.methods.end(), r->method) - t.methods.begin());
            ++t.counts[d][k];
            for (Metric m : all_metrics) t.means[m][d][k] += metric_value(r->metrics, m);
        }
        std::vector<std::size_t> complete_rows;
        for (std::size_t d = 0; d < nd; ++d) {
            bool complete = true;
            for (std::size_t k = 0; k < nm; ++k) {
                if (t.counts[d][k] == 0) {
                    complete = false;
                    for (Metric m : all_metrics) t.means[m][d][k] = std::numeric_limits<double>::quiet_NaN();
                } else {
                    for (Metric m : all_metrics) t.means[m][d][k] /= static_cast<double>(t.counts[d][k]);
                }
            }
            if (complete) complete_rows.push_back(d);
        }
        for (Metric m : all_metrics) {
            std::vector<std::vector<double>> rows;
            for (std::size_t d : complete_rows) rows.push_back(t.means[m][d]);
            t.ranks[m] = rows.empty() ? std::vector<double>(nm, std::numeric_limits<double>::quiet_NaN())
                                      : mean_ranks(rows, higher_is_better(m));
        }
        out.push_back(std::move(t));
    }
    return out;
}

/// Dataset-by-method table of one metric with an "Avg. rank" footer.
/// Scores other than CEN are printed as percentages.
inline void print_table(std::ostream& out, const AggregateTable& t, Metric metric) {
    const bool percent = metric != Metric::cen;
    std::size_t w0 = std::string("Avg. rank").size();
    for (const auto& d : t.datasets) w0 = std::max(w0, d.size());
    std::vector<std::size_t> w;
    for (const auto& m : t.methods) w.push_back(std::max<std::size_t>(m.size(), 7));
    out << "metric " << to_string(metric) << (percent ? " [%]" : "") << ", noise " << t.noise << '\n';
    out << std::left << std::setw(static_cast<int>(w0)) << "Dataset";
    for (std::size_t k = 0; k < t.methods.size(); ++k) out << "  " << std::right << std::setw(static_cast<int>(w[k])) << t.methods[k];
    out << '\n';
    char buf[32];
    for (std::size_t d = 0; d < t.datasets.size(); ++d) {
        out << std::left << std::setw(static_cast<int>(w0)) << t.datasets[d];
        for (std::size_t k = 0; k < t.methods.size(); ++k) {
            const double v = t.means.at(metric)[d][k];
            if (std::isnan(v)) std::snprintf(buf, sizeof buf, "-");
            else std::snprintf(buf, sizeof buf, percent ? "%.2f" : "%.3f", percent ? 100.0 * v : v);
            out << "  " << std::right << std::setw(static_cast<int>(w[k])) << buf;
        }
        out << '\n';
    }
    out << std::left << std::setw(static_cast<int>(w0)) << "Avg. rank";
    for (std::size_t k = 0; k < t.methods.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.2f", t.ranks.at(metric)[k]);
        out << "  " << std::right << std::setw(static_cast<int>(w[k])) << buf;
    }
    out << '\n';
}

inline void print_aggregate(std::ostream& out, const ExperimentReport& report) {
    bool first = true;
    for (const auto& t : aggregate(report)) {
        for (Metric m : {Metric::avacc, Metric::cba, Metric::mgm, Metric::cen}) {
            if (!first) out << '\n';
            first = false;
            print_table(out, t, m);
        }
    }
}

/// Plot-ready rows: mean metrics per dataset x method x noise level.
inline void write_noise_sweep(std::ostream& out, const ExperimentReport& report) {
    out << "dataset,method,noise_level,noise_classes,records,avacc,cba,mgm,cen\n";
    for (const auto& t : aggregate(report)) {
        const auto at = t.noise.find('@');
        const std::string level = t.noise.substr(0, at), classes = t.noise.substr(at + 1);
        for (std::size_t d = 0; d < t.datasets.size(); ++d)
            for (std::size_t k = 0; k < t.methods.size(); ++k) {
                if (t.counts[d][k] == 0) continue;
                out << detail::csv_escape(t.datasets[d]) << ',' << detail::csv_escape(t.methods[k]) << ',' << level << ','
                    << detail::csv_escape(classes) << ',' << t.counts[d][k];
                for (Metric m : {Metric::avacc, Metric::cba, Metric::mgm, Metric::cen})
                    out << ',' << format_number(t.means.at(m)[d][k]);
                out << '\n';
            }
    }
}

}  // namespace mcccr
