#pragma once

// Dataset ingestion and export for KEEL '@'-header files and CSV.
//
// KEEL: '@relation', '@attribute', '@inputs', '@outputs' and '@data' headers
// are recognised ('%' starts a comment line). The output attribute (or the
// last attribute when '@outputs' is absent) becomes the label; nominal input
// attributes are encoded by their declaration order.
// CSV: the final column is the label; a first row whose feature fields are
// not all numeric is taken as the header.
// In both formats class ids are assigned in order of first appearance.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dataset.hpp"

namespace mcccr {

enum class DatasetFormat { keel, csv };

inline std::string_view to_string(DatasetFormat f) { return f == DatasetFormat::keel ? "keel" : "csv"; }

inline DatasetFormat parse_format(std::string_view s) {
    if (s == "keel" || s == "dat") return DatasetFormat::keel;
    if (s == "csv") return DatasetFormat::csv;
    throw Error("unknown dataset format '" + std::string(s) + "' (expected keel or csv)");
}

inline DatasetFormat detect_format(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot != std::string::npos) {
        std::string ext = path.substr(dot + 1);
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == "csv") return DatasetFormat::csv;
    }
    return DatasetFormat::keel;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split_fields(std::string_view line, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto end = line.find(sep, start);
        out.emplace_back(trim(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start)));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

inline std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::string tmp(s);
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (end == tmp.c_str() || *end != '\0' || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

inline std::string unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
        s = s.substr(1, s.size() - 2);
    }
    return std::string(s);
}

inline Error located(const std::string& path, std::size_t line, const std::string& msg) {
    return Error(path + ":" + std::to_string(line) + ": " + msg);
}

struct Attribute {
    std::string name;
    bool nominal = false;
    std::vector<std::string> values;
};

/// Class-id table assigning ids by first appearance.
struct LabelTable {
    std::map<std::string, ClassId> ids;
    std::vector<std::string> names;

    ClassId intern(const std::string& name) {
        auto [it, inserted] = ids.emplace(name, names.size());
        if (inserted) names.push_back(name);
        return it->second;
    }
};

inline std::string quote_if_needed(const std::string& s) {
    const bool plain = !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
    return plain ? s : "'" + s + "'";
}

}  // namespace detail

inline LabeledDataset parse_keel(std::istream& in, const std::string& path = "<keel>") {
    using namespace detail;
    LabeledDataset ds;
    std::vector<Attribute> attrs;
    std::vector<std::string> inputs, outputs;
    bool in_data = false;
    std::vector<std::size_t> feature_attrs;
    std::size_t label_attr = 0;
    LabelTable table;
    std::vector<std::map<std::string, std::size_t>> nominal_codes;

    std::string raw;
    std::size_t line_no = 0;
    auto attribute_index = [&](const std::string& name, std::size_t line) {
        for (std::size_t a = 0; a < attrs.size(); ++a)
            if (attrs[a].name == name) return a;
        throw located(path, line, "unknown attribute '" + name + "'");
    };

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '%') continue;

        if (!in_data) {
            if (line.front() != '@') throw located(path, line_no, "malformed header line (expected '@')");
            const auto space = line.find_first_of(" \t");
            const std::string key = lower(line.substr(0, space));
            const std::string_view rest = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
            if (key == "@relation") {
                ds.relation = unquote(rest);
            } else if (key == "@attribute") {
                Attribute attr;
                std::string_view r = rest;
                if (r.empty()) throw located(path, line_no, "attribute without a name");
                std::size_t name_end;
                if (r.front() == '\'' || r.front() == '"') {
                    name_end = r.find(r.front(), 1);
                    if (name_end == std::string_view::npos) throw located(path, line_no, "unterminated attribute name");
                    attr.name = std::string(r.substr(1, name_end - 1));
                    ++name_end;
                } else {
                    name_end = r.find_first_of(" \t{");
                    attr.name = std::string(r.substr(0, name_end));
                }
                const std::string_view type = name_end == std::string_view::npos ? std::string_view{} : trim(r.substr(name_end));
                if (!type.empty() && type.front() == '{') {
                    const auto close = type.find('}');
                    if (close == std::string_view::npos) throw located(path, line_no, "unterminated nominal value list");
                    attr.nominal = true;
                    for (auto& v : split_fields(type.substr(1, close - 1))) attr.values.push_back(unquote(v));
                } else {
                    const std::string word = lower(type.substr(0, type.find_first_of(" \t[")));
                    if (word != "real" && word != "integer" && word != "numeric") {
                        throw located(path, line_no, "unsupported attribute type '" + std::string(type) + "'");
                    }
                }
                attrs.push_back(std::move(attr));
            } else if (key == "@inputs" || key == "@input") {
                for (auto& v : split_fields(rest)) inputs.push_back(unquote(v));
            } else if (key == "@outputs" || key == "@output") {
                for (auto& v : split_fields(rest)) outputs.push_back(unquote(v));
            } else if (key == "@data") {
                if (attrs.size() < 2) throw located(path, line_no, "need at least one input and one output attribute");
                if (outputs.size() > 1) throw located(path, line_no, "only a single output attribute is supported");
                label_attr = outputs.empty() ? attrs.size() - 1 : attribute_index(outputs.front(), line_no);
                if (!inputs.empty()) {
                    for (auto& name : inputs) feature_attrs.push_back(attribute_index(name, line_no));
                } else {
                    for (std::size_t a = 0; a < attrs.size(); ++a)
                        if (a != label_attr) feature_attrs.push_back(a);
                }
                nominal_codes.resize(attrs.size());
                for (std::size_t a = 0; a < attrs.size(); ++a)
                    for (std::size_t v = 0; v < attrs[a].values.size(); ++v) nominal_codes[a].emplace(attrs[a].values[v], v);
                for (std::size_t a : feature_attrs) ds.feature_names.push_back(attrs[a].name);
                ds.features = Matrix(0, feature_attrs.size());
                in_data = true;
            } else {
                throw located(path, line_no, "unknown header '" + key + "'");
            }
            continue;
        }

        const auto fields = split_fields(line);
        if (fields.size() != attrs.size()) {
            throw located(path, line_no, "expected " + std::to_string(attrs.size()) + " values, found " +
                                             std::to_string(fields.size()));
        }
        FeatureVector row;
        row.reserve(feature_attrs.size());
        for (std::size_t a : feature_attrs) {
            const std::string value = unquote(fields[a]);
            if (attrs[a].nominal) {
                auto it = nominal_codes[a].find(value);
                if (it == nominal_codes[a].end()) {
                    throw located(path, line_no, "value '" + value + "' not declared for attribute '" + attrs[a].name + "'");
                }
                row.push_back(static_cast<double>(it->second));
            } else {
                auto v = parse_double(value);
                if (!v) throw located(path, line_no, "non-numeric value '" + value + "' for attribute '" + attrs[a].name + "'");
                row.push_back(*v);
            }
        }
        const std::string label = unquote(fields[label_attr]);
        if (attrs[label_attr].nominal && !nominal_codes[label_attr].count(label)) {
            throw located(path, line_no, "class '" + label + "' not declared for attribute '" + attrs[label_attr].name + "'");
        }
        ds.features.append_row(row);
        ds.labels.push_back(table.intern(label));
    }
    if (!in_data) throw Error(path + ": missing @data section");
    ds.class_names = std::move(table.names);
    return ds;
}

inline LabeledDataset parse_csv(std::istream& in, const std::string& path = "<csv>") {
    using namespace detail;
    LabeledDataset ds;
    LabelTable table;
    std::string raw;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first = true;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (first) {
            first = false;
            width = fields.size();
            if (width < 2) throw located(path, line_no, "need at least one feature column and a label column");
            ds.features = Matrix(0, width - 1);
            bool numeric = true;
            for (std::size_t k = 0; k + 1 < width; ++k) numeric = numeric && parse_double(fields[k]).has_value();
            if (!numeric) {
                for (std::size_t k = 0; k + 1 < width; ++k) ds.feature_names.push_back(unquote(fields[k]));
                continue;
            }
        }
        if (fields.size() != width) {
            throw located(path, line_no, "expected " + std::to_string(width) + " values, found " +
                                             std::to_string(fields.size()));
        }
        FeatureVector row(width - 1);
        for (std::size_t k = 0; k + 1 < width; ++k) {
            auto v = parse_double(fields[k]);
            if (!v) throw located(path, line_no, "non-numeric value '" + fields[k] + "' in column " + std::to_string(k + 1));
            row[k] = *v;
        }
        ds.features.append_row(row);
        ds.labels.push_back(table.intern(unquote(fields.back())));
    }
    if (width == 0) throw Error(path + ": empty file");
    ds.class_names = std::move(table.names);
    return ds;
}

inline LabeledDataset load_dataset(const std::string& path, std::optional<DatasetFormat> format = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset '" + path + "'");
    const auto fmt = format.value_or(detect_format(path));
    return fmt == DatasetFormat::keel ? parse_keel(in, path) : parse_csv(in, path);
}

inline std::string class_name(const LabeledDataset& ds, ClassId c) {
    return c < ds.class_names.size() ? ds.class_names[c] : std::to_string(c);
}

inline std::string feature_name(const LabeledDataset& ds, std::size_t k) {
    return k < ds.feature_names.size() ? ds.feature_names[k] : "x" + std::to_string(k + 1);
}

inline void write_keel(std::ostream& out, const LabeledDataset& ds) {
    using detail::quote_if_needed;
    out << "@relation " << quote_if_needed(ds.relation.empty() ? "dataset" : ds.relation) << '\n';
    for (std::size_t k = 0; k < ds.dims(); ++k) {
        double lo = 0.0, hi = 0.0;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const double v = ds.features(i, k);
            lo = i == 0 ? v : std::min(lo, v);
            hi = i == 0 ? v : std::max(hi, v);
        }
        out << "@attribute " << quote_if_needed(feature_name(ds, k)) << " real [" << format_number(lo) << ", "
            << format_number(hi) << "]\n";
    }
    out << "@attribute Class {";
    for (ClassId c = 0; c < ds.class_count(); ++c) out << (c ? ", " : "") << class_name(ds, c);
    out << "}\n@inputs ";
    for (std::size_t k = 0; k < ds.dims(); ++k) out << (k ? ", " : "") << quote_if_needed(feature_name(ds, k));
    out << "\n@outputs Class\n@data\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t k = 0; k < ds.dims(); ++k) out << format_number(ds.features(i, k)) << ", ";
        out << class_name(ds, ds.labels[i]) << '\n';
    }
}

inline void write_csv(std::ostream& out, const LabeledDataset& ds) {
    for (std::size_t k = 0; k < ds.dims(); ++k) out << feature_name(ds, k) << ',';
    out << "class\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t k = 0; k < ds.dims(); ++k) out << format_number(ds.features(i, k)) << ',';
        out << class_name(ds, ds.labels[i]) << '\n';
    }
}

inline void write_dataset(const LabeledDataset& ds, const std::string& path, DatasetFormat format) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    if (format == DatasetFormat::keel) write_keel(out, ds); else write_csv(out, ds);
    out.flush();
    if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace mcccr
