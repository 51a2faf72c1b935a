#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "baselines.hpp"
#include "dataset.hpp"
#include "multiclass.hpp"

namespace mcccr {

enum class MethodKind { mc_ccr, smote_all, none };

inline std::string_view to_string(MethodKind k) {
    switch (k) {
        case MethodKind::mc_ccr: return "mc-ccr";
        case MethodKind::smote_all: return "smote-all";
        case MethodKind::none: return "none";
    }
    return "?";
}

inline MethodKind parse_method(std::string_view s) {
    if (s == "mc-ccr") return MethodKind::mc_ccr;
    if (s == "smote-all") return MethodKind::smote_all;
    if (s == "none") return MethodKind::none;
    throw Error("unknown method '" + std::string(s) + "' (expected mc-ccr, smote-all or none)");
}

/// One concrete resampler parameterisation.
struct MethodParams {
    MethodKind kind = MethodKind::mc_ccr;
    McConfig ccr;
    std::size_t smote_k = 5;

    std::string describe() const {
        switch (kind) {
            case MethodKind::mc_ccr:
                return "energy=" + format_number(ccr.energy) + ";p=" + format_number(ccr.p) +
                       ";ratio=" + ccr.ratio.to_string() + ";cleaning=" + std::string(to_string(ccr.cleaning)) +
                       ";selection=" + std::string(to_string(ccr.selection)) +
                       ";decomposition=" + std::string(to_string(ccr.decomposition));
            case MethodKind::smote_all:
                return "k=" + std::to_string(smote_k) + ";ratio=" + ccr.ratio.to_string();
            case MethodKind::none:
                return "";
        }
        return "";
    }
};

inline ResampledDataset resample(const LabeledDataset& data, const MethodParams& params, std::uint64_t seed) {
    switch (params.kind) {
        case MethodKind::mc_ccr: {
            McConfig cfg = params.ccr;
            cfg.seed = seed;
            return mc_ccr(data, cfg);
        }
        case MethodKind::smote_all:
            return smote_all(data, params.smote_k, params.ccr.ratio, seed, params.ccr.p);
        case MethodKind::none:
            break;
    }
    ResampledDataset out{data, std::vector<std::int64_t>(data.size()), {}};
    for (std::size_t i = 0; i < data.size(); ++i) out.origin[i] = static_cast<std::int64_t>(i);
    return out;
}

}  // namespace mcccr
