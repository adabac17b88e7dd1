// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SYLVA_MODELS_HPP
#define SYLVA_MODELS_HPP

#include <cmath>
#include <string>
#include <string_view>
#include <variant>

#include "sylva/core.hpp"
#include "sylva/geometry.hpp"

namespace sylva {

// ---------------------------------------------------------------------------
// The eight basic-transmission-loss predictors. Each one is free-space loss
// plus an excess term driven by one blockage feature:
//
//   FSPL  - baseline, no excess
//   AF    - constant loss per trunk in the first Fresnel zone
//   ITU   - saturating exponential in woodland depth d_w
//   WMED  - Weissberger two-branch law in foliage depth d_f
//   A-I   - two-slope piecewise-linear in d_f
//   A-II  - slope then hard ceiling in d_f
//   B     - ITU functional form driven by d_f
//   C     - jump plus two-slope law in Fresnel-zone foliage area a_f

enum class ModelKind { fspl, af, itu, wmed, a1, a2, b, c };

inline constexpr ModelKind all_model_kinds[] = {ModelKind::fspl, ModelKind::af,  ModelKind::itu,
                                                ModelKind::wmed, ModelKind::a1,  ModelKind::a2,
                                                ModelKind::b,    ModelKind::c};

inline std::string_view model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::fspl: return "FSPL";
        case ModelKind::af: return "AF";
        case ModelKind::itu: return "ITU";
        case ModelKind::wmed: return "WMED";
        case ModelKind::a1: return "A-I";
        case ModelKind::a2: return "A-II";
        case ModelKind::b: return "B";
        case ModelKind::c: return "C";
    }
    throw error("model_name: unknown model kind");
}

inline ModelKind parse_model_name(std::string_view name) {
    for (ModelKind kind : all_model_kinds)
        if (name == model_name(kind))
            return kind;
    throw error("unknown model name: '" + std::string(name) +
                "' (expected one of FSPL, AF, ITU, WMED, A-I, A-II, B, C)");
}

struct FsplParams {};

struct AfParams {
    double loss_per_tree_db = 0.0;  // L0
};

struct ItuParams {
    double max_attenuation_db = 0.0;            // A_m
    double specific_attenuation_db_per_m = 0.0;  // gamma
};

struct WmedParams {};  // constants fixed by the formula

struct A1Params {
    double l1_db_per_m = 0.0;  // slope below the breakpoint
    double l2_db_per_m = 0.0;  // slope above it
    double breakpoint_m = 14.0;
};

struct A2Params {
    double l1_db_per_m = 0.0;
    double breakpoint_m = 0.0;  // excess loss saturates here
};

struct BParams {
    double max_attenuation_db = 0.0;
    double specific_attenuation_db_per_m = 0.0;
};

struct CParams {
    double jump_db = 0.0;        // L0, applied for any nonzero foliage area
    double l1_db_per_m2 = 0.0;   // slope below the breakpoint
    double l2_db_per_m2 = 0.0;   // slope above it
    double breakpoint_m2 = 0.0;  // A_f
};

using ModelParams =
    std::variant<FsplParams, AfParams, ItuParams, WmedParams, A1Params, A2Params, BParams, CParams>;

inline ModelKind kind_of(const ModelParams& params) {
    return static_cast<ModelKind>(params.index());
}

inline void validate_params(const ModelParams& params) {
    const auto require = [](bool ok, const char* what) {
        if (!ok)
            throw error(std::string("invalid model parameters: ") + what);
    };
    switch (kind_of(params)) {
        case ModelKind::fspl:
        case ModelKind::wmed:
            break;
        case ModelKind::af:
            require(std::get<AfParams>(params).loss_per_tree_db >= 0.0, "loss_per_tree_db must be >= 0");
            break;
        case ModelKind::itu: {
            const auto& p = std::get<ItuParams>(params);
            require(p.max_attenuation_db > 0.0, "max_attenuation_db must be > 0");
            require(p.specific_attenuation_db_per_m > 0.0, "specific_attenuation_db_per_m must be > 0");
            break;
        }
        case ModelKind::a1: {
            const auto& p = std::get<A1Params>(params);
            require(p.l1_db_per_m >= 0.0 && p.l2_db_per_m >= 0.0, "slopes must be >= 0");
            require(p.breakpoint_m > 0.0, "breakpoint_m must be > 0");
            break;
        }
        case ModelKind::a2: {
            const auto& p = std::get<A2Params>(params);
            require(p.l1_db_per_m >= 0.0, "l1_db_per_m must be >= 0");
            require(p.breakpoint_m > 0.0, "breakpoint_m must be > 0");
            break;
        }
        case ModelKind::b: {
            const auto& p = std::get<BParams>(params);
            require(p.max_attenuation_db > 0.0, "max_attenuation_db must be > 0");
            require(p.specific_attenuation_db_per_m > 0.0, "specific_attenuation_db_per_m must be > 0");
            break;
        }
        case ModelKind::c: {
            const auto& p = std::get<CParams>(params);
            require(p.jump_db >= 0.0 && p.l1_db_per_m2 >= 0.0 && p.l2_db_per_m2 >= 0.0,
                    "attenuation constants must be >= 0");
            require(p.breakpoint_m2 > 0.0, "breakpoint_m2 must be > 0");
            break;
        }
    }
}

// ---------------------------------------------------------------------------

/// Friis free-space loss between isotropic antennas: 20 log10(4 pi d f / c).
inline double fspl_db(double distance_m, double f_c_ghz) {
    if (!(distance_m > 0.0))
        throw error("fspl: distance must be positive");
    if (!(f_c_ghz > 0.0))
        throw error("fspl: frequency must be positive");
    return 20.0 * std::log10(4.0 * M_PI * distance_m * f_c_ghz * 1e9 / speed_of_light_m_s);
}

/// Constant excess loss per obstructing trunk.
inline double epl_af(std::size_t n_trunks, const AfParams& p) {
    return static_cast<double>(n_trunks) * p.loss_per_tree_db;
}

/// Saturating woodland obstruction law: A_m (1 - exp(-d_w gamma / A_m)).
inline double epl_itu(double d_w_m, const ItuParams& p) {
    if (d_w_m < 0.0)
        throw error("epl_itu: woodland depth must be nonnegative");
    return p.max_attenuation_db *
           (1.0 - std::exp(-d_w_m * p.specific_attenuation_db_per_m / p.max_attenuation_db));
}

enum class WmedMode { strict, extrapolate };

/// Weissberger modified exponential decay. Frequency in GHz. Defined for
/// foliage depths up to 400 m; beyond that, strict mode refuses and
/// extrapolate mode continues the deep branch.
inline double epl_wmed(double d_f_m, double f_c_ghz, WmedMode mode = WmedMode::strict) {
    if (d_f_m < 0.0)
        throw error("epl_wmed: foliage depth must be nonnegative");
    if (!(f_c_ghz > 0.0))
        throw error("epl_wmed: frequency must be positive");
    if (d_f_m == 0.0)
        return 0.0;
    const double f_term = std::pow(f_c_ghz, 0.284);
    if (d_f_m <= 14.0)
        return 0.45 * f_term * d_f_m;
    if (d_f_m > 400.0) {
        if (mode == WmedMode::strict)
            throw error("epl_wmed: foliage depth " + format_double(d_f_m) +
                        " m exceeds the 400 m validity limit (extrapolate mode continues the deep branch)");
        warn("wmed-extrapolation",
             "foliage depth " + format_double(d_f_m) + " m beyond 400 m; extrapolating the deep branch");
    }
    return 1.33 * f_term * std::pow(d_f_m, 0.588);
}

/// Two-slope piecewise-linear law in foliage depth, continuous at the
/// breakpoint.
inline double epl_a1(double d_f_m, const A1Params& p) {
    if (d_f_m < 0.0)
        throw error("epl_a1: foliage depth must be nonnegative");
    if (d_f_m <= p.breakpoint_m)
        return d_f_m * p.l1_db_per_m;
    return p.breakpoint_m * p.l1_db_per_m + (d_f_m - p.breakpoint_m) * p.l2_db_per_m;
}

/// Linear up to the breakpoint, then constant: min(d_f, D_f) * L1.
inline double epl_a2(double d_f_m, const A2Params& p) {
    if (d_f_m < 0.0)
        throw error("epl_a2: foliage depth must be nonnegative");
    return std::min(d_f_m, p.breakpoint_m) * p.l1_db_per_m;
}

/// ITU functional form driven by site-specific foliage depth.
inline double epl_b(double d_f_m, const BParams& p) {
    if (d_f_m < 0.0)
        throw error("epl_b: foliage depth must be nonnegative");
    return p.max_attenuation_db *
           (1.0 - std::exp(-d_f_m * p.specific_attenuation_db_per_m / p.max_attenuation_db));
}

/// Model C handling of the deep branch. The published three-branch form
/// drops the jump term above the breakpoint, which leaves a downward step
/// of L0 there; continuous mode keeps the jump so the law stays continuous
/// on (0, inf). Both forms share the step of L0 at the origin.
enum class CModelMode { continuous, paper_literal };

/// Foliage-area law: zero at exactly a_f = 0, then a jump of L0 plus a
/// two-slope linear law with breakpoint A_f.
inline double epl_c(double a_f_m2, const CParams& p, CModelMode mode = CModelMode::continuous) {
    if (a_f_m2 < 0.0)
        throw error("epl_c: foliage area must be nonnegative");
    if (a_f_m2 == 0.0)
        return 0.0;
    if (a_f_m2 <= p.breakpoint_m2)
        return a_f_m2 * p.l1_db_per_m2 + p.jump_db;
    const double deep = p.breakpoint_m2 * p.l1_db_per_m2 + (a_f_m2 - p.breakpoint_m2) * p.l2_db_per_m2;
    return mode == CModelMode::continuous ? deep + p.jump_db : deep;
}

// ---------------------------------------------------------------------------

struct Prediction {
    double fspl_db = 0.0;
    double excess_db = 0.0;
    double total_db = 0.0;  // always fspl_db + excess_db
};

struct PredictOptions {
    WmedMode wmed_mode = WmedMode::strict;
    CModelMode c_mode = CModelMode::continuous;
};

/// Total predicted loss: free-space baseline plus the model's excess term.
inline Prediction predict(const SiteFeatures& features, const ModelParams& params, double f_c_ghz,
                          const PredictOptions& options = {}) {
    Prediction out;
    out.fspl_db = fspl_db(features.distance_3d, f_c_ghz);
    switch (kind_of(params)) {
        case ModelKind::fspl:
            out.excess_db = 0.0;
            break;
        case ModelKind::af:
            out.excess_db = epl_af(features.trunk_count, std::get<AfParams>(params));
            break;
        case ModelKind::itu:
            out.excess_db = epl_itu(features.woodland_depth, std::get<ItuParams>(params));
            break;
        case ModelKind::wmed:
            out.excess_db = epl_wmed(features.foliage_depth, f_c_ghz, options.wmed_mode);
            break;
        case ModelKind::a1:
            out.excess_db = epl_a1(features.foliage_depth, std::get<A1Params>(params));
            break;
        case ModelKind::a2:
            out.excess_db = epl_a2(features.foliage_depth, std::get<A2Params>(params));
            break;
        case ModelKind::b:
            out.excess_db = epl_b(features.foliage_depth, std::get<BParams>(params));
            break;
        case ModelKind::c:
            out.excess_db = epl_c(features.foliage_area, std::get<CParams>(params), options.c_mode);
            break;
    }
    out.total_db = out.fspl_db + out.excess_db;
    return out;
}

}  // namespace sylva

#endif  // SYLVA_MODELS_HPP
