// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SYLVA_FITTING_HPP
#define SYLVA_FITTING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sylva/core.hpp"
#include "sylva/geometry.hpp"
#include "sylva/models.hpp"

namespace sylva {

/// Root mean squared error between paired dB values.
inline double rmse(std::span<const double> predictions, std::span<const double> measurements) {
    if (predictions.size() != measurements.size())
        throw error("rmse: length mismatch");
    if (predictions.empty())
        throw error("rmse: empty input");
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double e = predictions[i] - measurements[i];
        sum_sq += e * e;
    }
    return std::sqrt(sum_sq / static_cast<double>(predictions.size()));
}

/// One fitting observation: blockage features plus the measured loss.
struct FeatureSample {
    SiteFeatures features;
    double path_loss_db = 0.0;
};

inline std::vector<FeatureSample> samples_from_records(const std::vector<FeatureRecord>& records) {
    std::vector<FeatureSample> out;
    out.reserve(records.size());
    for (const FeatureRecord& r : records)
        out.push_back({r.features, r.path_loss_db});
    return out;
}

inline bool finite_sample(const FeatureSample& s) {
    const SiteFeatures& f = s.features;
    return std::isfinite(f.distance_3d) && f.distance_3d > 0.0 && std::isfinite(f.woodland_depth) &&
           std::isfinite(f.foliage_depth) && std::isfinite(f.foliage_area) && std::isfinite(s.path_loss_db);
}

/// Drops records with non-finite features or measurements, warning per record.
inline std::vector<FeatureSample> sanitize_dataset(const std::vector<FeatureSample>& dataset) {
    std::vector<FeatureSample> out;
    out.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (finite_sample(dataset[i]))
            out.push_back(dataset[i]);
        else
            warn("fit-dataset", "record " + std::to_string(i) + " has non-finite features; dropped");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parameter metadata: canonical slot order and default search bounds.

struct ParameterBounds {
    double lower = 0.0;
    double upper = 0.0;
};

inline std::vector<std::string> parameter_names(ModelKind kind) {
    switch (kind) {
        case ModelKind::fspl:
        case ModelKind::wmed: return {};
        case ModelKind::af: return {"loss_per_tree_db"};
        case ModelKind::itu:
        case ModelKind::b: return {"max_attenuation_db", "specific_attenuation_db_per_m"};
        case ModelKind::a1: return {"l1_db_per_m", "l2_db_per_m", "breakpoint_m"};
        case ModelKind::a2: return {"l1_db_per_m", "breakpoint_m"};
        case ModelKind::c: return {"jump_db", "l1_db_per_m2", "l2_db_per_m2", "breakpoint_m2"};
    }
    throw error("parameter_names: unknown model kind");
}

/// Generous superset of every plausible fitted value. The specific
/// attenuation lower bound is kept strictly positive so every candidate
/// satisfies the parameter invariants.
inline ParameterBounds default_bounds(std::string_view name) {
    if (name == "max_attenuation_db") return {1.0, 100.0};
    if (name == "specific_attenuation_db_per_m") return {1e-3, 20.0};
    if (name == "l1_db_per_m" || name == "l2_db_per_m") return {0.0, 20.0};
    if (name == "l1_db_per_m2" || name == "l2_db_per_m2") return {0.0, 20.0};
    if (name == "breakpoint_m" || name == "breakpoint_m2") return {1.0, 100.0};
    if (name == "jump_db" || name == "loss_per_tree_db") return {0.0, 60.0};
    throw error("default_bounds: unknown parameter name '" + std::string(name) + "'");
}

/// Builds concrete model parameters from a slot vector ordered as
/// parameter_names(kind).
inline ModelParams assemble_params(ModelKind kind, std::span<const double> slots) {
    const auto need = [&](std::size_t n) {
        if (slots.size() != n)
            throw error("assemble_params: wrong number of parameter values");
    };
    switch (kind) {
        case ModelKind::fspl: need(0); return FsplParams{};
        case ModelKind::wmed: need(0); return WmedParams{};
        case ModelKind::af: need(1); return AfParams{slots[0]};
        case ModelKind::itu: need(2); return ItuParams{slots[0], slots[1]};
        case ModelKind::b: need(2); return BParams{slots[0], slots[1]};
        case ModelKind::a1: need(3); return A1Params{slots[0], slots[1], slots[2]};
        case ModelKind::a2: need(2); return A2Params{slots[0], slots[1]};
        case ModelKind::c: need(4); return CParams{slots[0], slots[1], slots[2], slots[3]};
    }
    throw error("assemble_params: unknown model kind");
}

// ---------------------------------------------------------------------------

struct FreeParameter {
    std::string name;
    double lower = 0.0;
    double upper = 0.0;
};

struct FixedParameter {
    std::string name;
    double value = 0.0;
};

/// Declares which parameters of a model are searched and which are pinned.
struct FitSpec {
    ModelKind kind = ModelKind::fspl;
    std::vector<FreeParameter> free_parameters;
    std::vector<FixedParameter> fixed_parameters;
    std::vector<FeatureSample> dataset;

    void validate() const {
        if (dataset.empty())
            throw error("fit spec: dataset is empty");
        for (const FeatureSample& s : dataset)
            if (!finite_sample(s))
                throw error("fit spec: dataset contains non-finite records; sanitize_dataset() first");
        const auto names = parameter_names(kind);
        if (free_parameters.empty() || free_parameters.size() > 4)
            throw error("fit spec: free parameter count must be between 1 and 4");
        for (const FreeParameter& p : free_parameters) {
            if (!std::isfinite(p.lower) || !std::isfinite(p.upper) || !(p.lower < p.upper))
                throw error("fit spec: bounds for '" + p.name + "' must be finite with lower < upper");
        }
        for (const std::string& name : names) {
            int uses = 0;
            for (const FreeParameter& p : free_parameters)
                if (p.name == name) ++uses;
            for (const FixedParameter& p : fixed_parameters)
                if (p.name == name) ++uses;
            if (uses != 1)
                throw error("fit spec: parameter '" + name + "' must be declared exactly once (free or fixed)");
        }
        for (const FreeParameter& p : free_parameters)
            if (std::find(names.begin(), names.end(), p.name) == names.end())
                throw error("fit spec: '" + p.name + "' is not a parameter of " + std::string(model_name(kind)));
        for (const FixedParameter& p : fixed_parameters)
            if (std::find(names.begin(), names.end(), p.name) == names.end())
                throw error("fit spec: '" + p.name + "' is not a parameter of " + std::string(model_name(kind)));
    }
};

struct FitResult {
    ModelParams params;
    double rmse_db = 0.0;
    std::size_t objective_evaluations = 0;
    bool converged = false;
    std::vector<std::string> warnings;
};

struct FitOptions {
    std::size_t grid_points_per_dim = 17;
    std::size_t max_evaluations = 500000;
    double improvement_tol_db = 1e-4;
    PredictOptions predict;
};

namespace detail {

/// RMSE of a candidate parameter vector over the dataset.
class FitObjective {
  public:
    FitObjective(ModelKind kind, std::span<const FeatureSample> dataset, double f_c_ghz,
                 const PredictOptions& options, std::vector<std::size_t> free_slots,
                 std::vector<double> slot_values)
        : kind_(kind),
          dataset_(dataset),
          f_c_ghz_(f_c_ghz),
          options_(options),
          free_slots_(std::move(free_slots)),
          slots_(std::move(slot_values)) {
        fspl_.reserve(dataset_.size());
        for (const FeatureSample& s : dataset_)
            fspl_.push_back(fspl_db(s.features.distance_3d, f_c_ghz_));
    }

    double operator()(std::span<const double> free_values) {
        ++evaluations_;
        for (std::size_t i = 0; i < free_slots_.size(); ++i)
            slots_[free_slots_[i]] = free_values[i];
        const ModelParams params = assemble_params(kind_, slots_);
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < dataset_.size(); ++i) {
            const double excess = excess_of(dataset_[i].features, params);
            const double e = fspl_[i] + excess - dataset_[i].path_loss_db;
            sum_sq += e * e;
        }
        return std::sqrt(sum_sq / static_cast<double>(dataset_.size()));
    }

    double excess_of(const SiteFeatures& f, const ModelParams& params) const {
        switch (kind_) {
            case ModelKind::fspl: return 0.0;
            case ModelKind::af: return epl_af(f.trunk_count, std::get<AfParams>(params));
            case ModelKind::itu: return epl_itu(f.woodland_depth, std::get<ItuParams>(params));
            case ModelKind::wmed: return epl_wmed(f.foliage_depth, f_c_ghz_, options_.wmed_mode);
            case ModelKind::a1: return epl_a1(f.foliage_depth, std::get<A1Params>(params));
            case ModelKind::a2: return epl_a2(f.foliage_depth, std::get<A2Params>(params));
            case ModelKind::b: return epl_b(f.foliage_depth, std::get<BParams>(params));
            case ModelKind::c: return epl_c(f.foliage_area, std::get<CParams>(params), options_.c_mode);
        }
        throw error("fit objective: unknown model kind");
    }

    std::size_t evaluations() const { return evaluations_; }
    std::span<const double> slots() const { return slots_; }

  private:
    ModelKind kind_;
    std::span<const FeatureSample> dataset_;
    double f_c_ghz_;
    PredictOptions options_;
    std::vector<std::size_t> free_slots_;
    std::vector<double> slots_;
    std::vector<double> fspl_;
    std::size_t evaluations_ = 0;
};

/// Nelder-Mead over the unit box, positions clamped into [0, 1]^n.
/// Stops once the best value improves by less than `tol` across
/// 2(n+1) consecutive iterations, or when the budget runs out.
/// Returns false when the budget stopped it.
template <typename Fn>
bool nelder_mead_unit_box(Fn&& f, std::vector<double>& x0, double& f0, double tol,
                          std::size_t max_evals, std::size_t& evals_used) {
    const std::size_t n = x0.size();
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    struct Vertex {
        std::vector<double> x;
        double f;
    };
    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);

    const auto clamp01 = [](std::vector<double>& v) {
        for (double& c : v) c = std::clamp(c, 0.0, 1.0);
    };
    // Out-of-box candidates are rejected with an infinite value rather than
    // projected onto the face: projection collapses the simplex into the
    // boundary plane and strands the search there.
    const auto eval = [&](const std::vector<double>& v) {
        for (double c : v)
            if (c < 0.0 || c > 1.0) return std::numeric_limits<double>::infinity();
        ++evals_used;
        return f(std::span<const double>(v));
    };

    simplex.push_back({x0, f0});
    const double step = 0.0625;  // one coarse-grid cell in normalized units
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> v = x0;
        v[j] += (v[j] + step <= 1.0) ? step : -step;
        clamp01(v);
        if (evals_used >= max_evals) return false;
        simplex.push_back({v, eval(v)});
    }

    double best_seen = f0;
    double worst_seen = std::numeric_limits<double>::infinity();
    std::size_t stall = 0;
    const std::size_t stall_limit = 2 * (n + 1);

    while (evals_used < max_evals) {
        std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });

        // Progress means a tol-sized improvement anywhere in the simplex; the
        // worst vertex keeps dropping while contractions walk down a narrow
        // valley even though the champion is stuck, so counting only the best
        // would quit too early.
        bool improved = false;
        if (simplex.front().f < best_seen - tol) {
            best_seen = simplex.front().f;
            improved = true;
        }
        if (simplex.back().f < worst_seen - tol) {
            worst_seen = simplex.back().f;
            improved = true;
        }
        if (improved) {
            stall = 0;
        } else {
            if (++stall >= stall_limit) break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i].x[j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        Vertex& worst = simplex.back();
        std::vector<double> reflected(n);
        for (std::size_t j = 0; j < n; ++j) reflected[j] = centroid[j] + alpha * (centroid[j] - worst.x[j]);
        if (evals_used >= max_evals) break;
        const double f_r = eval(reflected);

        if (f_r < simplex.front().f) {
            std::vector<double> expanded(n);
            for (std::size_t j = 0; j < n; ++j) expanded[j] = centroid[j] + gamma * (reflected[j] - centroid[j]);
            if (evals_used >= max_evals) break;
            const double f_e = eval(expanded);
            worst = f_e < f_r ? Vertex{expanded, f_e} : Vertex{reflected, f_r};
        } else if (f_r < simplex[n - 1].f) {
            worst = {reflected, f_r};
        } else {
            std::vector<double> contracted(n);
            for (std::size_t j = 0; j < n; ++j) contracted[j] = centroid[j] + rho * (worst.x[j] - centroid[j]);
            if (evals_used >= max_evals) break;
            const double f_c = eval(contracted);
            if (f_c < worst.f) {
                worst = {contracted, f_c};
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i].x[j] = simplex[0].x[j] + sigma * (simplex[i].x[j] - simplex[0].x[j]);
                    if (evals_used >= max_evals) break;
                    simplex[i].f = eval(simplex[i].x);
                }
            }
        }
        if (evals_used >= max_evals) break;
    }

    std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    x0 = simplex.front().x;
    f0 = simplex.front().f;
    return evals_used < max_evals;
}

}  // namespace detail

/// Derivative-free bounded RMSE minimization: a full grid (>= 17 points per
/// free dimension, lexicographic tie-break toward the smallest vector)
/// followed by Nelder-Mead refinement from the best grid point, with one
/// restart. Deterministic for identical inputs.
inline FitResult fit_params(const FitSpec& spec, double f_c_ghz, const FitOptions& options = {}) {
    spec.validate();
    if (!(f_c_ghz > 0.0))
        throw error("fit_params: carrier frequency must be positive");
    const std::size_t grid_n = std::max<std::size_t>(17, options.grid_points_per_dim);
    const std::size_t dim = spec.free_parameters.size();

    std::size_t grid_total = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        if (grid_total > options.max_evaluations / grid_n + 1)
            throw error("fit_params: evaluation budget too small for the coarse grid");
        grid_total *= grid_n;
    }
    if (grid_total > options.max_evaluations)
        throw error("fit_params: evaluation budget too small for the coarse grid");

    // Resolve free/fixed names onto the canonical slot layout.
    const auto names = parameter_names(spec.kind);
    std::vector<double> slots(names.size(), 0.0);
    std::vector<std::size_t> free_slots;
    for (const FixedParameter& p : spec.fixed_parameters) {
        const auto it = std::find(names.begin(), names.end(), p.name);
        slots[static_cast<std::size_t>(it - names.begin())] = p.value;
    }
    for (const FreeParameter& p : spec.free_parameters) {
        const auto it = std::find(names.begin(), names.end(), p.name);
        free_slots.push_back(static_cast<std::size_t>(it - names.begin()));
    }

    detail::FitObjective objective(spec.kind, spec.dataset, f_c_ghz, options.predict, free_slots, slots);

    FitResult result;

    // Coarse grid sweep in lexicographic order; strict improvement keeps the
    // lexicographically smallest argmin.
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> candidate(dim, 0.0);
    std::vector<double> best(dim, 0.0);
    double best_f = std::numeric_limits<double>::infinity();
    double worst_f = -std::numeric_limits<double>::infinity();
    const auto grid_value = [&](std::size_t param, std::size_t step) {
        const FreeParameter& p = spec.free_parameters[param];
        return p.lower + (p.upper - p.lower) * static_cast<double>(step) / static_cast<double>(grid_n - 1);
    };
    bool done = false;
    while (!done) {
        for (std::size_t i = 0; i < dim; ++i) candidate[i] = grid_value(i, idx[i]);
        const double f = objective(candidate);
        if (f < best_f) {
            best_f = f;
            best = candidate;
        }
        worst_f = std::max(worst_f, f);
        // odometer increment, last dimension fastest
        for (std::size_t i = dim; i-- > 0;) {
            if (++idx[i] < grid_n) break;
            idx[i] = 0;
            if (i == 0) done = true;
        }
    }

    bool flat_grid = false;
    if (worst_f - best_f < 1e-12) {
        result.warnings.push_back("objective is flat across the whole parameter grid");
        flat_grid = true;
    }

    // Refinement in normalized [0,1]^dim coordinates.
    std::vector<double> x(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        const FreeParameter& p = spec.free_parameters[i];
        x[i] = (best[i] - p.lower) / (p.upper - p.lower);
    }
    const auto denorm_objective = [&](std::span<const double> unit) {
        std::vector<double> real(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const FreeParameter& p = spec.free_parameters[i];
            real[i] = p.lower + unit[i] * (p.upper - p.lower);
        }
        return objective(real);
    };

    double fx = best_f;
    std::size_t refine_evals = objective.evaluations();
    bool finished = true;
    if (!flat_grid) {
        finished = detail::nelder_mead_unit_box(denorm_objective, x, fx, options.improvement_tol_db,
                                                options.max_evaluations, refine_evals);
        if (finished)  // one restart with a fresh simplex around the optimum
            finished = detail::nelder_mead_unit_box(denorm_objective, x, fx, options.improvement_tol_db,
                                                    options.max_evaluations, refine_evals);
    }

    std::vector<double> fitted(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const FreeParameter& p = spec.free_parameters[i];
        fitted[i] = std::clamp(p.lower + x[i] * (p.upper - p.lower), p.lower, p.upper);
    }

    // Identifiability screen: a free breakpoint needs samples below its upper
    // bound, and a deep-branch slope needs samples past the breakpoint.
    bool unidentifiable = false;
    const auto axis_value_for = [&](const FeatureSample& s) {
        switch (spec.kind) {
            case ModelKind::itu: return s.features.woodland_depth;
            case ModelKind::c: return s.features.foliage_area;
            default: return s.features.foliage_depth;
        }
    };
    for (std::size_t i = 0; i < dim; ++i) {
        const FreeParameter& p = spec.free_parameters[i];
        if (p.name == "breakpoint_m" || p.name == "breakpoint_m2") {
            bool below = false;
            for (const FeatureSample& s : spec.dataset)
                if (axis_value_for(s) < p.upper) below = true;
            if (!below) {
                result.warnings.push_back("objective is flat along '" + p.name +
                                          "': every sample saturates the breakpoint search range");
                unidentifiable = true;
            }
        }
        if (p.name == "l2_db_per_m" || p.name == "l2_db_per_m2") {
            double breakpoint = std::numeric_limits<double>::infinity();
            for (const FixedParameter& q : spec.fixed_parameters)
                if (q.name == "breakpoint_m" || q.name == "breakpoint_m2") breakpoint = q.value;
            for (std::size_t j = 0; j < dim; ++j)
                if (spec.free_parameters[j].name == "breakpoint_m" ||
                    spec.free_parameters[j].name == "breakpoint_m2")
                    breakpoint = fitted[j];
            bool beyond = false;
            for (const FeatureSample& s : spec.dataset)
                if (axis_value_for(s) > breakpoint) beyond = true;
            if (!beyond) {
                result.warnings.push_back("objective is flat along '" + p.name +
                                          "': no sample reaches past the breakpoint");
                unidentifiable = true;
            }
        }
    }
    for (const std::string& w : result.warnings)
        warn("fit", w);

    std::vector<double> all = slots;  // fixed values already in place
    for (std::size_t i = 0; i < dim; ++i) all[free_slots[i]] = fitted[i];
    const ModelParams params = assemble_params(spec.kind, all);
    validate_params(params);

    result.params = params;
    result.rmse_db = fx;
    result.objective_evaluations = objective.evaluations();
    result.converged = finished && !flat_grid && !unidentifiable;
    return result;
}

/// Exact least-squares solution for the per-tree loss of the AF model:
/// L0 = sum(N_i e_i) / sum(N_i^2) with e_i the measured excess over FSPL.
inline FitResult fit_af_closed_form(const std::vector<FeatureSample>& dataset, double f_c_ghz) {
    if (dataset.empty())
        throw error("fit_af_closed_form: dataset is empty");
    double num = 0.0;
    double den = 0.0;
    for (const FeatureSample& s : dataset) {
        if (!finite_sample(s))
            throw error("fit_af_closed_form: dataset contains non-finite records; sanitize_dataset() first");
        const double n = static_cast<double>(s.features.trunk_count);
        const double excess = s.path_loss_db - fspl_db(s.features.distance_3d, f_c_ghz);
        num += n * excess;
        den += n * n;
    }
    if (den == 0.0)
        throw error("fit_af_closed_form: every record has zero trunks; L0 is unconstrained");

    FitResult result;
    double l0 = num / den;
    if (l0 < 0.0) {
        result.warnings.push_back("least-squares per-tree loss was negative; clamped to 0");
        warn("fit", result.warnings.back());
        l0 = 0.0;
    }
    result.params = AfParams{l0};

    std::vector<double> predicted(dataset.size());
    std::vector<double> measured(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        predicted[i] = fspl_db(dataset[i].features.distance_3d, f_c_ghz) +
                       epl_af(dataset[i].features.trunk_count, AfParams{l0});
        measured[i] = dataset[i].path_loss_db;
    }
    result.rmse_db = rmse(predicted, measured);
    result.objective_evaluations = 1;
    result.converged = true;
    return result;
}

// ---------------------------------------------------------------------------

/// Outcome for one model in a comparison run; failed fits carry the error
/// text so the remaining models still report.
struct ModelFitOutcome {
    ModelKind kind = ModelKind::fspl;
    std::optional<FitResult> result;
    std::string failure;
};

struct FitAllOptions {
    FitOptions fit;
    double a1_breakpoint_m = 14.0;  // pinned so A-I keeps two adjustable parameters
    /// Per-model, per-parameter bound overrides.
    std::map<std::string, std::map<std::string, ParameterBounds>> bounds_overrides;
};

inline FitSpec default_fit_spec(ModelKind kind, std::vector<FeatureSample> dataset,
                                const FitAllOptions& options = {}) {
    FitSpec spec;
    spec.kind = kind;
    spec.dataset = std::move(dataset);
    const auto bounds_for = [&](const std::string& name) {
        ParameterBounds b = default_bounds(name);
        const auto model_it = options.bounds_overrides.find(std::string(model_name(kind)));
        if (model_it != options.bounds_overrides.end()) {
            const auto param_it = model_it->second.find(name);
            if (param_it != model_it->second.end()) b = param_it->second;
        }
        return b;
    };
    for (const std::string& name : parameter_names(kind)) {
        if (kind == ModelKind::a1 && name == "breakpoint_m") {
            spec.fixed_parameters.push_back({name, options.a1_breakpoint_m});
            continue;
        }
        const ParameterBounds b = bounds_for(name);
        spec.free_parameters.push_back({name, b.lower, b.upper});
    }
    return spec;
}

/// Evaluates a model with no free parameters (FSPL, WMED) on the dataset.
inline FitResult evaluate_fixed_model(ModelKind kind, const std::vector<FeatureSample>& dataset,
                                      double f_c_ghz, const PredictOptions& options = {}) {
    if (dataset.empty())
        throw error("evaluate_fixed_model: dataset is empty");
    FitResult result;
    result.params = assemble_params(kind, {});
    std::vector<double> predicted(dataset.size());
    std::vector<double> measured(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        predicted[i] = predict(dataset[i].features, result.params, f_c_ghz, options).total_db;
        measured[i] = dataset[i].path_loss_db;
    }
    result.rmse_db = rmse(predicted, measured);
    result.objective_evaluations = 1;
    result.converged = true;
    return result;
}

/// Fits every requested model independently: closed form for AF, fixed
/// evaluation for FSPL and WMED, bounded grid + simplex search otherwise.
/// Per-model failures are recorded and the remaining models continue.
inline std::vector<ModelFitOutcome> fit_all(const std::vector<FeatureSample>& dataset,
                                            const std::vector<ModelKind>& models, double f_c_ghz,
                                            const FitAllOptions& options = {}) {
    if (dataset.empty())
        throw error("fit_all: dataset is empty");
    const std::vector<FeatureSample> clean = sanitize_dataset(dataset);
    if (clean.empty())
        throw error("fit_all: no finite records remain after sanitizing");

    std::vector<ModelFitOutcome> outcomes;
    outcomes.reserve(models.size());
    for (ModelKind kind : models) {
        ModelFitOutcome outcome;
        outcome.kind = kind;
        try {
            switch (kind) {
                case ModelKind::fspl:
                case ModelKind::wmed:
                    outcome.result = evaluate_fixed_model(kind, clean, f_c_ghz, options.fit.predict);
                    break;
                case ModelKind::af:
                    outcome.result = fit_af_closed_form(clean, f_c_ghz);
                    break;
                default:
                    outcome.result = fit_params(default_fit_spec(kind, clean, options), f_c_ghz, options.fit);
                    break;
            }
        } catch (const std::exception& e) {
            outcome.failure = e.what();
            warn("fit", std::string(model_name(kind)) + ": " + e.what());
        }
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

}  // namespace sylva

#endif  // SYLVA_FITTING_HPP
