// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SYLVA_EVALUATION_HPP
#define SYLVA_EVALUATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sylva/core.hpp"
#include "sylva/fitting.hpp"
#include "sylva/models.hpp"

namespace sylva {

/// Blockage-feature axis a regional report is windowed along.
enum class BlockageAxis { d_w, d_f, a_f };

inline std::string_view axis_name(BlockageAxis axis) {
    switch (axis) {
        case BlockageAxis::d_w: return "d_w";
        case BlockageAxis::d_f: return "d_f";
        case BlockageAxis::a_f: return "a_f";
    }
    throw error("axis_name: unknown axis");
}

inline BlockageAxis parse_axis_name(std::string_view name) {
    if (name == "d_w" || name == "dw") return BlockageAxis::d_w;
    if (name == "d_f" || name == "df") return BlockageAxis::d_f;
    if (name == "a_f" || name == "af") return BlockageAxis::a_f;
    throw error("unknown blockage axis '" + std::string(name) + "' (expected d_w, d_f or a_f)");
}

/// The axis a model's excess loss is driven by; distance-only models report
/// along the woodland depth.
inline BlockageAxis default_axis_for(ModelKind kind) {
    switch (kind) {
        case ModelKind::fspl:
        case ModelKind::af:
        case ModelKind::itu: return BlockageAxis::d_w;
        case ModelKind::wmed:
        case ModelKind::a1:
        case ModelKind::a2:
        case ModelKind::b: return BlockageAxis::d_f;
        case ModelKind::c: return BlockageAxis::a_f;
    }
    throw error("default_axis_for: unknown model kind");
}

inline double axis_value(const SiteFeatures& features, BlockageAxis axis) {
    switch (axis) {
        case BlockageAxis::d_w: return features.woodland_depth;
        case BlockageAxis::d_f: return features.foliage_depth;
        case BlockageAxis::a_f: return features.foliage_area;
    }
    throw error("axis_value: unknown axis");
}

struct RegionalWindow {
    double window_start = 0.0;
    double window_end = 0.0;
    std::size_t sample_count = 0;
    std::optional<double> rmse_db;  // absent for empty windows
    bool low_confidence = false;    // fewer than 3 samples
};

struct EvalReport {
    std::string model_name;
    double overall_rmse_db = 0.0;
    double mean_error_db = 0.0;  // mean(predicted - measured), signed bias
    std::size_t sample_count = 0;
    BlockageAxis axis = BlockageAxis::d_w;
    double window_width = 0.0;  // 0 when the report is overall-only
    std::vector<RegionalWindow> regional;
};

struct EvalOptions {
    PredictOptions predict;
    /// 0 keeps tumbling windows (step = width); a positive value slides the
    /// window start by this much instead, trading the exact partition
    /// property for smoothness.
    double window_step = 0.0;
};

namespace detail {

struct EvalPoint {
    double axis = 0.0;
    double predicted = 0.0;
    double measured = 0.0;
};

inline std::vector<EvalPoint> evaluate_points(const std::vector<FeatureSample>& dataset,
                                              const ModelParams& params, double f_c_ghz,
                                              BlockageAxis axis, const PredictOptions& options) {
    if (dataset.empty())
        throw error("evaluate: dataset is empty");
    std::vector<EvalPoint> points;
    points.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const FeatureSample& s = dataset[i];
        if (!finite_sample(s)) {
            warn("evaluate", "record " + std::to_string(i) + " has non-finite features; dropped");
            continue;
        }
        const double v = axis_value(s.features, axis);
        if (v < 0.0)
            throw error("evaluate: record " + std::to_string(i) + " has a negative axis value");
        points.push_back({v, predict(s.features, params, f_c_ghz, options).total_db, s.path_loss_db});
    }
    if (points.empty())
        throw error("evaluate: no finite records remain");
    return points;
}

inline void fill_overall(EvalReport& report, const std::vector<EvalPoint>& points) {
    double sum_sq = 0.0;
    double sum_err = 0.0;
    for (const EvalPoint& p : points) {
        const double e = p.predicted - p.measured;
        sum_sq += e * e;
        sum_err += e;
    }
    report.sample_count = points.size();
    report.overall_rmse_db = std::sqrt(sum_sq / static_cast<double>(points.size()));
    report.mean_error_db = sum_err / static_cast<double>(points.size());
}

}  // namespace detail

/// Whole-dataset RMSE and signed bias for one parameterized model.
inline EvalReport evaluate_overall(const std::vector<FeatureSample>& dataset, const ModelParams& params,
                                   double f_c_ghz, const EvalOptions& options = {}) {
    EvalReport report;
    report.model_name = std::string(model_name(kind_of(params)));
    report.axis = default_axis_for(kind_of(params));
    const auto points = detail::evaluate_points(dataset, params, f_c_ghz, report.axis, options.predict);
    detail::fill_overall(report, points);
    return report;
}

/// Windowed RMSE along a blockage axis. Tumbling half-open windows
/// [k*w, (k+1)*w) anchored at 0 by default; options.window_step slides them.
inline EvalReport evaluate_regional(const std::vector<FeatureSample>& dataset, const ModelParams& params,
                                    double f_c_ghz, BlockageAxis axis, double window_width,
                                    const EvalOptions& options = {}) {
    if (!(window_width > 0.0) || !std::isfinite(window_width))
        throw error("evaluate_regional: window width must be positive");
    const double step = options.window_step > 0.0 ? options.window_step : window_width;

    EvalReport report;
    report.model_name = std::string(model_name(kind_of(params)));
    report.axis = axis;
    report.window_width = window_width;
    const auto points = detail::evaluate_points(dataset, params, f_c_ghz, axis, options.predict);
    detail::fill_overall(report, points);

    double max_axis = 0.0;
    for (const detail::EvalPoint& p : points) max_axis = std::max(max_axis, p.axis);
    const std::size_t last = static_cast<std::size_t>(std::floor(max_axis / step));

    report.regional.reserve(last + 1);
    for (std::size_t k = 0; k <= last; ++k) {
        RegionalWindow w;
        w.window_start = static_cast<double>(k) * step;
        w.window_end = w.window_start + window_width;
        double sum_sq = 0.0;
        for (const detail::EvalPoint& p : points) {
            if (p.axis >= w.window_start && p.axis < w.window_end) {
                const double e = p.predicted - p.measured;
                sum_sq += e * e;
                ++w.sample_count;
            }
        }
        if (w.sample_count > 0)
            w.rmse_db = std::sqrt(sum_sq / static_cast<double>(w.sample_count));
        w.low_confidence = w.sample_count < 3;
        report.regional.push_back(w);
    }
    return report;
}

// ---------------------------------------------------------------------------

struct ComparisonRow {
    double window_start = 0.0;
    double window_end = 0.0;
    std::size_t sample_count = 0;
    std::optional<double> baseline_rmse_db;
    std::vector<std::optional<double>> model_rmse_db;     // parallel to model_names
    std::vector<std::optional<double>> improvement_db;    // baseline minus model
};

struct RegionalComparison {
    BlockageAxis axis = BlockageAxis::d_w;
    double window_width = 0.0;
    std::string baseline_model;
    std::vector<std::string> model_names;  // non-baseline models, input order
    std::vector<ComparisonRow> rows;
};

/// Per-window improvement of each fitted model over a baseline, all models
/// windowed identically on the same dataset. Improvement is null wherever
/// either side has no samples.
inline RegionalComparison compare_models(const std::vector<FeatureSample>& dataset,
                                         const std::vector<ModelFitOutcome>& outcomes, double f_c_ghz,
                                         BlockageAxis axis, double window_width,
                                         std::string_view baseline, const EvalOptions& options = {}) {
    const ModelFitOutcome* base = nullptr;
    for (const ModelFitOutcome& o : outcomes)
        if (o.result && model_name(o.kind) == baseline) base = &o;
    if (base == nullptr)
        throw error("compare_models: baseline '" + std::string(baseline) +
                    "' is not among the successfully fitted models");

    RegionalComparison cmp;
    cmp.axis = axis;
    cmp.window_width = window_width;
    cmp.baseline_model = std::string(baseline);

    const EvalReport base_report =
        evaluate_regional(dataset, base->result->params, f_c_ghz, axis, window_width, options);
    cmp.rows.resize(base_report.regional.size());
    for (std::size_t k = 0; k < base_report.regional.size(); ++k) {
        const RegionalWindow& w = base_report.regional[k];
        cmp.rows[k].window_start = w.window_start;
        cmp.rows[k].window_end = w.window_end;
        cmp.rows[k].sample_count = w.sample_count;
        cmp.rows[k].baseline_rmse_db = w.rmse_db;
    }

    for (const ModelFitOutcome& o : outcomes) {
        if (!o.result || &o == base) continue;
        cmp.model_names.push_back(std::string(model_name(o.kind)));
        const EvalReport report =
            evaluate_regional(dataset, o.result->params, f_c_ghz, axis, window_width, options);
        if (report.regional.size() != cmp.rows.size())
            throw error("compare_models: window mismatch between models");
        for (std::size_t k = 0; k < cmp.rows.size(); ++k) {
            ComparisonRow& row = cmp.rows[k];
            row.model_rmse_db.push_back(report.regional[k].rmse_db);
            if (row.baseline_rmse_db && report.regional[k].rmse_db)
                row.improvement_db.push_back(*row.baseline_rmse_db - *report.regional[k].rmse_db);
            else
                row.improvement_db.push_back(std::nullopt);
        }
    }
    return cmp;
}

// ---------------------------------------------------------------------------
// Plot-data exports, all at 4 decimal places.

inline constexpr std::string_view scatter_csv_header = "axis_value,measured_db,predicted_db,residual_db";

/// One scatter row per record: feature value, measurement, prediction and
/// residual (measured minus predicted).
inline std::string scatter_csv(const std::vector<FeatureSample>& dataset, const ModelParams& params,
                               double f_c_ghz, BlockageAxis axis, const EvalOptions& options = {}) {
    const auto points = detail::evaluate_points(dataset, params, f_c_ghz, axis, options.predict);
    std::string out(scatter_csv_header);
    out.push_back('\n');
    for (const detail::EvalPoint& p : points) {
        out += format_fixed(p.axis, 4);
        out.push_back(',');
        out += format_fixed(p.measured, 4);
        out.push_back(',');
        out += format_fixed(p.predicted, 4);
        out.push_back(',');
        out += format_fixed(p.measured - p.predicted, 4);
        out.push_back('\n');
    }
    return out;
}

struct ScatterPoint {
    double axis_value = 0.0;
    double measured_db = 0.0;
    double predicted_db = 0.0;
    double residual_db = 0.0;
};

inline std::vector<ScatterPoint> parse_scatter_csv(std::string_view text) {
    std::vector<ScatterPoint> points;
    detail::for_each_csv_row(text, scatter_csv_header, [&](std::size_t line_no, const std::vector<std::string_view>& fields) {
        if (fields.size() != 4)
            throw error("scatter csv line " + std::to_string(line_no) + ": expected 4 fields");
        ScatterPoint p;
        p.axis_value = detail::parse_field(fields[0], line_no, "axis_value");
        p.measured_db = detail::parse_field(fields[1], line_no, "measured_db");
        p.predicted_db = detail::parse_field(fields[2], line_no, "predicted_db");
        p.residual_db = detail::parse_field(fields[3], line_no, "residual_db");
        points.push_back(p);
    });
    return points;
}

inline constexpr std::string_view regional_csv_header = "window_start,window_end,sample_count,rmse_db";

/// Regional bar data; the rmse field is left empty for windows with no
/// samples.
inline std::string regional_csv(const EvalReport& report) {
    std::string out(regional_csv_header);
    out.push_back('\n');
    for (const RegionalWindow& w : report.regional) {
        out += format_fixed(w.window_start, 4);
        out.push_back(',');
        out += format_fixed(w.window_end, 4);
        out.push_back(',');
        out += std::to_string(w.sample_count);
        out.push_back(',');
        if (w.rmse_db) out += format_fixed(*w.rmse_db, 4);
        out.push_back('\n');
    }
    return out;
}

/// Comparison rows keyed by window center, one rmse/improvement column pair
/// per model.
inline std::string comparison_csv(const RegionalComparison& cmp) {
    std::string out = "window_center,baseline_rmse_db";
    for (const std::string& name : cmp.model_names) {
        out += "," + name + "_rmse_db," + name + "_improvement_db";
    }
    out.push_back('\n');
    for (const ComparisonRow& row : cmp.rows) {
        out += format_fixed(0.5 * (row.window_start + row.window_end), 4);
        out.push_back(',');
        if (row.baseline_rmse_db) out += format_fixed(*row.baseline_rmse_db, 4);
        for (std::size_t m = 0; m < cmp.model_names.size(); ++m) {
            out.push_back(',');
            if (row.model_rmse_db[m]) out += format_fixed(*row.model_rmse_db[m], 4);
            out.push_back(',');
            if (row.improvement_db[m]) out += format_fixed(*row.improvement_db[m], 4);
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace sylva

#endif  // SYLVA_EVALUATION_HPP
