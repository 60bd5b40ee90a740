#pragma once

// Linear latency prediction from one full-offload measurement:
//   total(k) = total(0) - k * (Middle-layer saving)

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "dfb/profile.hpp"

namespace dfb {

struct Prediction {
    std::size_t k = 0;
    double predicted_s = 0.0;
    double vram_total_mb = 0.0;
};

struct MeasuredPoint {
    std::size_t k = 0;
    double measured_s = 0.0;
};

struct ValidationRow {
    std::size_t k = 0;
    double predicted_s = 0.0;
    double measured_s = 0.0;
    double error_pct = 0.0; // (predicted - measured) / measured * 100
};

struct ValidationReport {
    std::vector<ValidationRow> rows; // ascending k
    double max_abs_error_pct = 0.0;
    /// Least-squares decrease per resident layer over the measured rows, in
    /// seconds (positive when latency falls with k). Empty for < 2 distinct k.
    std::optional<double> fitted_slope_s;
    std::optional<double> fitted_intercept_s;
};

/// Middle-position saving of one layer (ms per layer). Zero when the module
/// gains nothing from middle residency.
double slope_from_profile(const ModuleProfile& module);

/// predicted_s = intercept_s - k * slope_ms_per_layer / 1000.
/// Throws ArgumentError if intercept_s <= 0.
std::vector<Prediction> predict(double intercept_s, double slope_ms_per_layer,
                                const std::vector<std::size_t>& k_values);

/// Fill vram_total_mb with the interleaved-placement footprint for `module`.
void attach_vram(const ModelProfile& profile, std::string_view module,
                 std::vector<Prediction>& predictions);

/// Throws ArgumentError when the k sets differ.
ValidationReport validate(const std::vector<Prediction>& predictions,
                          const std::vector<MeasuredPoint>& measured);

struct MeasuredSweep {
    std::vector<MeasuredPoint> points;
    /// From a `# slope_ms_per_layer=<ms>` line, if present.
    std::optional<double> slope_ms_per_layer;
};

/// Header `k,measured_s`. Lines starting with `#` are comments; `# key=value`
/// comments carry metadata (only slope_ms_per_layer is interpreted).
MeasuredSweep parse_measured_sweep(std::string_view text);
MeasuredSweep load_measured_sweep(const std::filesystem::path& path);

std::vector<MeasuredPoint> parse_measured_csv(std::string_view text);
std::vector<MeasuredPoint> load_measured_csv(const std::filesystem::path& path);

/// Header `k,predicted_s,measured_s,error_pct`.
void write_validation_csv(const ValidationReport& report, std::ostream& out);

} // namespace dfb
