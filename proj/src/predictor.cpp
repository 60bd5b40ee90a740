#include "dfb/predictor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "dfb/analytic.hpp"
#include "dfb/error.hpp"
#include "dfb/planner.hpp"

namespace dfb {

double slope_from_profile(const ModuleProfile& module)
{
    return residency_benefit(module, Position::Middle).delta_ms;
}

std::vector<Prediction> predict(double intercept_s, double slope_ms_per_layer,
                                const std::vector<std::size_t>& k_values)
{
    if (!(intercept_s > 0.0) || !std::isfinite(intercept_s)) {
        throw ArgumentError(fmt::format("intercept must be > 0 s, got {}", intercept_s));
    }
    std::vector<Prediction> out;
    out.reserve(k_values.size());
    for (auto k : k_values) {
        out.push_back({k, intercept_s - static_cast<double>(k) * slope_ms_per_layer / 1000.0, 0.0});
    }
    return out;
}

void attach_vram(const ModelProfile& profile, std::string_view module,
                 std::vector<Prediction>& predictions)
{
    for (auto& p : predictions) {
        p.vram_total_mb = vram_report(profile, interleaved_placement(profile, module, p.k)).total_mb;
    }
}

ValidationReport validate(const std::vector<Prediction>& predictions,
                          const std::vector<MeasuredPoint>& measured)
{
    std::map<std::size_t, double> pred;
    for (const auto& p : predictions) {
        if (!pred.emplace(p.k, p.predicted_s).second) {
            throw ArgumentError(fmt::format("duplicate prediction for k = {}", p.k));
        }
    }
    std::map<std::size_t, double> meas;
    for (const auto& m : measured) {
        if (!(m.measured_s > 0.0)) {
            throw ArgumentError(fmt::format("measured time for k = {} must be > 0", m.k));
        }
        if (!meas.emplace(m.k, m.measured_s).second) {
            throw ArgumentError(fmt::format("duplicate measurement for k = {}", m.k));
        }
    }
    for (const auto& [k, _] : meas) {
        if (!pred.contains(k)) {
            throw ArgumentError(fmt::format("no prediction for measured k = {}", k));
        }
    }
    for (const auto& [k, _] : pred) {
        if (!meas.contains(k)) {
            throw ArgumentError(fmt::format("no measurement for predicted k = {}", k));
        }
    }

    ValidationReport report;
    for (const auto& [k, m] : meas) {
        const double p = pred.at(k);
        const double err = (p - m) / m * 100.0;
        report.rows.push_back({k, p, m, err});
        report.max_abs_error_pct = std::max(report.max_abs_error_pct, std::abs(err));
    }

    // Ordinary least squares of measured_s on k.
    const auto n = static_cast<double>(report.rows.size());
    if (report.rows.size() >= 2) {
        double mean_k = 0.0;
        double mean_y = 0.0;
        for (const auto& r : report.rows) {
            mean_k += static_cast<double>(r.k);
            mean_y += r.measured_s;
        }
        mean_k /= n;
        mean_y /= n;
        double sxx = 0.0;
        double sxy = 0.0;
        for (const auto& r : report.rows) {
            const double dk = static_cast<double>(r.k) - mean_k;
            sxx += dk * dk;
            sxy += dk * (r.measured_s - mean_y);
        }
        const double slope = sxy / sxx;
        report.fitted_slope_s = -slope;
        report.fitted_intercept_s = mean_y - slope * mean_k;
    }
    return report;
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <typename T>
T parse_field(std::string_view field, std::size_t line_no, const char* what)
{
    field = trim(field);
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(fmt::format("measured csv line {}: bad {} '{}'", line_no, what, field));
    }
    return value;
}

} // namespace

MeasuredSweep parse_measured_sweep(std::string_view text)
{
    MeasuredSweep sweep;
    auto& out = sweep.points;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = trim(text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const auto body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string_view::npos && trim(body.substr(0, eq)) == "slope_ms_per_layer") {
                const double slope = parse_field<double>(body.substr(eq + 1), line_no, "slope_ms_per_layer");
                if (!(slope >= 0.0)) {
                    throw ParseError(fmt::format("measured csv line {}: slope_ms_per_layer must be >= 0", line_no));
                }
                sweep.slope_ms_per_layer = slope;
            }
            continue;
        }
        if (!header_seen) {
            if (line != "k,measured_s") {
                throw ParseError(fmt::format("measured csv: expected header 'k,measured_s', got '{}'", line));
            }
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError(fmt::format("measured csv line {}: expected 2 fields", line_no));
        }
        out.push_back({parse_field<std::size_t>(line.substr(0, comma), line_no, "k"),
                       parse_field<double>(line.substr(comma + 1), line_no, "measured_s")});
    }
    if (!header_seen) {
        throw ParseError("measured csv: empty input");
    }
    return sweep;
}

MeasuredSweep load_measured_sweep(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(fmt::format("cannot open measured sweep '{}'", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_measured_sweep(buf.str());
}

std::vector<MeasuredPoint> parse_measured_csv(std::string_view text)
{
    return parse_measured_sweep(text).points;
}

std::vector<MeasuredPoint> load_measured_csv(const std::filesystem::path& path)
{
    return load_measured_sweep(path).points;
}

void write_validation_csv(const ValidationReport& report, std::ostream& out)
{
    out << "k,predicted_s,measured_s,error_pct\n";
    for (const auto& r : report.rows) {
        out << fmt::format("{},{:.3f},{:.3f},{:.2f}\n", r.k, r.predicted_s, r.measured_s, r.error_pct);
    }
}

} // namespace dfb
