#include "dfb/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dfb/analytic.hpp"
#include "dfb/error.hpp"
#include "dfb/planner.hpp"
#include "dfb/predictor.hpp"

#ifndef DFB_DEFAULT_FIXTURE_DIR
#define DFB_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace dfb::cli {

namespace fs = std::filesystem;

fs::path fixture_dir()
{
    if (const char* env = std::getenv("DFBPLAN_FIXTURES"); env != nullptr && *env != '\0') {
        return env;
    }
    return DFB_DEFAULT_FIXTURE_DIR;
}

fs::path resolve_input(std::string_view arg, std::string_view extension)
{
    const fs::path given(arg);
    std::vector<fs::path> tries{given, fs::path(std::string(arg) + std::string(extension))};
    if (given.is_relative()) {
        const auto dir = fixture_dir();
        for (const fs::path& name : {given, given.filename()}) {
            tries.push_back(dir / name);
            tries.push_back(dir / (name.string() + std::string(extension)));
        }
    }
    for (const auto& p : tries) {
        std::error_code ec;
        if (fs::is_regular_file(p, ec)) {
            return p;
        }
    }
    return given;
}

namespace {

std::size_t parse_count(std::string_view s)
{
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ArgumentError(fmt::format("expected a non-negative integer, got '{}'", s));
    }
    return v;
}

} // namespace

std::vector<std::size_t> parse_k_range(std::string_view text)
{
    std::vector<std::size_t> out;
    if (const auto dots = text.find(".."); dots != std::string_view::npos) {
        const auto lo = parse_count(text.substr(0, dots));
        const auto hi = parse_count(text.substr(dots + 2));
        if (hi < lo) {
            throw ArgumentError(fmt::format("empty k range '{}'", text));
        }
        for (auto k = lo; k <= hi; ++k) {
            out.push_back(k);
        }
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        out.push_back(parse_count(text.substr(pos, comma == text.npos ? text.npos : comma - pos)));
        if (comma == text.npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

std::string default_slope_module(const ModelProfile& profile)
{
    for (const auto& c : rank_candidates(profile)) {
        if (c.position == Position::Middle) {
            return c.module;
        }
    }
    return profile.modules.front().name;
}

Report analyze_report(const ModelProfile& profile)
{
    Report r;

    ReportTable phases{"phases",
                       {"module", "phase", "repetitions", "dma_ms", "exe_ms", "ratio", "kind",
                        "consecutive_limit", "full_offload_ms"},
                       {}};
    for (const auto& m : profile.modules) {
        for (const auto& p : m.phases) {
            const auto c = classify(p);
            phases.rows.push_back({
                Cell::str(m.name),
                Cell::str(p.name),
                Cell::integer(static_cast<long long>(p.repetitions)),
                Cell::ms(p.dma_ms),
                Cell::ms(p.exe_ms),
                Cell::fixed(c.ratio, 2),
                Cell::str(std::string(to_string(c.kind))),
                c.kind == PhaseKind::DmaIntensive
                    ? Cell::integer(static_cast<long long>(consecutive_limit(p)))
                    : Cell::null(),
                Cell::ms(phase_time_full_offload(p, m.layers)),
            });
        }
    }
    r.tables.push_back(std::move(phases));

    const auto lb = lower_bound(profile);
    ReportTable benefits{"benefits",
                         {"module", "type", "layers", "layer_mem_mb", "b_first", "b_middle", "b_last",
                          "delta_first_ms", "delta_middle_ms", "delta_last_ms", "full_offload_ms",
                          "lower_bound_ms"},
                         {}};
    double full_offload = 0.0;
    for (std::size_t i = 0; i < profile.modules.size(); ++i) {
        const auto& m = profile.modules[i];
        const auto bf = residency_benefit(m, Position::First);
        const auto bm = residency_benefit(m, Position::Middle);
        const auto bl = residency_benefit(m, Position::Last);
        const double t = module_time_full_offload(m);
        full_offload += t;
        benefits.rows.push_back({
            Cell::str(m.name),
            Cell::str(std::string(to_string(module_kind(m)))),
            Cell::integer(static_cast<long long>(m.layers)),
            Cell::mb(m.layer_mem_mb),
            Cell::benefit(bf.benefit_ms_per_mb),
            Cell::benefit(bm.benefit_ms_per_mb),
            Cell::benefit(bl.benefit_ms_per_mb),
            Cell::ms(bf.delta_ms),
            Cell::ms(bm.delta_ms),
            Cell::ms(bl.delta_ms),
            Cell::ms(t),
            Cell::ms(lb.per_module_ms[i].second),
        });
    }
    r.tables.push_back(std::move(benefits));

    ReportTable cross{"crossover", {"module", "token_phase", "versus", "crossover_tokens"}, {}};
    for (const auto& m : profile.modules) {
        if (m.find_phase("decode") == nullptr) {
            continue;
        }
        for (const auto& other : profile.modules) {
            if (&other == &m) {
                continue;
            }
            const auto n = crossover_tokens(m, other);
            cross.rows.push_back({Cell::str(m.name), Cell::str(token_phase(m).name),
                                  Cell::str(other.name),
                                  n ? Cell::integer(static_cast<long long>(*n)) : Cell::str("never")});
        }
    }
    if (!cross.rows.empty()) {
        r.tables.push_back(std::move(cross));
    }

    const auto vram = vram_report(profile, Placement{});
    r.summary = {
        {"hardware", Cell::str(profile.hardware.name)},
        {"lower_bound_ms", Cell::ms(lb.total_ms)},
        {"full_offload_ms", Cell::ms(full_offload)},
        {"buffer_mb", Cell::mb(vram.buffer_mb)},
        {"fixed_vram_mb", Cell::mb(vram.total_mb)},
    };
    return r;
}

namespace {

struct Output {
    ReportFormat format = ReportFormat::Table;
    std::string path;
};

void emit(const Report& report, const Output& o, std::ostream& out)
{
    if (o.path.empty()) {
        render(report, o.format, out);
        return;
    }
    std::ofstream f(o.path);
    if (!f) {
        throw Error(fmt::format("cannot write '{}'", o.path));
    }
    render(report, o.format, f);
}

ModelProfile load(const std::string& arg) { return load_profile(resolve_input(arg, ".json")); }

std::string join_indices(const Placement::LayerSet& s)
{
    std::string out;
    for (auto i : s) {
        out += (out.empty() ? "" : " ") + std::to_string(i);
    }
    return out;
}

void add_vram_summary(Report& r, const VramReport& v)
{
    r.summary.emplace_back("buffer_mb", Cell::mb(v.buffer_mb));
    r.summary.emplace_back("resident_mb", Cell::mb(v.resident_mb));
    r.summary.emplace_back("always_resident_mb", Cell::mb(v.always_resident_mb));
    r.summary.emplace_back("overhead_mb", Cell::mb(v.overhead_mb));
    r.summary.emplace_back("vram_total_mb", Cell::mb(v.total_mb));
    r.summary.emplace_back("fits", Cell::boolean(v.fits));
}

ReportTable placement_table(const ModelProfile& profile, const Placement& placement)
{
    ReportTable t{"placement", {"module", "layers", "resident", "resident_mb", "indices"}, {}};
    for (const auto& m : profile.modules) {
        const auto& s = placement.resident(m.name);
        t.rows.push_back({Cell::str(m.name), Cell::integer(static_cast<long long>(m.layers)),
                          Cell::integer(static_cast<long long>(s.size())),
                          Cell::mb(static_cast<double>(s.size()) * m.layer_mem_mb),
                          Cell::str(join_indices(s))});
    }
    return t;
}

// --- simulate -------------------------------------------------------------

struct SimulateArgs {
    std::string profile;
    std::string plan;
    std::vector<std::string> resident;
    std::string mode = "pipelined";
    bool prefetch = false;
    std::size_t slots = 2;
    std::string trace;
};

int cmd_simulate(const SimulateArgs& a, const Output& o, std::ostream& out, std::ostream& err)
{
    const auto profile = load(a.profile);

    Placement placement;
    if (!a.plan.empty()) {
        placement = load_plan_placement(a.plan);
    }
    for (const auto& item : a.resident) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ArgumentError(fmt::format("--resident expects module=k, got '{}'", item));
        }
        const auto module = item.substr(0, eq);
        const auto k = parse_count(std::string_view(item).substr(eq + 1));
        const auto& m = profile.modules[profile.module_index(module)];
        placement.set(m.name, k > 0 ? interleaved_indices(k, m.layers) : std::vector<std::size_t>{});
    }

    SimConfig cfg;
    if (a.mode == "pipelined") {
        cfg.mode = SimMode::Pipelined;
    } else if (a.mode == "sequential") {
        cfg.mode = SimMode::Sequential;
    } else {
        throw ArgumentError(fmt::format("unknown mode '{}'", a.mode));
    }
    cfg.cross_invocation_prefetch = a.prefetch;
    cfg.slot_count = a.slots;

    const auto tl = simulate(profile, placement, cfg);
    const auto vram = vram_report(profile, placement, cfg);
    if (!vram.fits) {
        err << fmt::format("dfbplan: warning: placement needs {:.1f} MB, exceeds {:.1f} MB VRAM\n",
                           vram.total_mb, profile.hardware.vram_mb);
    }
    if (!a.trace.empty()) {
        std::ofstream f(a.trace);
        if (!f) {
            throw Error(fmt::format("cannot write trace '{}'", a.trace));
        }
        write_trace_csv(tl, f);
    }

    Report r;
    r.tables.push_back(placement_table(profile, placement));

    ReportTable spans{"modules", {"module", "start_ms", "end_ms", "span_ms"}, {}};
    for (std::size_t mi = 0; mi < profile.modules.size(); ++mi) {
        double lo = tl.total_ms;
        double hi = 0.0;
        for (const auto& e : tl.events) {
            if (e.module == mi) {
                lo = std::min(lo, e.start_ms);
                hi = std::max(hi, e.end_ms);
            }
        }
        spans.rows.push_back({Cell::str(profile.modules[mi].name), Cell::ms(lo), Cell::ms(hi),
                              Cell::ms(hi - lo)});
    }
    r.tables.push_back(std::move(spans));

    r.summary = {
        {"mode", Cell::str(std::string(to_string(cfg.mode)))},
        {"slots", Cell::integer(static_cast<long long>(cfg.slot_count))},
        {"cross_invocation_prefetch", Cell::boolean(cfg.cross_invocation_prefetch)},
        {"total_ms", Cell::ms(tl.total_ms)},
        {"total_s", Cell::seconds(tl.total_ms / 1000.0)},
        {"lower_bound_ms", Cell::ms(lower_bound(profile).total_ms)},
    };
    add_vram_summary(r, vram);
    emit(r, o, out);
    return 0;
}

// --- plan -----------------------------------------------------------------

struct PlanArgs {
    std::string profile;
    double vram_mb = 0.0;
    std::string plan_out = "plan.json";
    std::size_t slots = 2;
};

int cmd_plan(const PlanArgs& a, const Output& o, std::ostream& out)
{
    const auto profile = load(a.profile);
    SimConfig cfg;
    cfg.slot_count = a.slots;
    const auto plan = plan_for_budget(profile, a.vram_mb, cfg);

    if (!a.plan_out.empty()) {
        std::ofstream f(a.plan_out);
        if (!f) {
            throw Error(fmt::format("cannot write plan '{}'", a.plan_out));
        }
        f << plan_to_json(plan);
    }

    Report r;
    ReportTable sel{"selections", {"order", "module", "position", "count", "benefit_ms_per_mb", "delta_ms"}, {}};
    const auto ranked = rank_candidates(profile);
    for (std::size_t i = 0; i < plan.selections.size(); ++i) {
        const auto& s = plan.selections[i];
        auto it = std::find_if(ranked.begin(), ranked.end(), [&](const Candidate& c) {
            return c.module == s.module && c.position == s.position;
        });
        sel.rows.push_back({Cell::integer(static_cast<long long>(i + 1)), Cell::str(s.module),
                            Cell::str(std::string(to_string(s.position))),
                            Cell::integer(static_cast<long long>(s.count)),
                            Cell::benefit(it->benefit_ms_per_mb), Cell::ms(it->delta_ms)});
    }
    r.tables.push_back(std::move(sel));
    r.tables.push_back(placement_table(profile, plan.placement));

    const double full = simulated_total(profile, Placement{}, cfg);
    r.summary = {
        {"budget_mb", Cell::mb(plan.budget_mb)},
        {"predicted_saving_ms", Cell::ms(plan.predicted_saving_ms)},
        {"full_offload_ms", Cell::ms(full)},
        {"simulated_total_ms", Cell::ms(*plan.simulated_total_ms)},
        {"simulated_saving_ms", Cell::ms(full - *plan.simulated_total_ms)},
        {"lower_bound_ms", Cell::ms(lower_bound(profile).total_ms)},
    };
    add_vram_summary(r, plan.vram);
    if (!a.plan_out.empty()) {
        r.summary.emplace_back("plan_file", Cell::str(a.plan_out));
    }
    emit(r, o, out);
    return 0;
}

// --- sweep / predict / validate ---------------------------------------------

struct Intercept {
    double seconds = 0.0;
    std::string source;
};

Intercept profile_intercept(const ModelProfile& profile)
{
    if (profile.calibration_total_s) {
        return {*profile.calibration_total_s, "calibration"};
    }
    return {simulated_total(profile, Placement{}) / 1000.0, "simulator"};
}

struct SweepArgs {
    std::string profile;
    std::string module;
    std::string k;
    std::optional<double> calibrate;
};

int cmd_sweep(const SweepArgs& a, const Output& o, std::ostream& out)
{
    const auto profile = load(a.profile);
    const auto module = a.module.empty() ? default_slope_module(profile) : a.module;
    const auto& m = profile.modules[profile.module_index(module)];
    const auto ks = a.k.empty() ? parse_k_range(fmt::format("0..{}", m.layers - 1)) : parse_k_range(a.k);

    const auto points = sweep(profile, m.name, ks);
    Intercept icpt = a.calibrate ? Intercept{*a.calibrate, "flag"} : profile_intercept(profile);
    const double slope = slope_from_profile(m);
    const auto pred = predict(icpt.seconds, slope, ks);

    Report r;
    ReportTable t{"sweep", {"k", "vram_total_mb", "simulated_s", "predicted_s"}, {}};
    for (std::size_t i = 0; i < points.size(); ++i) {
        t.rows.push_back({Cell::integer(static_cast<long long>(points[i].k)),
                          Cell::mb(points[i].vram_total_mb),
                          Cell::seconds(points[i].simulated_total_ms / 1000.0),
                          Cell::seconds(pred[i].predicted_s)});
    }
    r.tables.push_back(std::move(t));
    r.summary = {
        {"module", Cell::str(m.name)},
        {"slope_ms_per_layer", Cell::ms(slope)},
        {"intercept_s", Cell::seconds(icpt.seconds)},
        {"intercept_source", Cell::str(icpt.source)},
    };
    emit(r, o, out);
    return 0;
}

struct PredictArgs {
    std::string profile;
    std::optional<double> calibrate;
    std::optional<double> slope_ms;
    std::string module;
    std::string k;
};

// Profile used by predict / validate when no other slope source is given.
constexpr const char* kDefaultProfile = "rtx5070ti_alpamayo";

int cmd_predict(const PredictArgs& a, const Output& o, std::ostream& out)
{
    if (a.calibrate && !(*a.calibrate > 0.0)) {
        throw ArgumentError(fmt::format("--calibrate must be > 0 s, got {}", *a.calibrate));
    }
    const auto profile = load(a.profile.empty() ? kDefaultProfile : a.profile);
    const auto module = a.module.empty() ? default_slope_module(profile) : a.module;
    const auto& m = profile.modules[profile.module_index(module)];
    const auto ks = parse_k_range(a.k.empty() ? fmt::format("0..{}", m.layers - 1) : a.k);

    const Intercept icpt = a.calibrate ? Intercept{*a.calibrate, "flag"} : profile_intercept(profile);
    const double slope = a.slope_ms ? *a.slope_ms : slope_from_profile(m);
    auto preds = predict(icpt.seconds, slope, ks);
    attach_vram(profile, module, preds);

    Report r;
    ReportTable t{"predictions", {"k", "predicted_s", "vram_total_mb"}, {}};
    for (const auto& p : preds) {
        t.rows.push_back({Cell::integer(static_cast<long long>(p.k)), Cell::seconds(p.predicted_s),
                          Cell::mb(p.vram_total_mb)});
    }
    r.tables.push_back(std::move(t));
    r.summary = {
        {"hardware", Cell::str(profile.hardware.name)},
        {"module", Cell::str(module)},
        {"slope_ms_per_layer", Cell::ms(slope)},
        {"slope_source", Cell::str(a.slope_ms ? "flag" : "profile:" + module)},
        {"intercept_s", Cell::seconds(icpt.seconds)},
        {"intercept_source", Cell::str(icpt.source)},
    };
    emit(r, o, out);
    return 0;
}

struct ValidateArgs {
    std::string measured;
    std::string profile;
    std::optional<double> calibrate;
    std::optional<double> slope_ms;
    std::string module;
};

int cmd_validate(const ValidateArgs& a, const Output& o, std::ostream& out)
{
    const auto sweep_in = load_measured_sweep(resolve_input(a.measured, ".csv"));
    const auto& measured = sweep_in.points;
    if (a.calibrate && !(*a.calibrate > 0.0)) {
        throw ArgumentError(fmt::format("--calibrate must be > 0 s, got {}", *a.calibrate));
    }

    // Slope: flag, then an explicit profile, then the measured file, then the
    // default profile.
    double slope = 0.0;
    std::string slope_source;
    std::optional<ModelProfile> profile;
    if (!a.profile.empty()) {
        profile = load(a.profile);
    }
    if (a.slope_ms) {
        slope = *a.slope_ms;
        slope_source = "flag";
    } else if (!profile && sweep_in.slope_ms_per_layer) {
        slope = *sweep_in.slope_ms_per_layer;
        slope_source = "measured file";
    } else {
        if (!profile) {
            profile = load(kDefaultProfile);
        }
        const auto module = a.module.empty() ? default_slope_module(*profile) : a.module;
        slope = slope_from_profile(profile->modules[profile->module_index(module)]);
        slope_source = "profile:" + module;
    }

    // Intercept: flag, then the measured full-offload row, then the profile.
    Intercept icpt;
    if (a.calibrate) {
        icpt = {*a.calibrate, "flag"};
    } else if (auto it = std::find_if(measured.begin(), measured.end(),
                                      [](const MeasuredPoint& p) { return p.k == 0; });
               it != measured.end()) {
        icpt = {it->measured_s, "measured k=0"};
    } else {
        if (!profile) {
            profile = load(kDefaultProfile);
        }
        icpt = profile_intercept(*profile);
    }

    std::vector<std::size_t> ks;
    for (const auto& m : measured) {
        ks.push_back(m.k);
    }
    const auto report = validate(predict(icpt.seconds, slope, ks), measured);

    Report r;
    ReportTable t{"validation", {"k", "predicted_s", "measured_s", "error_pct"}, {}};
    for (const auto& row : report.rows) {
        t.rows.push_back({Cell::integer(static_cast<long long>(row.k)), Cell::seconds(row.predicted_s),
                          Cell::seconds(row.measured_s), Cell::fixed(row.error_pct, 2)});
    }
    r.tables.push_back(std::move(t));
    r.summary = {
        {"max_abs_error_pct", Cell::fixed(report.max_abs_error_pct, 2)},
        {"fitted_slope_s", report.fitted_slope_s ? Cell::seconds(*report.fitted_slope_s) : Cell::null()},
        {"slope_ms_per_layer", Cell::ms(slope)},
        {"slope_source", Cell::str(slope_source)},
        {"intercept_s", Cell::seconds(icpt.seconds)},
        {"intercept_source", Cell::str(icpt.source)},
    };
    emit(r, o, out);
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Plan and simulate layer-wise CPU-to-GPU parameter swapping pipelines", "dfbplan"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "table";
    Output output;
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--out", output.path, "Write the report to a file instead of stdout");

    auto* analyze = app.add_subcommand("analyze", "Classify phases and compute residency benefits");
    std::string analyze_profile;
    analyze->add_option("profile", analyze_profile, "Profile file or fixture name")->required();

    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate the transfer/compute pipeline");
    SimulateArgs sim;
    simulate_cmd->add_option("profile", sim.profile, "Profile file or fixture name")->required();
    simulate_cmd->add_option("--plan", sim.plan, "Plan file with a placement");
    simulate_cmd->add_option("--resident", sim.resident, "module=k: k interleaved resident layers");
    simulate_cmd->add_option("--mode", sim.mode, "pipelined or sequential")
        ->check(CLI::IsMember({"pipelined", "sequential"}));
    simulate_cmd->add_flag("--prefetch", sim.prefetch, "Allow transfers across invocation barriers");
    simulate_cmd->add_option("--slots", sim.slots, "Device buffer slots")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--trace", sim.trace, "Write the event trace as CSV");

    auto* plan_cmd = app.add_subcommand("plan", "Choose resident layers for a VRAM budget");
    PlanArgs plan;
    plan_cmd->add_option("profile", plan.profile, "Profile file or fixture name")->required();
    plan_cmd->add_option("--vram-mb", plan.vram_mb, "VRAM budget in MB")->required();
    plan_cmd->add_option("--plan-out", plan.plan_out, "Plan file to write (empty: none)");
    plan_cmd->add_option("--slots", plan.slots, "Device buffer slots")->check(CLI::PositiveNumber);

    auto* sweep_cmd = app.add_subcommand("sweep", "Simulate k interleaved resident layers over a range");
    SweepArgs sw;
    sweep_cmd->add_option("profile", sw.profile, "Profile file or fixture name")->required();
    sweep_cmd->add_option("--module", sw.module, "Module to sweep");
    sweep_cmd->add_option("--k", sw.k, "k values: a..b, a,b,c or a");
    sweep_cmd->add_option("--calibrate", sw.calibrate, "Measured full-offload time (s)");

    auto* predict_cmd = app.add_subcommand("predict", "Predict the latency curve from one measurement");
    PredictArgs pr;
    predict_cmd->add_option("profile", pr.profile, "Profile file or fixture name (default rtx5070ti_alpamayo)");
    predict_cmd->add_option("--calibrate", pr.calibrate, "Measured full-offload time (s)");
    predict_cmd->add_option("--slope-ms", pr.slope_ms, "Saving per resident layer (ms)");
    predict_cmd->add_option("--module", pr.module, "Module whose layers are made resident");
    predict_cmd->add_option("--k", pr.k, "k values: a..b, a,b,c or a");

    auto* validate_cmd = app.add_subcommand("validate", "Compare predictions with a measured sweep");
    ValidateArgs va;
    validate_cmd->add_option("measured", va.measured, "CSV with header k,measured_s")->required();
    validate_cmd->add_option("--profile", va.profile, "Profile supplying the slope");
    validate_cmd->add_option("--calibrate", va.calibrate, "Measured full-offload time (s)");
    validate_cmd->add_option("--slope-ms", va.slope_ms, "Saving per resident layer (ms)");
    validate_cmd->add_option("--module", va.module, "Module whose layers are made resident");

    std::vector<std::string> argv_store{"dfbplan"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) {
        argv.push_back(s.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "dfbplan: error: " << e.what() << '\n';
        return 2;
    }

    output.format = *parse_report_format(format);
    try {
        if (*analyze) {
            emit(analyze_report(load(analyze_profile)), output, out);
            return 0;
        }
        if (*simulate_cmd) {
            return cmd_simulate(sim, output, out, err);
        }
        if (*plan_cmd) {
            return cmd_plan(plan, output, out);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sw, output, out);
        }
        if (*predict_cmd) {
            return cmd_predict(pr, output, out);
        }
        if (*validate_cmd) {
            return cmd_validate(va, output, out);
        }
    } catch (const ArgumentError& e) {
        err << "dfbplan: error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "dfbplan: error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace dfb::cli
