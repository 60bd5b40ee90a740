#include "dfb/planner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "dfb/error.hpp"

namespace dfb {

using json = nlohmann::json;

std::vector<std::size_t> interleaved_indices(std::size_t k, std::size_t layers)
{
    if (k == 0) {
        return {};
    }
    if (layers < 2) {
        throw ArgumentError(fmt::format("interleaved placement needs at least 2 layers, got {}", layers));
    }
    if (k > layers - 1) {
        throw ArgumentError(fmt::format(
            "k = {} exceeds L-1 = {}: the last layer must stay offloaded", k, layers - 1));
    }
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.push_back(i * (layers - 1) / k);
    }
    return out;
}

std::vector<Candidate> rank_candidates(const ModelProfile& profile)
{
    struct Keyed {
        Candidate c;
        std::size_t module_order;
    };
    std::vector<Keyed> all;
    for (std::size_t mi = 0; mi < profile.modules.size(); ++mi) {
        const auto& m = profile.modules[mi];
        for (Position pos : kPositions) {
            std::size_t cap = 0;
            switch (pos) {
            case Position::First: cap = 1; break;
            case Position::Middle: cap = m.layers >= 2 ? m.layers - 2 : 0; break;
            case Position::Last: cap = m.layers >= 2 ? 1 : 0; break;
            }
            if (cap == 0) {
                continue;
            }
            const auto b = residency_benefit(m, pos);
            all.push_back({{m.name, pos, b.benefit_ms_per_mb, b.delta_ms, m.layer_mem_mb, cap}, mi});
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const Keyed& a, const Keyed& b) {
        if (a.c.benefit_ms_per_mb != b.c.benefit_ms_per_mb) {
            return a.c.benefit_ms_per_mb > b.c.benefit_ms_per_mb;
        }
        if (a.module_order != b.module_order) {
            return a.module_order < b.module_order;
        }
        return static_cast<int>(a.c.position) < static_cast<int>(b.c.position);
    });
    std::vector<Candidate> out;
    out.reserve(all.size());
    for (auto& k : all) {
        out.push_back(std::move(k.c));
    }
    return out;
}

double fixed_vram_mb(const ModelProfile& profile, const SimConfig& cfg)
{
    return vram_report(profile, Placement{}, cfg).total_mb;
}

namespace {

struct ModuleChoice {
    bool first = false;
    std::size_t middle = 0;
    bool last = false;
};

Placement materialize(const ModelProfile& profile, const std::map<std::string, ModuleChoice>& choice)
{
    Placement placement;
    for (const auto& m : profile.modules) {
        auto it = choice.find(m.name);
        if (it == choice.end()) {
            continue;
        }
        const auto& c = it->second;
        const std::size_t k = (c.first ? 1 : 0) + c.middle;
        std::vector<std::size_t> idx;
        if (m.layers == 1) {
            if (k > 0) {
                idx.push_back(0);
            }
        } else {
            idx = interleaved_indices(k, m.layers);
        }
        if (c.last) {
            idx.push_back(m.layers - 1);
        }
        if (!idx.empty()) {
            placement.set(m.name, idx);
        }
    }
    return placement;
}

VramReport budget_report(const ModelProfile& profile, const Placement& placement,
                         const SimConfig& cfg, double budget_mb)
{
    auto r = vram_report(profile, placement, cfg);
    r.fits = r.total_mb <= budget_mb;
    return r;
}

// Same summation order as vram_report, so the affordability test and the
// final report never disagree by rounding.
double total_with_counts(const ModelProfile& profile, const std::map<std::string, std::size_t>& counts,
                         const SimConfig& cfg)
{
    VramReport r;
    r.buffer_mb = static_cast<double>(cfg.slot_count) * profile.max_layer_mem_mb();
    for (const auto& m : profile.modules) {
        auto it = counts.find(m.name);
        const std::size_t n = it == counts.end() ? 0 : it->second;
        r.resident_mb += static_cast<double>(n) * m.layer_mem_mb;
    }
    return r.buffer_mb + r.resident_mb + profile.always_resident_mb + profile.hardware.overhead_mb;
}

} // namespace

Plan plan_for_budget(const ModelProfile& profile, double vram_budget_mb, const SimConfig& cfg,
                     bool run_simulation)
{
    const double fixed = fixed_vram_mb(profile, cfg);
    if (!(fixed <= vram_budget_mb)) {
        throw InfeasibleError(fmt::format(
            "VRAM budget {:.1f} MB is below fixed costs {:.1f} MB (buffers + always-resident + overhead)",
            vram_budget_mb, fixed));
    }

    Plan plan;
    plan.budget_mb = vram_budget_mb;
    std::map<std::string, std::size_t> counts;
    std::map<std::string, ModuleChoice> choice;

    for (const auto& cand : rank_candidates(profile)) {
        std::size_t n = cand.capacity;
        auto trial = counts;
        while (n > 0) {
            trial[cand.module] = counts[cand.module] + n;
            if (total_with_counts(profile, trial, cfg) <= vram_budget_mb) {
                break;
            }
            --n;
        }
        if (n == 0) {
            continue;
        }
        counts[cand.module] += n;
        auto& c = choice[cand.module];
        switch (cand.position) {
        case Position::First: c.first = true; break;
        case Position::Middle: c.middle += n; break;
        case Position::Last: c.last = true; break;
        }
        plan.selections.push_back({cand.module, cand.position, n});
        plan.predicted_saving_ms += static_cast<double>(n) * cand.delta_ms;
    }

    plan.placement = materialize(profile, choice);
    for (const auto& m : profile.modules) {
        plan.resident_count[m.name] = plan.placement.count(m.name);
    }
    plan.vram = budget_report(profile, plan.placement, cfg, vram_budget_mb);
    if (run_simulation) {
        plan.simulated_total_ms = simulated_total(profile, plan.placement, cfg);
    }
    return plan;
}

Placement interleaved_placement(const ModelProfile& profile, std::string_view module, std::size_t k)
{
    const auto& m = profile.modules[profile.module_index(module)];
    Placement p;
    if (k > 0) {
        p.set(m.name, interleaved_indices(k, m.layers));
    }
    return p;
}

std::vector<SweepPoint> sweep(const ModelProfile& profile, std::string_view module,
                              const std::vector<std::size_t>& k_values, const SimConfig& cfg)
{
    std::vector<SweepPoint> out;
    out.reserve(k_values.size());
    for (auto k : k_values) {
        SweepPoint pt;
        pt.k = k;
        pt.placement = interleaved_placement(profile, module, k);
        pt.simulated_total_ms = simulated_total(profile, pt.placement, cfg);
        pt.vram_total_mb = vram_report(profile, pt.placement, cfg).total_mb;
        out.push_back(std::move(pt));
    }
    return out;
}

std::string plan_to_json(const Plan& plan)
{
    json doc;
    json placement = json::object();
    for (const auto& [name, layers] : plan.placement.modules()) {
        placement[name] = std::vector<std::size_t>(layers.begin(), layers.end());
    }
    doc["placement"] = std::move(placement);
    doc["resident_count"] = plan.resident_count;
    doc["budget_mb"] = plan.budget_mb;
    doc["predicted_saving_ms"] = plan.predicted_saving_ms;
    doc["vram"] = {
        {"buffer_mb", plan.vram.buffer_mb},
        {"resident_mb", plan.vram.resident_mb},
        {"always_resident_mb", plan.vram.always_resident_mb},
        {"overhead_mb", plan.vram.overhead_mb},
        {"total_mb", plan.vram.total_mb},
        {"fits", plan.vram.fits},
    };
    if (plan.simulated_total_ms) {
        doc["simulated_total_ms"] = *plan.simulated_total_ms;
    }
    return doc.dump(2) + "\n";
}

Placement parse_plan_placement(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("malformed plan: {}", e.what()));
    }
    if (!doc.is_object() || !doc.contains("placement") || !doc["placement"].is_object()) {
        throw ParseError("plan: missing object 'placement'");
    }
    Placement p;
    for (const auto& [name, layers] : doc["placement"].items()) {
        if (!layers.is_array()) {
            throw ParseError(fmt::format("plan: placement.{} must be an array", name));
        }
        std::vector<std::size_t> idx;
        for (const auto& v : layers) {
            if (!v.is_number_unsigned()) {
                throw ParseError(fmt::format("plan: placement.{} must hold non-negative integers", name));
            }
            idx.push_back(v.get<std::size_t>());
        }
        p.set(name, idx);
    }
    return p;
}

Placement load_plan_placement(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(fmt::format("cannot open plan '{}'", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_plan_placement(buf.str());
}

} // namespace dfb
