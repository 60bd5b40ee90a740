#include "dfb/analytic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dfb/error.hpp"

namespace dfb {

std::string_view to_string(Position pos)
{
    switch (pos) {
    case Position::First: return "first";
    case Position::Middle: return "middle";
    case Position::Last: return "last";
    }
    return "?";
}

double phase_time_full_offload(const PhaseProfile& phase, std::size_t layers)
{
    const auto reps = static_cast<double>(phase.repetitions);
    const auto l = static_cast<double>(layers);
    if (classify(phase).kind == PhaseKind::ExeIntensive) {
        return reps * (phase.dma_ms + l * phase.exe_ms);
    }
    return reps * (l * phase.dma_ms + phase.exe_ms);
}

double module_time_full_offload(const ModuleProfile& module)
{
    double total = 0.0;
    for (const auto& phase : module.phases) {
        total += phase_time_full_offload(phase, module.layers);
    }
    return total;
}

LowerBound lower_bound(const ModelProfile& profile)
{
    LowerBound lb;
    for (const auto& m : profile.modules) {
        double ms = 0.0;
        for (const auto& p : m.phases) {
            ms += static_cast<double>(p.repetitions) * static_cast<double>(m.layers) * p.exe_ms;
        }
        lb.per_module_ms.emplace_back(m.name, ms);
        lb.total_ms += ms;
    }
    return lb;
}

double phase_position_delta(const PhaseProfile& phase, Position pos)
{
    const auto reps = static_cast<double>(phase.repetitions);
    if (classify(phase).kind == PhaseKind::ExeIntensive) {
        // Only the leading transfer is exposed.
        return pos == Position::First ? reps * phase.dma_ms : 0.0;
    }
    // The last layer's EXE is the trailing term already; removing its DMA
    // makes the penultimate EXE the new tail.
    return pos == Position::Last ? reps * (phase.dma_ms - phase.exe_ms) : reps * phase.dma_ms;
}

BenefitEntry residency_benefit(const ModuleProfile& module, Position pos)
{
    BenefitEntry e;
    e.module = module.name;
    e.position = pos;
    for (const auto& phase : module.phases) {
        e.delta_ms += phase_position_delta(phase, pos);
    }
    e.benefit_ms_per_mb = e.delta_ms / module.layer_mem_mb;
    return e;
}

std::size_t consecutive_limit(const PhaseProfile& phase)
{
    const auto c = classify(phase);
    if (c.kind != PhaseKind::DmaIntensive) {
        throw ArgumentError(fmt::format(
            "phase {}: consecutive residency limit undefined for EXE-intensive phase (r = {:.2f})",
            phase.name, c.ratio));
    }
    return static_cast<std::size_t>(std::floor(c.ratio));
}

const PhaseProfile& token_phase(const ModuleProfile& module)
{
    if (const auto* p = module.find_phase("decode")) {
        return *p;
    }
    return *std::max_element(module.phases.begin(), module.phases.end(),
                             [](const PhaseProfile& a, const PhaseProfile& b) {
                                 return a.repetitions < b.repetitions;
                             });
}

std::optional<std::size_t> crossover_tokens(const ModuleProfile& tokens_module,
                                            const ModuleProfile& other, std::size_t cap)
{
    double threshold = 0.0;
    for (Position pos : kPositions) {
        threshold = std::max(threshold, residency_benefit(other, pos).benefit_ms_per_mb);
    }

    const auto& tp = token_phase(tokens_module);
    const auto phase_idx = static_cast<std::size_t>(&tp - tokens_module.phases.data());
    ModuleProfile probe = tokens_module;
    for (std::size_t n = 1; n <= cap; ++n) {
        probe.phases[phase_idx].repetitions = n;
        if (residency_benefit(probe, Position::Middle).benefit_ms_per_mb > threshold) {
            return n;
        }
    }
    return std::nullopt;
}

} // namespace dfb
