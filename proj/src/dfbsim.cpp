#include "dfb/dfbsim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "dfb/error.hpp"

namespace dfb {

namespace {
const Placement::LayerSet kEmpty;
}

Placement Placement::full(const ModelProfile& profile)
{
    Placement p;
    for (const auto& m : profile.modules) {
        auto& s = p.sets_[m.name];
        for (std::size_t i = 0; i < m.layers; ++i) {
            s.insert(s.end(), i);
        }
    }
    return p;
}

void Placement::add(const std::string& module, std::size_t layer) { sets_[module].insert(layer); }

void Placement::set(const std::string& module, const std::vector<std::size_t>& layers)
{
    sets_[module] = LayerSet(layers.begin(), layers.end());
}

const Placement::LayerSet& Placement::resident(std::string_view module) const
{
    auto it = sets_.find(module);
    return it == sets_.end() ? kEmpty : it->second;
}

bool Placement::is_resident(std::string_view module, std::size_t layer) const
{
    return resident(module).contains(layer);
}

std::size_t Placement::count(std::string_view module) const { return resident(module).size(); }

std::size_t Placement::total_count() const
{
    std::size_t n = 0;
    for (const auto& [_, s] : sets_) {
        n += s.size();
    }
    return n;
}

double Placement::resident_mb(const ModelProfile& profile) const
{
    double mb = 0.0;
    for (const auto& m : profile.modules) {
        mb += static_cast<double>(count(m.name)) * m.layer_mem_mb;
    }
    return mb;
}

void Placement::check(const ModelProfile& profile) const
{
    for (const auto& [name, layers] : sets_) {
        const auto* m = profile.find_module(name);
        if (m == nullptr) {
            throw ArgumentError(fmt::format("placement names unknown module '{}'", name));
        }
        if (!layers.empty() && *layers.rbegin() >= m->layers) {
            throw ArgumentError(fmt::format("placement index {} out of range for module {} (L={})",
                                            *layers.rbegin(), name, m->layers));
        }
    }
}

std::string_view to_string(SimMode mode)
{
    return mode == SimMode::Sequential ? "sequential" : "pipelined";
}

std::string_view to_string(Engine engine) { return engine == Engine::Copy ? "copy" : "execute"; }

namespace {

const CostOverride* find_override(const SimConfig& cfg, std::string_view module,
                                  std::string_view phase)
{
    for (const auto& o : cfg.overrides) {
        if (o.module == module && o.phase == phase) {
            return &o;
        }
    }
    return nullptr;
}

std::vector<LayerCost> phase_costs(const ModuleProfile& m, const PhaseProfile& p,
                                   const SimConfig& cfg)
{
    if (const auto* o = find_override(cfg, m.name, p.name)) {
        if (o->layers.size() != m.layers) {
            throw ArgumentError(fmt::format("cost override for {}/{} has {} layers, expected {}",
                                            m.name, p.name, o->layers.size(), m.layers));
        }
        for (const auto& c : o->layers) {
            if (!(c.dma_ms > 0.0) || !(c.exe_ms > 0.0)) {
                throw ArgumentError(fmt::format("cost override for {}/{} must be positive",
                                                m.name, p.name));
            }
        }
        return o->layers;
    }
    return std::vector<LayerCost>(m.layers, LayerCost{p.dma_ms, p.exe_ms});
}

} // namespace

Timeline simulate(const ModelProfile& profile, const Placement& placement, const SimConfig& cfg)
{
    if (cfg.slot_count < 1) {
        throw ArgumentError("slot_count must be >= 1");
    }
    placement.check(profile);
    for (const auto& o : cfg.overrides) {
        const auto* m = profile.find_module(o.module);
        if (m == nullptr || m->find_phase(o.phase) == nullptr) {
            throw ArgumentError(
                fmt::format("cost override names unknown phase {}/{}", o.module, o.phase));
        }
    }

    Timeline tl;
    for (const auto& m : profile.modules) {
        tl.module_names.push_back(m.name);
        auto& names = tl.phase_names.emplace_back();
        for (const auto& p : m.phases) {
            names.push_back(p.name);
        }
    }

    const bool pipelined = cfg.mode == SimMode::Pipelined;
    // Clocks run in extended precision so that long chains of additions stay
    // within a few ulps of the closed forms once rounded back to double.
    using Clock = long double;
    Clock copy_free = 0.0L;
    Clock exe_free = 0.0L;
    std::vector<Clock> slot_free(cfg.slot_count, 0.0L);

    for (std::size_t mi = 0; mi < profile.modules.size(); ++mi) {
        const auto& module = profile.modules[mi];
        const auto& resident = placement.resident(module.name);
        std::vector<bool> is_resident(module.layers, false);
        for (auto idx : resident) {
            is_resident[idx] = true;
        }

        for (std::size_t pi = 0; pi < module.phases.size(); ++pi) {
            const auto& phase = module.phases[pi];
            const auto costs = phase_costs(module, phase, cfg);

            for (std::size_t inv = 0; inv < phase.repetitions; ++inv) {
                const Clock barrier = cfg.cross_invocation_prefetch ? 0.0L : exe_free;
                std::size_t offload_seq = 0;

                for (std::size_t layer = 0; layer < module.layers; ++layer) {
                    Clock exe_ready = exe_free;
                    std::size_t slot = 0;
                    const bool offloaded = !is_resident[layer];

                    if (offloaded) {
                        slot = offload_seq++ % cfg.slot_count;
                        const Clock start = pipelined
                            ? std::max({copy_free, slot_free[slot], barrier})
                            : std::max(copy_free, exe_free);
                        const Clock end = start + costs[layer].dma_ms;
                        copy_free = end;
                        exe_ready = std::max(exe_ready, end);
                        if (cfg.record_events) {
                            tl.events.push_back({Engine::Copy, mi, pi, inv, layer, static_cast<double>(start),
                                                 static_cast<double>(end)});
                        }
                    }

                    const Clock exe_end = exe_ready + costs[layer].exe_ms;
                    exe_free = exe_end;
                    if (offloaded) {
                        slot_free[slot] = exe_end;
                    }
                    if (cfg.record_events) {
                        tl.events.push_back({Engine::Execute, mi, pi, inv, layer,
                                         static_cast<double>(exe_ready),
                                         static_cast<double>(exe_end)});
                    }
                }
            }
        }
    }

    tl.total_ms = static_cast<double>(std::max(copy_free, exe_free));
    return tl;
}

double simulated_total(const ModelProfile& profile, const Placement& placement, SimConfig cfg)
{
    cfg.record_events = false;
    return simulate(profile, placement, cfg).total_ms;
}

VramReport vram_report(const ModelProfile& profile, const Placement& placement,
                       const SimConfig& cfg)
{
    VramReport r;
    r.buffer_mb = static_cast<double>(cfg.slot_count) * profile.max_layer_mem_mb();
    r.resident_mb = placement.resident_mb(profile);
    r.always_resident_mb = profile.always_resident_mb;
    r.overhead_mb = profile.hardware.overhead_mb;
    r.total_mb = r.buffer_mb + r.resident_mb + r.always_resident_mb + r.overhead_mb;
    r.fits = r.total_mb <= profile.hardware.vram_mb;
    return r;
}

void write_trace_csv(const Timeline& timeline, std::ostream& out)
{
    out << "engine,module,phase,invocation,layer,start_ms,end_ms\n";
    for (const auto& e : timeline.events) {
        out << fmt::format("{},{},{},{},{},{:.6f},{:.6f}\n", to_string(e.engine),
                           timeline.module_names[e.module], timeline.phase_names[e.module][e.phase],
                           e.invocation, e.layer, e.start_ms, e.end_ms);
    }
}

} // namespace dfb
