#pragma once

// Two-engine (copy / execute) pipeline simulator with Double Flat Buffer
// slot semantics.
//
// Every offloaded layer is transferred into one of `slot_count` device
// buffers before it executes. Two events gate the pipeline:
//   * DMA-done:     a layer's EXE never starts before its transfer finishes;
//   * compute-done: a slot is never overwritten before its previous
//                   occupant's EXE finishes.
// Resident layers skip the transfer but still occupy the execute engine.
// The copy engine serves transfers FIFO in layer order, and by default no
// transfer of an invocation (or phase, or module) starts before the previous
// invocation's last EXE has finished.
//
// Times are accumulated in extended precision in a fixed order (module,
// phase, invocation, layer), so results are bit-reproducible.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dfb/profile.hpp"

namespace dfb {

/// Per-module set of GPU-resident layer indices (0-based).
class Placement {
public:
    using LayerSet = std::set<std::size_t>;

    Placement() = default;

    static Placement full(const ModelProfile& profile);

    void add(const std::string& module, std::size_t layer);
    void set(const std::string& module, const std::vector<std::size_t>& layers);

    const LayerSet& resident(std::string_view module) const;
    bool is_resident(std::string_view module, std::size_t layer) const;
    std::size_t count(std::string_view module) const;
    std::size_t total_count() const;

    const std::map<std::string, LayerSet, std::less<>>& modules() const { return sets_; }

    double resident_mb(const ModelProfile& profile) const;

    /// Throws ArgumentError for unknown modules or out-of-range indices.
    void check(const ModelProfile& profile) const;

    bool operator==(const Placement& other) const { return sets_ == other.sets_; }

private:
    std::map<std::string, LayerSet, std::less<>> sets_;
};

enum class SimMode { Sequential, Pipelined };
enum class Engine { Copy, Execute };

std::string_view to_string(SimMode mode);
std::string_view to_string(Engine engine);

struct LayerCost {
    double dma_ms = 0.0;
    double exe_ms = 0.0;
};

/// Heterogeneous per-layer costs for one phase, replacing its uniform costs.
struct CostOverride {
    std::string module;
    std::string phase;
    std::vector<LayerCost> layers;
};

struct SimConfig {
    SimMode mode = SimMode::Pipelined;
    bool cross_invocation_prefetch = false;
    std::size_t slot_count = 2;
    std::vector<CostOverride> overrides;
    bool record_events = true;
};

struct TimelineEvent {
    Engine engine = Engine::Execute;
    std::size_t module = 0; // index into Timeline::module_names
    std::size_t phase = 0;  // index into Timeline::phase_names[module]
    std::size_t invocation = 0;
    std::size_t layer = 0;
    double start_ms = 0.0;
    double end_ms = 0.0;
};

struct Timeline {
    std::vector<std::string> module_names;
    std::vector<std::vector<std::string>> phase_names;
    std::vector<TimelineEvent> events;
    double total_ms = 0.0;
};

struct VramReport {
    double buffer_mb = 0.0;
    double resident_mb = 0.0;
    double always_resident_mb = 0.0;
    double overhead_mb = 0.0;
    double total_mb = 0.0;
    bool fits = false;
};

Timeline simulate(const ModelProfile& profile, const Placement& placement,
                  const SimConfig& cfg = {});

double simulated_total(const ModelProfile& profile, const Placement& placement,
                       SimConfig cfg = {});

VramReport vram_report(const ModelProfile& profile, const Placement& placement,
                       const SimConfig& cfg = {});

/// Header `engine,module,phase,invocation,layer,start_ms,end_ms`.
void write_trace_csv(const Timeline& timeline, std::ostream& out);

} // namespace dfb
