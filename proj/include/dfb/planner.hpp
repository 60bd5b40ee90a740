#pragma once

// Residency decision policy: which layers to keep on the GPU under a VRAM
// budget, and where to put them inside each module.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfb/analytic.hpp"
#include "dfb/dfbsim.hpp"
#include "dfb/profile.hpp"

namespace dfb {

/// k evenly spaced indices in [0, layers-2]: floor(i*(layers-1)/k), i < k.
/// Index 0 is always included (k >= 1) and index layers-1 never is.
std::vector<std::size_t> interleaved_indices(std::size_t k, std::size_t layers);

struct Candidate {
    std::string module;
    Position position = Position::First;
    double benefit_ms_per_mb = 0.0;
    double delta_ms = 0.0;
    double layer_mem_mb = 0.0;
    std::size_t capacity = 0; // layers available in this position class
};

/// Position classes of every module, best benefit density first. Ties keep
/// module order, then First < Middle < Last. Empty classes are omitted.
std::vector<Candidate> rank_candidates(const ModelProfile& profile);

struct Selection {
    std::string module;
    Position position = Position::First;
    std::size_t count = 0;
};

struct Plan {
    Placement placement;
    std::map<std::string, std::size_t> resident_count;
    std::vector<Selection> selections; // greedy order
    double budget_mb = 0.0;
    double predicted_saving_ms = 0.0;
    VramReport vram;
    std::optional<double> simulated_total_ms;
};

/// Fixed VRAM cost independent of residency: buffers, always-resident
/// components and non-parameter overhead.
double fixed_vram_mb(const ModelProfile& profile, const SimConfig& cfg = {});

/// Greedy by benefit density. Throws InfeasibleError if fixed costs alone
/// exceed the budget.
Plan plan_for_budget(const ModelProfile& profile, double vram_budget_mb,
                     const SimConfig& cfg = {}, bool run_simulation = true);

/// Interleaved placement with k resident layers in `module`, others offloaded.
Placement interleaved_placement(const ModelProfile& profile, std::string_view module,
                                std::size_t k);

struct SweepPoint {
    std::size_t k = 0;
    Placement placement;
    double simulated_total_ms = 0.0;
    double vram_total_mb = 0.0;
};

std::vector<SweepPoint> sweep(const ModelProfile& profile, std::string_view module,
                              const std::vector<std::size_t>& k_values, const SimConfig& cfg = {});

// Plan file: {"placement": {module: [indices]}, "resident_count", "vram",
// "predicted_saving_ms", "budget_mb", "simulated_total_ms"?}.
std::string plan_to_json(const Plan& plan);
Placement parse_plan_placement(std::string_view text);
Placement load_plan_placement(const std::filesystem::path& path);

} // namespace dfb
