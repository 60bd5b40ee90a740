#pragma once

// Closed-form pipeline timing and residency benefit for uniform-cost modules.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfb/profile.hpp"

namespace dfb {

enum class Position { First, Middle, Last };

inline constexpr Position kPositions[] = {Position::First, Position::Middle, Position::Last};

std::string_view to_string(Position pos);

struct BenefitEntry {
    std::string module;
    Position position = Position::First;
    double delta_ms = 0.0;          // saved per inference by one resident layer here
    double benefit_ms_per_mb = 0.0; // delta_ms / layer_mem_mb
};

struct LowerBound {
    double total_ms = 0.0;
    std::vector<std::pair<std::string, double>> per_module_ms;
};

/// Pipelined full-offload time of one phase over `layers` layers:
/// EXE-intensive R*(dma + L*exe), DMA-intensive R*(L*dma + exe).
double phase_time_full_offload(const PhaseProfile& phase, std::size_t layers);

double module_time_full_offload(const ModuleProfile& module);

/// Preloaded time: sum of R*L*exe over every phase; no DMA terms.
LowerBound lower_bound(const ModelProfile& profile);

/// Saving of a single phase when one layer at `pos` is resident.
double phase_position_delta(const PhaseProfile& phase, Position pos);

BenefitEntry residency_benefit(const ModuleProfile& module, Position pos);

/// floor(dma/exe) for a DMA-intensive phase; throws ArgumentError otherwise.
std::size_t consecutive_limit(const PhaseProfile& phase);

/// The phase whose repetition count stands for the generated token count:
/// the one named "decode", else the phase with the most repetitions.
const PhaseProfile& token_phase(const ModuleProfile& module);

inline constexpr std::size_t kDefaultCrossoverCap = 512;

/// Smallest N >= 1 at which `tokens_module`'s Middle benefit (with its token
/// phase repeated N times) strictly exceeds `other`'s best position benefit.
/// nullopt when no N <= cap qualifies.
std::optional<std::size_t> crossover_tokens(const ModuleProfile& tokens_module,
                                            const ModuleProfile& other,
                                            std::size_t cap = kDefaultCrossoverCap);

} // namespace dfb
