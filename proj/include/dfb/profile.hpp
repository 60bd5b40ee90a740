#pragma once

// Hardware and model profiles: the measured per-layer transfer (DMA) and
// execution (EXE) costs every other module works from.
//
// Units: milliseconds for times, decimal megabytes (10^6 bytes) for memory.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dfb {

struct HardwareProfile {
    std::string name;
    double vram_mb = 0.0;
    double h2d_gbps = 0.0;   // informational only
    double overhead_mb = 0.0; // KV cache, activations, framework buffers

    bool operator==(const HardwareProfile&) const = default;
};

/// One invocation pattern over a module's layers, repeated `repetitions`
/// times per inference (decode tokens, diffusion steps, ...).
struct PhaseProfile {
    std::string name;
    double dma_ms = 0.0;
    double exe_ms = 0.0;
    std::size_t repetitions = 1;

    bool operator==(const PhaseProfile&) const = default;
};

/// A stack of identical layers whose weights are shared by every phase.
struct ModuleProfile {
    std::string name;
    std::size_t layers = 0;
    double layer_mem_mb = 0.0;
    std::vector<PhaseProfile> phases;

    bool operator==(const ModuleProfile&) const = default;

    const PhaseProfile* find_phase(std::string_view phase_name) const;
};

struct ModelProfile {
    HardwareProfile hardware;
    std::vector<ModuleProfile> modules; // execution order
    double always_resident_mb = 0.0;
    std::optional<double> calibration_total_s;

    bool operator==(const ModelProfile&) const = default;

    const ModuleProfile* find_module(std::string_view module_name) const;
    std::size_t module_index(std::string_view module_name) const; // throws ArgumentError
    double max_layer_mem_mb() const;
};

enum class PhaseKind { ExeIntensive, DmaIntensive };
enum class ModuleKind { ExeIntensive, DmaIntensive, Hybrid };

struct PhaseClass {
    PhaseKind kind;
    double ratio; // dma_ms / exe_ms
};

/// r < 1 is EXE-intensive; r >= 1 (including the tie) is DMA-intensive.
PhaseClass classify(const PhaseProfile& phase);
ModuleKind module_kind(const ModuleProfile& module);

std::string_view to_string(PhaseKind kind);
std::string_view to_string(ModuleKind kind);

// Invariant checks. Each throws ValidationError naming the first violation.
void validate(const PhaseProfile& phase, std::string_view module_name);
void validate(const ModuleProfile& module);
void validate(const ModelProfile& profile);

ModelProfile parse_profile(std::string_view text);
ModelProfile load_profile(const std::filesystem::path& path);
std::string serialize_profile(const ModelProfile& profile);

} // namespace dfb
