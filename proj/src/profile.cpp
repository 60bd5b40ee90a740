#include "dfb/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "dfb/error.hpp"

namespace dfb {

using json = nlohmann::json;

const PhaseProfile* ModuleProfile::find_phase(std::string_view phase_name) const
{
    auto it = std::find_if(phases.begin(), phases.end(),
                           [&](const PhaseProfile& p) { return p.name == phase_name; });
    return it == phases.end() ? nullptr : &*it;
}

const ModuleProfile* ModelProfile::find_module(std::string_view module_name) const
{
    auto it = std::find_if(modules.begin(), modules.end(),
                           [&](const ModuleProfile& m) { return m.name == module_name; });
    return it == modules.end() ? nullptr : &*it;
}

std::size_t ModelProfile::module_index(std::string_view module_name) const
{
    for (std::size_t i = 0; i < modules.size(); ++i) {
        if (modules[i].name == module_name) {
            return i;
        }
    }
    throw ArgumentError(fmt::format("unknown module '{}'", module_name));
}

double ModelProfile::max_layer_mem_mb() const
{
    double m = 0.0;
    for (const auto& mod : modules) {
        m = std::max(m, mod.layer_mem_mb);
    }
    return m;
}

PhaseClass classify(const PhaseProfile& phase)
{
    const double r = phase.dma_ms / phase.exe_ms;
    return {r < 1.0 ? PhaseKind::ExeIntensive : PhaseKind::DmaIntensive, r};
}

ModuleKind module_kind(const ModuleProfile& module)
{
    bool any_exe = false;
    bool any_dma = false;
    for (const auto& phase : module.phases) {
        if (classify(phase).kind == PhaseKind::ExeIntensive) {
            any_exe = true;
        } else {
            any_dma = true;
        }
    }
    if (any_exe && any_dma) {
        return ModuleKind::Hybrid;
    }
    return any_exe ? ModuleKind::ExeIntensive : ModuleKind::DmaIntensive;
}

std::string_view to_string(PhaseKind kind)
{
    return kind == PhaseKind::ExeIntensive ? "EXE-int" : "DMA-int";
}

std::string_view to_string(ModuleKind kind)
{
    switch (kind) {
    case ModuleKind::ExeIntensive: return "EXE-int";
    case ModuleKind::DmaIntensive: return "DMA-int";
    case ModuleKind::Hybrid: return "Hybrid";
    }
    return "?";
}

namespace {

[[noreturn]] void invalid(std::string msg) { throw ValidationError(std::move(msg)); }

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void validate(const PhaseProfile& phase, std::string_view module_name)
{
    const auto where = fmt::format("module {}: phase {}", module_name, phase.name);
    if (phase.name.empty()) {
        invalid(fmt::format("module {}: phase name must be nonempty", module_name));
    }
    if (!positive_finite(phase.dma_ms)) {
        invalid(where + ": dma_ms must be > 0");
    }
    if (!positive_finite(phase.exe_ms)) {
        invalid(where + ": exe_ms must be > 0");
    }
    if (phase.repetitions < 1) {
        invalid(where + ": repetitions must be >= 1");
    }
}

void validate(const ModuleProfile& module)
{
    if (module.name.empty()) {
        invalid("module name must be nonempty");
    }
    if (module.layers < 1) {
        invalid(fmt::format("module {}: layers must be >= 1", module.name));
    }
    if (!positive_finite(module.layer_mem_mb)) {
        invalid(fmt::format("module {}: layer_mem_mb must be > 0", module.name));
    }
    if (module.phases.empty()) {
        invalid(fmt::format("module {}: phases must be nonempty", module.name));
    }
    for (std::size_t i = 0; i < module.phases.size(); ++i) {
        validate(module.phases[i], module.name);
        for (std::size_t j = 0; j < i; ++j) {
            if (module.phases[j].name == module.phases[i].name) {
                invalid(fmt::format("module {}: duplicate phase '{}'", module.name,
                                    module.phases[i].name));
            }
        }
    }
}

void validate(const ModelProfile& profile)
{
    const auto& hw = profile.hardware;
    if (!positive_finite(hw.vram_mb)) {
        invalid("hardware: vram_mb must be > 0");
    }
    if (!std::isfinite(hw.overhead_mb) || hw.overhead_mb < 0.0) {
        invalid("hardware: overhead_mb must be >= 0");
    }
    if (!std::isfinite(hw.h2d_gbps) || hw.h2d_gbps < 0.0) {
        invalid("hardware: h2d_gbps must be >= 0");
    }
    if (!std::isfinite(profile.always_resident_mb) || profile.always_resident_mb < 0.0) {
        invalid("always_resident_mb must be >= 0");
    }
    if (profile.calibration_total_s && !positive_finite(*profile.calibration_total_s)) {
        invalid("calibration_total_s must be > 0");
    }
    if (profile.modules.empty()) {
        invalid("modules must be nonempty");
    }
    for (std::size_t i = 0; i < profile.modules.size(); ++i) {
        validate(profile.modules[i]);
        for (std::size_t j = 0; j < i; ++j) {
            if (profile.modules[j].name == profile.modules[i].name) {
                invalid(fmt::format("duplicate module '{}'", profile.modules[i].name));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Document reading. Structural problems are ParseErrors; value-range problems
// are left to validate() so both file and programmatic paths share messages.

namespace {

class Reader {
public:
    Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where))
    {
        if (!obj_.is_object()) {
            fail("expected an object");
        }
    }

    void allow_only(std::initializer_list<std::string_view> keys) const
    {
        for (const auto& [key, _] : obj_.items()) {
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                fail(fmt::format("unknown key '{}'", key));
            }
        }
    }

    const json& require(const char* key) const
    {
        auto it = obj_.find(key);
        if (it == obj_.end()) {
            fail(fmt::format("missing key '{}'", key));
        }
        return *it;
    }

    bool has(const char* key) const { return obj_.contains(key); }

    std::string string(const char* key) const
    {
        const auto& v = require(key);
        if (!v.is_string()) {
            fail(fmt::format("'{}' must be a string", key));
        }
        return v.get<std::string>();
    }

    double number(const char* key) const
    {
        const auto& v = require(key);
        if (!v.is_number()) {
            fail(fmt::format("'{}' must be a number", key));
        }
        return v.get<double>();
    }

    // Negative integers parse and are clamped to 0 so validate() reports them.
    std::size_t count(const char* key) const
    {
        const auto& v = require(key);
        if (v.is_number_unsigned()) {
            return v.get<std::size_t>();
        }
        if (v.is_number_integer()) {
            return 0;
        }
        fail(fmt::format("'{}' must be an integer", key));
    }

    const json& array(const char* key) const
    {
        const auto& v = require(key);
        if (!v.is_array()) {
            fail(fmt::format("'{}' must be an array", key));
        }
        return v;
    }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError(where_.empty() ? msg : where_ + ": " + msg);
    }

private:
    const json& obj_;
    std::string where_;
};

PhaseProfile read_phase(const json& j, const std::string& where)
{
    Reader r(j, where);
    r.allow_only({"name", "repetitions", "dma_ms", "exe_ms"});
    PhaseProfile p;
    p.name = r.string("name");
    p.repetitions = r.count("repetitions");
    p.dma_ms = r.number("dma_ms");
    p.exe_ms = r.number("exe_ms");
    return p;
}

ModuleProfile read_module(const json& j, std::size_t index)
{
    Reader r(j, fmt::format("modules[{}]", index));
    r.allow_only({"name", "layers", "layer_mem_mb", "phases"});
    ModuleProfile m;
    m.name = r.string("name");
    m.layers = r.count("layers");
    m.layer_mem_mb = r.number("layer_mem_mb");
    const auto& phases = r.array("phases");
    for (std::size_t i = 0; i < phases.size(); ++i) {
        m.phases.push_back(read_phase(phases[i], fmt::format("module {}: phases[{}]", m.name, i)));
    }
    return m;
}

} // namespace

ModelProfile parse_profile(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("malformed profile: {}", e.what()));
    }

    Reader top(doc, "");
    top.allow_only({"hardware", "always_resident_mb", "calibration_total_s", "modules"});

    ModelProfile profile;
    Reader hw(top.require("hardware"), "hardware");
    hw.allow_only({"name", "vram_mb", "h2d_gbps", "overhead_mb"});
    profile.hardware.name = hw.string("name");
    profile.hardware.vram_mb = hw.number("vram_mb");
    profile.hardware.h2d_gbps = hw.number("h2d_gbps");
    profile.hardware.overhead_mb = hw.number("overhead_mb");

    profile.always_resident_mb = top.number("always_resident_mb");
    if (top.has("calibration_total_s") && !doc["calibration_total_s"].is_null()) {
        profile.calibration_total_s = top.number("calibration_total_s");
    }

    const auto& modules = top.array("modules");
    for (std::size_t i = 0; i < modules.size(); ++i) {
        profile.modules.push_back(read_module(modules[i], i));
    }

    validate(profile);
    return profile;
}

ModelProfile load_profile(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(fmt::format("cannot open profile '{}'", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_profile(buf.str());
}

std::string serialize_profile(const ModelProfile& profile)
{
    json doc;
    doc["hardware"] = {
        {"name", profile.hardware.name},
        {"vram_mb", profile.hardware.vram_mb},
        {"h2d_gbps", profile.hardware.h2d_gbps},
        {"overhead_mb", profile.hardware.overhead_mb},
    };
    doc["always_resident_mb"] = profile.always_resident_mb;
    if (profile.calibration_total_s) {
        doc["calibration_total_s"] = *profile.calibration_total_s;
    }
    json modules = json::array();
    for (const auto& m : profile.modules) {
        json phases = json::array();
        for (const auto& p : m.phases) {
            phases.push_back({{"name", p.name},
                              {"repetitions", p.repetitions},
                              {"dma_ms", p.dma_ms},
                              {"exe_ms", p.exe_ms}});
        }
        modules.push_back({{"name", m.name},
                           {"layers", m.layers},
                           {"layer_mem_mb", m.layer_mem_mb},
                           {"phases", std::move(phases)}});
    }
    doc["modules"] = std::move(modules);
    return doc.dump(2) + "\n";
}

} // namespace dfb
