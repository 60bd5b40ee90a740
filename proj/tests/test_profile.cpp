#include <doctest.h>

#include <random>
#include <string>

#include "dfb/error.hpp"
#include "dfb/profile.hpp"
#include "support/fixtures.hpp"

using namespace dfb;

namespace {

const char* kMinimal = R"({
  "hardware": {"name": "gpu", "vram_mb": 1000, "h2d_gbps": 10, "overhead_mb": 0},
  "always_resident_mb": 0,
  "modules": [{"name": "m", "layers": 2, "layer_mem_mb": 10,
               "phases": [{"name": "p", "repetitions": 1, "dma_ms": 1, "exe_ms": 2}]}]
})";

std::string replace(std::string s, const std::string& from, const std::string& to)
{
    auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

} // namespace

TEST_CASE("rtx5070ti fixture loads with the measured per-layer profile")
{
    const auto p = testing::rtx5070ti();
    REQUIRE(p.modules.size() == 3);

    const auto& vit = p.modules[0];
    CHECK(vit.name == "vit");
    CHECK(vit.layers == 27);
    CHECK(vit.layer_mem_mb == 29.1);
    REQUIRE(vit.phases.size() == 1);
    CHECK(vit.phases[0] == PhaseProfile{"encode", 0.9, 8.3, 1});

    const auto& vlm = p.modules[1];
    CHECK(vlm.layers == 36);
    CHECK(vlm.layer_mem_mb == 368.0);
    REQUIRE(vlm.phases.size() == 2);
    CHECK(vlm.phases[0] == PhaseProfile{"prefill", 10.9, 16.6, 1});
    CHECK(vlm.phases[1] == PhaseProfile{"decode", 10.9, 0.9, 21});

    const auto& expert = p.modules[2];
    CHECK(expert.layers == 36);
    CHECK(expert.layer_mem_mb == 120.8);
    CHECK(expert.phases[0] == PhaseProfile{"denoise", 3.6, 1.0, 10});

    CHECK(p.hardware.vram_mb == 16000.0);
    CHECK(p.hardware.overhead_mb == 1500.0);
    REQUIRE(p.calibration_total_s.has_value());
    CHECK(*p.calibration_total_s == 10.482);
}

TEST_CASE("rtx3080ti fixture carries the Gen3 transfer costs")
{
    const auto p = testing::rtx3080ti();
    CHECK(p.modules[0].phases[0].dma_ms == 2.5);
    CHECK(p.modules[1].phases[0].dma_ms == 30.8);
    CHECK(p.modules[1].phases[1].dma_ms == 30.8);
    CHECK(p.modules[2].phases[0].dma_ms == 10.1);
    CHECK_FALSE(p.calibration_total_s.has_value());

    // Lower bandwidth flips prefill to DMA-bound.
    const auto c = classify(p.modules[1].phases[0]);
    CHECK(c.kind == PhaseKind::DmaIntensive);
    CHECK(c.ratio == doctest::Approx(1.5).epsilon(0.01));
}

TEST_CASE("openvla-shaped fixture validates")
{
    const auto p = load_profile(testing::fixture("openvla_rtx3080ti.json"));
    CHECK(p.find_module("llm")->layers == 32);
}

TEST_CASE("validation errors name the violated invariant")
{
    CHECK_NOTHROW(parse_profile(kMinimal));

    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"layers\": 2", "\"layers\": 0")),
                         "module m: layers must be >= 1", ValidationError);
    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"layers\": 2", "\"layers\": -3")),
                         "module m: layers must be >= 1", ValidationError);
    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"layer_mem_mb\": 10", "\"layer_mem_mb\": 0")),
                         "module m: layer_mem_mb must be > 0", ValidationError);
    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"dma_ms\": 1", "\"dma_ms\": 0")),
                         "module m: phase p: dma_ms must be > 0", ValidationError);
    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"exe_ms\": 2", "\"exe_ms\": -2")),
                         "module m: phase p: exe_ms must be > 0", ValidationError);
    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"repetitions\": 1", "\"repetitions\": 0")),
                         "module m: phase p: repetitions must be >= 1", ValidationError);
    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"vram_mb\": 1000", "\"vram_mb\": 0")),
                         "hardware: vram_mb must be > 0", ValidationError);
    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"overhead_mb\": 0", "\"overhead_mb\": -1")),
                         "hardware: overhead_mb must be >= 0", ValidationError);
    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"always_resident_mb\": 0",
                                               "\"always_resident_mb\": 0, \"calibration_total_s\": 0")),
                         "calibration_total_s must be > 0", ValidationError);
    CHECK_THROWS_AS(parse_profile(replace(kMinimal, R"("phases": [{"name": "p", "repetitions": 1, "dma_ms": 1, "exe_ms": 2}])",
                                          R"("phases": [])")),
                    ValidationError);
}

TEST_CASE("structural problems are parse errors")
{
    CHECK_THROWS_AS(parse_profile("{ not json"), ParseError);
    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"always_resident_mb\": 0",
                                               "\"always_resident_mb\": 0, \"colour\": 1")),
                         "unknown key 'colour'", ParseError);
    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"dma_ms\": 1", "\"dma_ms\": 1, \"bw\": 2")),
                         "module m: phases[0]: unknown key 'bw'", ParseError);
    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"layers\": 2", "\"layers\": 2.5")),
                         "modules[0]: 'layers' must be an integer", ParseError);
    CHECK_THROWS_WITH_AS(parse_profile(replace(kMinimal, "\"always_resident_mb\": 0,", "")),
                         "missing key 'always_resident_mb'", ParseError);
    CHECK_THROWS_WITH_AS(load_profile("/nonexistent/profile.json"),
                         "cannot open profile '/nonexistent/profile.json'", ParseError);
}

TEST_CASE("classify examples")
{
    auto c = classify({"vit", 0.9, 8.3, 1});
    CHECK(c.kind == PhaseKind::ExeIntensive);
    CHECK(c.ratio == doctest::Approx(0.108).epsilon(0.001));

    c = classify({"decode", 10.9, 0.9, 21});
    CHECK(c.kind == PhaseKind::DmaIntensive);
    CHECK(c.ratio == doctest::Approx(12.11).epsilon(0.001));

    c = classify({"tie", 1.0, 1.0, 1});
    CHECK(c.kind == PhaseKind::DmaIntensive);
    CHECK(c.ratio == 1.0);
}

TEST_CASE("module kinds on the fixture")
{
    const auto p = testing::rtx5070ti();
    CHECK(module_kind(p.modules[0]) == ModuleKind::ExeIntensive);
    CHECK(module_kind(p.modules[1]) == ModuleKind::Hybrid);
    CHECK(module_kind(p.modules[2]) == ModuleKind::DmaIntensive);
    // Both vlm phases are DMA-bound on Gen3.
    CHECK(module_kind(testing::rtx3080ti().modules[1]) == ModuleKind::DmaIntensive);
}

TEST_CASE("property: classification is scale invariant")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const double dma = testing::positive(rng, 100.0);
        const double exe = testing::positive(rng, 100.0);
        const double scale = std::ldexp(1.0, static_cast<int>(testing::uniform_count(rng, 0, 40)) - 20);
        const auto base = classify({"p", dma, exe, 1}).kind;
        CHECK(classify({"p", dma * scale, exe * scale, 1}).kind == base);
    }
}

TEST_CASE("property: serialize then load reproduces the profile")
{
    CHECK(parse_profile(serialize_profile(testing::rtx5070ti())) == testing::rtx5070ti());
    CHECK(parse_profile(serialize_profile(testing::rtx3080ti())) == testing::rtx3080ti());

    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        ModelProfile p;
        p.hardware = {"hw" + std::to_string(i), testing::positive(rng, 1e5), testing::positive(rng, 64),
                      testing::positive(rng, 4000)};
        p.always_resident_mb = testing::positive(rng, 5000);
        if (i % 2 == 0) {
            p.calibration_total_s = testing::positive(rng, 100);
        }
        const auto n_mod = testing::uniform_count(rng, 1, 4);
        for (std::size_t m = 0; m < n_mod; ++m) {
            ModuleProfile mod{"mod" + std::to_string(m), testing::uniform_count(rng, 1, 64),
                              testing::positive(rng, 1000), {}};
            const auto n_ph = testing::uniform_count(rng, 1, 3);
            for (std::size_t k = 0; k < n_ph; ++k) {
                mod.phases.push_back({"ph" + std::to_string(k), testing::positive(rng, 100),
                                      testing::positive(rng, 100), testing::uniform_count(rng, 1, 32)});
            }
            p.modules.push_back(std::move(mod));
        }
        CHECK(parse_profile(serialize_profile(p)) == p);
    }
}
