#pragma once

#include <random>
#include <string>

#include "dfb/profile.hpp"

#ifndef DFB_TEST_FIXTURE_DIR
#define DFB_TEST_FIXTURE_DIR "fixtures"
#endif

namespace testing {

inline std::string fixture(const std::string& name)
{
    return std::string(DFB_TEST_FIXTURE_DIR) + "/" + name;
}

inline dfb::ModelProfile rtx5070ti() { return dfb::load_profile(fixture("rtx5070ti_alpamayo.json")); }
inline dfb::ModelProfile rtx3080ti() { return dfb::load_profile(fixture("rtx3080ti_alpamayo.json")); }

/// Single-module, single-phase profile.
inline dfb::ModelProfile one_phase(std::size_t layers, double dma, double exe, std::size_t reps,
                                   double layer_mem = 100.0)
{
    dfb::ModelProfile p;
    p.hardware = {"test", 1e9, 10.0, 0.0};
    p.modules.push_back({"m", layers, layer_mem, {{"p", dma, exe, reps}}});
    return p;
}

/// Uniform in (0, hi].
inline double positive(std::mt19937_64& rng, double hi)
{
    std::uniform_real_distribution<double> d(0.0, hi);
    double v = 0.0;
    while (v == 0.0) {
        v = d(rng);
    }
    return v;
}

inline std::size_t uniform_count(std::mt19937_64& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

} // namespace testing
