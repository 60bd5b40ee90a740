#include <doctest.h>

#include <algorithm>
#include <random>

#include "dfb/error.hpp"
#include "dfb/planner.hpp"
#include "support/fixtures.hpp"

using namespace dfb;

namespace {

// Module name of every greedily selected layer, in selection order.
std::vector<std::string> picked_layers(const Plan& plan)
{
    std::vector<std::string> out;
    for (const auto& s : plan.selections) {
        out.insert(out.end(), s.count, s.module);
    }
    return out;
}

// True when no DMA-bound phase sees a run of residents longer than its
// consecutive residency limit.
bool within_gap_condition(const ModelProfile& p, const Placement& pl)
{
    for (const auto& m : p.modules) {
        std::size_t run = 0;
        std::size_t longest = 0;
        for (std::size_t l = 0; l < m.layers; ++l) {
            run = pl.is_resident(m.name, l) ? run + 1 : 0;
            longest = std::max(longest, run);
        }
        for (const auto& ph : m.phases) {
            if (classify(ph).kind == PhaseKind::DmaIntensive && longest > consecutive_limit(ph)) {
                return false;
            }
        }
    }
    return true;
}

std::vector<std::size_t> as_vector(const Placement::LayerSet& s) { return {s.begin(), s.end()}; }

} // namespace

TEST_CASE("interleaved_indices")
{
    CHECK(interleaved_indices(0, 36).empty());
    CHECK(interleaved_indices(4, 36) == std::vector<std::size_t>{0, 8, 17, 26});
    CHECK(interleaved_indices(28, 36) ==
          std::vector<std::size_t>{0,  1,  2,  3,  5,  6,  7,  8,  10, 11, 12, 13, 15, 16,
                                   17, 18, 20, 21, 22, 23, 25, 26, 27, 28, 30, 31, 32, 33});
    CHECK(interleaved_indices(35, 36).back() == 34);
    CHECK(interleaved_indices(1, 2) == std::vector<std::size_t>{0});
    CHECK_THROWS_AS(interleaved_indices(36, 36), ArgumentError);
    CHECK_THROWS_AS(interleaved_indices(1, 1), ArgumentError);
}

TEST_CASE("property: interleaved indices are strictly increasing and evenly spread")
{
    for (std::size_t layers = 2; layers <= 80; ++layers) {
        for (std::size_t k = 1; k < layers; ++k) {
            const auto idx = interleaved_indices(k, layers);
            REQUIRE(idx.size() == k);
            CHECK(idx.front() == 0);
            CHECK(idx.back() < layers - 1);
            // Gaps between neighbouring residents differ by at most one.
            std::size_t min_gap = layers;
            std::size_t max_gap = 0;
            for (std::size_t i = 1; i < k; ++i) {
                REQUIRE(idx[i] > idx[i - 1]);
                min_gap = std::min(min_gap, idx[i] - idx[i - 1]);
                max_gap = std::max(max_gap, idx[i] - idx[i - 1]);
            }
            if (k > 1) {
                CHECK(max_gap - min_gap <= 1);
                CHECK(min_gap >= (layers - 1) / k);
            }
        }
    }
}

TEST_CASE("rank_candidates on the fixture")
{
    const auto ranked = rank_candidates(testing::rtx5070ti());
    REQUIRE(ranked.size() == 9);
    CHECK(ranked[0].module == "vlm");
    CHECK(ranked[0].position == Position::First);
    CHECK(ranked[1].module == "vlm");
    CHECK(ranked[1].position == Position::Middle);
    CHECK(ranked[1].capacity == 34);
    CHECK(ranked[2].module == "vlm");
    CHECK(ranked[2].position == Position::Last);
    CHECK(ranked[3].module == "expert");
    for (std::size_t i = 1; i < ranked.size(); ++i) {
        CHECK(ranked[i - 1].benefit_ms_per_mb >= ranked[i].benefit_ms_per_mb);
    }

    // Zero-capacity classes disappear for short modules.
    const auto one = rank_candidates(testing::one_phase(1, 2, 1, 1));
    REQUIRE(one.size() == 1);
    CHECK(one[0].position == Position::First);
    CHECK(rank_candidates(testing::one_phase(2, 2, 1, 1)).size() == 2);
}

TEST_CASE("forecast is exact up to 18 GB on the fixture")
{
    const auto p = testing::rtx5070ti();
    for (double b : {8000.0, 12000.0, 16000.0, 18000.0}) {
        const auto plan = plan_for_budget(p, b);
        if (b <= 16000.0) {
            CHECK(within_gap_condition(p, plan.placement));
        }
        CHECK(simulated_total(p, {}) - *plan.simulated_total_ms ==
              doctest::Approx(plan.predicted_saving_ms));
    }
    CHECK_FALSE(within_gap_condition(p, plan_for_budget(p, 1e9).placement));
}

TEST_CASE("property: scaling every cost keeps the candidate ranking")
{
    std::mt19937_64 rng(53);
    for (const auto& base : {testing::rtx5070ti(), testing::rtx3080ti()}) {
        const auto ranked = rank_candidates(base);
        for (int i = 0; i < 50; ++i) {
            const double alpha = testing::positive(rng, 20.0);
            auto scaled = base;
            for (auto& m : scaled.modules) {
                for (auto& ph : m.phases) {
                    ph.dma_ms *= alpha;
                    ph.exe_ms *= alpha;
                }
            }
            const auto again = rank_candidates(scaled);
            REQUIRE(again.size() == ranked.size());
            for (std::size_t c = 0; c < ranked.size(); ++c) {
                CHECK(again[c].module == ranked[c].module);
                CHECK(again[c].position == ranked[c].position);
            }
        }
    }
}

TEST_CASE("plan at the 16 GB budget yields 28 interleaved VLM layers")
{
    const auto p = testing::rtx5070ti();
    const auto plan = plan_for_budget(p, 16000.0);
    CHECK(plan.resident_count.at("vlm") == 28);
    CHECK(as_vector(plan.placement.resident("vlm")) == interleaved_indices(28, 36));
    CHECK(plan.vram.fits);
    CHECK(plan.vram.total_mb <= 16000.0);
    REQUIRE(plan.simulated_total_ms.has_value());
    CHECK(*plan.simulated_total_ms ==
          doctest::Approx(simulated_total(p, {}) - plan.predicted_saving_ms));
}

TEST_CASE("plan edge budgets")
{
    const auto p = testing::rtx5070ti();
    CHECK_THROWS_AS(plan_for_budget(p, fixed_vram_mb(p) - 1.0), InfeasibleError);

    const auto none = plan_for_budget(p, fixed_vram_mb(p));
    CHECK(none.placement.total_count() == 0);
    CHECK(*none.simulated_total_ms == doctest::Approx(10398.8));

    const auto all = plan_for_budget(p, 1e9);
    CHECK(all.placement == Placement::full(p));
    CHECK(*all.simulated_total_ms == doctest::Approx(lower_bound(p).total_ms));
}

TEST_CASE("the first L-1 greedy selections are VLM layers on both GPU fixtures")
{
    for (const auto& p : {testing::rtx5070ti(), testing::rtx3080ti()}) {
        const auto picks = picked_layers(plan_for_budget(p, 1e9, {}, false));
        const auto vlm_layers = p.find_module("vlm")->layers;
        REQUIRE(picks.size() >= vlm_layers - 1);
        for (std::size_t i = 0; i + 1 < vlm_layers; ++i) {
            CHECK(picks[i] == "vlm");
        }
    }
}

TEST_CASE("property: larger budgets never slow the plan")
{
    const auto p = testing::rtx5070ti();
    std::mt19937_64 rng(43);
    const double lo = fixed_vram_mb(p);
    std::vector<double> budgets;
    for (int i = 0; i < 40; ++i) {
        budgets.push_back(lo + testing::positive(rng, 20000.0));
    }
    std::sort(budgets.begin(), budgets.end());
    double prev = simulated_total(p, {});
    double prev_saving = 0.0;
    for (double b : budgets) {
        const auto plan = plan_for_budget(p, b);
        CHECK(plan.vram.total_mb <= b);
        CHECK(*plan.simulated_total_ms <= prev + 1e-9);
        CHECK(plan.predicted_saving_ms >= prev_saving);
        prev_saving = plan.predicted_saving_ms;
        const double saved = simulated_total(p, {}) - *plan.simulated_total_ms;
        if (within_gap_condition(p, plan.placement)) {
            CHECK(saved == doctest::Approx(plan.predicted_saving_ms).epsilon(1e-12));
        } else {
            CHECK(saved <= plan.predicted_saving_ms + 1e-9);
        }
        prev = *plan.simulated_total_ms;
    }
}

TEST_CASE("vlm sweep steps")
{
    const auto p = testing::rtx5070ti();
    std::vector<std::size_t> ks;
    for (std::size_t k = 0; k <= 28; ++k) ks.push_back(k);
    const auto pts = sweep(p, "vlm", ks);
    REQUIRE(pts.size() == 29);
    CHECK(pts[0].simulated_total_ms == doctest::Approx(10398.8));
    // k = 1 covers the first layer, which also hides the prefill transfer.
    CHECK(pts[0].simulated_total_ms - pts[1].simulated_total_ms == doctest::Approx(239.8));
    for (std::size_t k = 2; k <= 28; ++k) {
        CHECK(pts[k - 1].simulated_total_ms - pts[k].simulated_total_ms ==
              doctest::Approx(228.9));
        CHECK(pts[k].vram_total_mb - pts[k - 1].vram_total_mb == doctest::Approx(368.0));
    }
    CHECK(pts[28].placement.resident("vlm").size() == 28);
}

TEST_CASE("sweeps of other modules")
{
    const auto p = testing::rtx5070ti();
    const auto vit = sweep(p, "vit", {0, 1, 2, 10});
    // EXE-bound: only the first layer matters.
    CHECK(vit[0].simulated_total_ms - vit[1].simulated_total_ms == doctest::Approx(0.9));
    CHECK(vit[1].simulated_total_ms == doctest::Approx(vit[3].simulated_total_ms));

    const auto expert = sweep(p, "expert", {1, 2, 3});
    CHECK(expert[0].simulated_total_ms - expert[1].simulated_total_ms == doctest::Approx(36.0));
    CHECK(expert[1].simulated_total_ms - expert[2].simulated_total_ms == doctest::Approx(36.0));

    CHECK_THROWS_AS(sweep(p, "vlm", {36}), ArgumentError);
    CHECK_THROWS_AS(sweep(p, "nope", {1}), ArgumentError);
}

TEST_CASE("plan json round trip")
{
    const auto p = testing::rtx5070ti();
    const auto plan = plan_for_budget(p, 16000.0);
    const auto text = plan_to_json(plan);
    CHECK(parse_plan_placement(text) == plan.placement);
    CHECK_THROWS_AS(parse_plan_placement("{}"), ParseError);
    CHECK_THROWS_AS(parse_plan_placement("not json"), ParseError);
}
