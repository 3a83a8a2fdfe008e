#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "optimize/bass.hpp"
#include "optimize/baselines.hpp"
#include "optimize/trace.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bass;
using bass::testing::random_dataset;
using bass::testing::random_pattern;

TEST_CASE("add and remove counts keep moves K points wide") {
    CHECK(add_count(50, 5, 50) == 5);
    CHECK(remove_count(50, 5, 50) == 5);
    CHECK(add_count(0, 10, 50) == 10);
    CHECK(remove_count(0, 10, 50) == 0);
    CHECK(add_count(60, 10, 50) == 0);
    CHECK(remove_count(60, 10, 50) == 10);
    CHECK(add_count(45, 10, 50) == 10);
    CHECK(remove_count(45, 10, 50) == 5);

    // Sizes step by K toward M and then hold it exactly.
    for (std::int64_t m : {1, 7, 20}) {
        for (std::int64_t k : {1, 3, 8}) {
            for (std::int64_t s = 0; s <= 30; ++s) {
                const std::int64_t a = add_count(s, k, m);
                const std::int64_t r = remove_count(s, k, m);
                CHECK(a >= 0);
                CHECK(a <= k);
                CHECK(r >= 0);
                CHECK(r <= k);
                const std::int64_t next = s + a - r;
                const std::int64_t expect =
                    s < m ? std::min(s + k, m) : std::max(s - k, m);
                CHECK(next == expect);
            }
        }
    }
}

TEST_CASE("default pre-selection probabilities") {
    CHECK(default_rho_r(10, 100, 1000) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(default_rho_a(10, 100, 1000) == doctest::Approx(0.1).epsilon(1e-15));
    // Low acceleration: the fill term 2K/(N-M) dominates and saturates at 1.
    CHECK(default_rho_a(10, 100, 120) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(default_rho_a(30, 100, 400) == doctest::Approx(std::max(0.3, 60.0 / 300.0)).epsilon(1e-15));
}

TEST_CASE("select_add takes the highest-scored free points at rho 1") {
    const KSpaceGrid grid(6, 6, 1, 1);
    const SamplingPattern omega(grid, {0}, {});
    std::vector<double> eps(36, 0.0);
    eps[20] = 0.9;
    eps[5] = 0.8;
    eps[9] = 0.7;
    eps[0] = 5.0;  // member; not in the pool
    Rng rng = make_rng(1);
    const auto picked = select_add(omega, 3, 10, 1.0, eps, PositionalConstraint{1, true}, rng);
    CHECK(picked == std::vector<std::int64_t>{20, 5, 9});
}

TEST_CASE("select_add skips constraint violations greedily") {
    const KSpaceGrid grid(6, 6, 1, 1);
    const SamplingPattern omega(grid, {0}, {});
    std::vector<double> eps(36, 0.0);
    eps[20] = 0.9;
    eps[21] = 0.85;  // adjacent to 20
    eps[5] = 0.8;
    eps[9] = 0.7;
    Rng rng = make_rng(1);
    const auto with_pc = select_add(omega, 3, 10, 1.0, eps, PositionalConstraint{1, true}, rng);
    CHECK(with_pc == std::vector<std::int64_t>{20, 5, 9});

    const auto no_pc = select_add(omega, 3, 10, 1.0, eps, PositionalConstraint{0, false}, rng);
    CHECK(no_pc == std::vector<std::int64_t>{20, 21, 5});
}

TEST_CASE("select_add escalates rho until the batch is filled") {
    const KSpaceGrid grid(6, 6, 1, 1);
    const SamplingPattern omega(grid, {0}, {});
    std::vector<double> eps(36, 0.0);
    for (std::size_t k = 0; k < eps.size(); ++k) eps[k] = static_cast<double>(k % 7);
    Rng rng = make_rng(77);
    bool relaxed = false;
    const auto picked =
        select_add(omega, 4, 10, 1e-9, eps, PositionalConstraint{1, true}, rng, &relaxed);
    CHECK(picked.size() == 4);
    CHECK_FALSE(relaxed);
    for (std::size_t i = 0; i < picked.size(); ++i) {
        CHECK_FALSE(omega.contains(picked[i]));
        std::vector<std::int64_t> others;
        for (std::size_t j = 0; j < picked.size(); ++j) {
            if (j != i) others.push_back(picked[j]);
        }
        CHECK_FALSE(violates_constraint(picked[i], others, PositionalConstraint{1, true}, grid));
    }
}

TEST_CASE("select_add drops the constraint when it is infeasible") {
    const KSpaceGrid grid(3, 3, 1, 1);
    const SamplingPattern omega = SamplingPattern::empty(grid);
    const std::vector<double> eps(9, 1.0);
    Rng rng = make_rng(3);
    bool relaxed = false;
    const auto picked =
        select_add(omega, 5, 5, 0.25, eps, PositionalConstraint{5, true}, rng, &relaxed);
    CHECK(picked.size() == 5);
    CHECK(relaxed);
}

TEST_CASE("select_remove drains the highest-r unlocked members") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const SamplingPattern omega(grid, {1, 4, 7, 10, 13}, {4});
    std::vector<double> rmap(16, 0.0);
    rmap[4] = 100.0;  // locked: may never leave
    rmap[13] = 0.9;
    rmap[1] = 0.8;
    rmap[7] = 0.2;
    rmap[10] = 0.1;
    Rng rng = make_rng(5);
    const auto removed =
        select_remove(omega, 2, 3, 1.0, rmap, PositionalConstraint{0, false}, rng);
    CHECK(removed == std::vector<std::int64_t>{13, 1});

    CHECK_THROWS_WITH_AS(
        select_remove(SamplingPattern(grid, {0, 2, 8, 10, 12}, {0, 2, 8, 10}), 3, 4, 1.0, rmap,
                      PositionalConstraint{0, false}, rng),
        doctest::Contains("removable points"), Error);
}

TEST_CASE("validate_bass_config rejects each bad field") {
    BassConfig cfg;
    cfg.M = 10;
    cfg.L = 20;
    cfg.K_init = 2;
    const std::int64_t n = 100;

    BassConfig bad = cfg;
    bad.M = 0;
    CHECK_THROWS_WITH_AS(validate_bass_config(bad, n, 0, 0),
                         doctest::Contains("M must be >= 1"), Error);
    bad = cfg;
    bad.M = n;
    CHECK_THROWS_WITH_AS(validate_bass_config(bad, n, 0, 0),
                         doctest::Contains("M must be < grid size N"), Error);
    bad = cfg;
    bad.K_init = 0;
    CHECK_THROWS_WITH_AS(validate_bass_config(bad, n, 0, 0),
                         doctest::Contains("K_init must be >= 1"), Error);
    bad = cfg;
    bad.K_init = 10;
    CHECK_THROWS_WITH_AS(validate_bass_config(bad, n, 0, 0),
                         doctest::Contains("K_init must be < min(M, N-M) = 10"), Error);
    bad = cfg;
    bad.alpha = 1.0;
    CHECK_THROWS_WITH_AS(validate_bass_config(bad, n, 0, 0),
                         doctest::Contains("alpha must lie in (0, 1)"), Error);
    bad = cfg;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(validate_bass_config(bad, n, 0, 0), Error);
    bad = cfg;
    bad.L = 0;
    CHECK_THROWS_WITH_AS(validate_bass_config(bad, n, 0, 0),
                         doctest::Contains("L must be >= 1"), Error);
    bad = cfg;
    bad.delta = 0.0;
    CHECK_THROWS_WITH_AS(validate_bass_config(bad, n, 0, 0),
                         doctest::Contains("delta must be > 0"), Error);
    bad = cfg;
    CHECK_THROWS_WITH_AS(validate_bass_config(bad, n, 0, 11),
                         doctest::Contains("exceeds target size M"), Error);
    bad = cfg;
    bad.K_init = 3;
    bad.L = 4;
    CHECK_THROWS_WITH_AS(validate_bass_config(bad, n, 0, 0),
                         doctest::Contains("need at least 5 iterations"), Error);
    validate_bass_config(cfg, n, 0, 0);
    validate_bass_config(cfg, n, 10, 10);
}

TEST_CASE("bass_init evaluates once without a trace row") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const Dataset ds = random_dataset(grid, 3, 201);
    const oracle::IdentityReconstructor recon(ds);
    Rng rng = make_rng(202);
    const SamplingPattern init = random_pattern(grid, 4, {}, rng);

    BassConfig cfg;
    cfg.M = 8;
    cfg.L = 10;
    cfg.K_init = 2;
    const BassState state = bass_init(init, cfg, ds, recon);
    CHECK(state.trace.empty());
    CHECK(state.iteration == 0);
    CHECK(state.recon_calls == 3);
    CHECK(recon.recon_calls() == 3);
    CHECK(state.value == 0.0);
    CHECK(state.F == 0.0);
    CHECK(state.K == 2);
    CHECK_FALSE(state.best.has_value());
    CHECK(state.maps.eps.size() == 16);
    CHECK(state.maps.dataset_fp == dataset_fingerprint(ds));

    BassConfig img = cfg;
    img.criterion = CriterionKind::image;
    CHECK_THROWS_WITH_AS(bass_init(init, img, ds, recon),
                         doctest::Contains("needs coil sensitivities"), Error);

    const Dataset other = random_dataset(KSpaceGrid(5, 4, 1, 1), 1, 7);
    CHECK_THROWS_WITH_AS(bass_init(init, cfg, other, recon),
                         doctest::Contains("does not match dataset grid"), Error);
}

TEST_CASE("bass_step makes one move of the prescribed widths") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 205);
    const oracle::EmbedReconstructor recon(grid);
    Rng rng = make_rng(206);
    const SamplingPattern init = random_pattern(grid, 3, {}, rng);

    BassConfig cfg;
    cfg.M = 8;
    cfg.L = 10;
    cfg.K_init = 2;
    BassState state = bass_init(init, cfg, ds, recon);
    bass_step(state, cfg, ds, recon);
    CHECK(state.iteration == 1);
    CHECK(state.trace.size() == 1);
    CHECK(state.last_added.size() == static_cast<std::size_t>(add_count(3, 2, 8)));
    CHECK(state.last_removed.size() == static_cast<std::size_t>(remove_count(3, 2, 8)));
    CHECK(state.omega.size() == 5);
    CHECK(state.recon_calls == 4);
    CHECK(state.trace[0].iter == 1);
    CHECK(state.trace[0].size == 5);
    CHECK(state.trace[0].accepted);
    CHECK(state.trace[0].recon_calls_cum == 4);
    CHECK(state.trace[0].wall_ms == 0.0);
}

TEST_CASE("bass grows by K and then holds the target size") {
    const KSpaceGrid grid(6, 6, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 301);
    const oracle::IdentityReconstructor recon(ds);

    BassConfig cfg;
    cfg.M = 24;
    cfg.K_init = 8;
    cfg.L = 6;
    const BassRunResult res = bass_run(SamplingPattern::empty(grid), cfg, ds, recon);

    REQUIRE(res.trace.size() == 6);
    const std::vector<std::int64_t> sizes{8, 16, 24, 24, 24, 24};
    for (std::size_t i = 0; i < res.trace.size(); ++i) {
        CHECK(res.trace[i].iter == static_cast<int>(i) + 1);
        CHECK(res.trace[i].size == sizes[i]);
        CHECK(res.trace[i].accepted);
        CHECK(res.trace[i].K == 8);
        CHECK(res.trace[i].F == 0.0);
        CHECK(res.trace[i].recon_calls_cum == 2 * (static_cast<std::int64_t>(i) + 2));
    }
    CHECK(res.pattern.size() == 24);
    CHECK(res.final_value == 0.0);
    CHECK(res.recon_calls == 2 * 7);
    CHECK_FALSE(res.pc_relaxed);
}

TEST_CASE("bass rejections shrink K by the configured factor") {
    const KSpaceGrid grid(5, 5, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 310);
    const oracle::EmbedReconstructor recon(grid);
    Rng rng = make_rng(311);
    const SamplingPattern init = random_pattern(grid, 10, {}, rng);

    BassConfig cfg;
    cfg.M = 10;
    cfg.K_init = 4;
    cfg.L = 40;
    cfg.alpha = 0.5;
    cfg.seed = 9;
    const BassRunResult res = bass_run(init, cfg, ds, recon);

    REQUIRE(res.trace.size() == 40);
    std::int64_t k = cfg.K_init;
    int rejections = 0;
    for (const TraceRow& row : res.trace) {
        CHECK(row.size == 10);
        if (row.accepted) {
            CHECK(row.K == k);
        } else {
            ++rejections;
            const std::int64_t expect =
                static_cast<std::int64_t>(std::floor(static_cast<double>(k - 1) * cfg.alpha)) + 1;
            CHECK(row.K == expect);
            k = expect;
        }
    }
    CHECK(rejections >= 1);
    CHECK(k >= 1);

    // Once K hits 1 it stays there.
    if (k == 1) {
        bool after_one = false;
        std::int64_t prev = cfg.K_init;
        for (const TraceRow& row : res.trace) {
            if (after_one) CHECK(row.K == 1);
            if (row.K == 1 && prev == 1) after_one = true;
            prev = row.K;
        }
    }
}

TEST_CASE("bass acceptance is monotone at the target size") {
    const KSpaceGrid grid(5, 5, 1, 2);
    const Dataset ds = random_dataset(grid, 3, 320);
    const oracle::EmbedReconstructor recon(grid);
    Rng rng = make_rng(321);
    const SamplingPattern init = random_pattern(grid, 8, {}, rng);

    BassConfig cfg;
    cfg.M = 8;
    cfg.K_init = 3;
    cfg.L = 30;
    cfg.seed = 4;
    const BassRunResult res = bass_run(init, cfg, ds, recon);

    double last_accepted = std::numeric_limits<double>::infinity();
    double best_seen = std::numeric_limits<double>::infinity();
    for (const TraceRow& row : res.trace) {
        if (row.accepted) {
            CHECK(row.F <= last_accepted);
            last_accepted = row.F;
            best_seen = std::min(best_seen, row.F);
        }
    }
    CHECK(res.final_value == best_seen);
    CHECK(res.pattern.size() == 8);
}

TEST_CASE("bass runs are deterministic in the seed") {
    const KSpaceGrid grid(4, 4, 2, 1);
    const Dataset ds = random_dataset(grid, 2, 330);
    const oracle::EmbedReconstructor recon(grid);

    BassConfig cfg;
    cfg.M = 10;
    cfg.K_init = 3;
    cfg.L = 15;
    cfg.seed = 31;
    const BassRunResult a = bass_run(SamplingPattern::empty(grid), cfg, ds, recon);
    const BassRunResult b = bass_run(SamplingPattern::empty(grid), cfg, ds, recon);
    CHECK(a.pattern == b.pattern);
    CHECK(trace_to_csv(a.trace) == trace_to_csv(b.trace));
    CHECK(a.final_value == b.final_value);

    cfg.seed = 32;
    const BassRunResult c = bass_run(SamplingPattern::empty(grid), cfg, ds, recon);
    CHECK_FALSE(trace_to_csv(c.trace) == trace_to_csv(a.trace));
}

TEST_CASE("bass keeps locked points through every move") {
    const KSpaceGrid grid(6, 6, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 340);
    const oracle::EmbedReconstructor recon(grid);
    const auto locked = calibration_region(grid, 1, 1);
    std::vector<std::int64_t> members = locked;
    const SamplingPattern init(grid, members, locked);

    BassConfig cfg;
    cfg.M = 12;
    cfg.K_init = 3;
    cfg.L = 25;
    cfg.seed = 8;
    const BassRunResult res = bass_run(init, cfg, ds, recon);
    CHECK(res.pattern.size() == 12);
    for (std::int64_t k : locked) {
        CHECK(res.pattern.contains(k));
        CHECK(res.pattern.is_locked(k));
    }
}

TEST_CASE("bass supports the image criterion when sensitivities are given") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 350);
    const CoilSensitivities sens = CoilSensitivities::uniform(4, 4, 1);
    const oracle::IdentityReconstructor recon(ds, &sens);
    Rng rng = make_rng(351);
    const SamplingPattern init = random_pattern(grid, 6, {}, rng);

    BassConfig cfg;
    cfg.M = 6;
    cfg.K_init = 2;
    cfg.L = 5;
    cfg.criterion = CriterionKind::image;
    const BassRunResult res = bass_run(init, cfg, ds, recon, &sens);
    CHECK(res.final_value == doctest::Approx(-1.0).epsilon(1e-12));
    for (const TraceRow& row : res.trace) CHECK(row.accepted);
}

TEST_CASE("greedy at the initial size does nothing") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 401);
    const oracle::EmbedReconstructor recon(grid);
    Rng rng = make_rng(402);
    const SamplingPattern init = random_pattern(grid, 5, {}, rng);

    GreedyConfig cfg;
    cfg.M = 5;
    const OptimizerRunResult res = greedy_forward(init, cfg, ds, recon);
    CHECK(res.pattern == init);
    CHECK(res.trace.empty());
    CHECK(res.recon_calls == 0);
    CHECK(recon.recon_calls() == 0);
    CHECK(std::isnan(res.final_F));

    cfg.M = 4;
    CHECK_THROWS_WITH_AS(greedy_forward(init, cfg, ds, recon),
                         doctest::Contains("below the initial size"), Error);
    cfg.M = 17;
    CHECK_THROWS_WITH_AS(greedy_forward(init, cfg, ds, recon),
                         doctest::Contains("exceeds grid size"), Error);
}

TEST_CASE("non-lazy greedy scans every candidate each step") {
    const KSpaceGrid grid(3, 3, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 410);
    const oracle::EmbedReconstructor recon(grid);

    GreedyConfig cfg;
    cfg.M = 2;
    cfg.lazy = false;
    const OptimizerRunResult res = greedy_forward(SamplingPattern::empty(grid), cfg, ds, recon);
    REQUIRE(res.trace.size() == 2);
    CHECK(res.trace[0].K == 9);
    CHECK(res.trace[1].K == 8);
    CHECK(res.trace[0].size == 1);
    CHECK(res.trace[1].size == 2);
    CHECK(res.recon_calls == 2 * (9 + 8));
    CHECK(res.trace[1].F < res.trace[0].F);
    CHECK(res.final_F == res.trace[1].F);

    // First pick is the exhaustive argmin over single points.
    const oracle::EmbedReconstructor fresh(grid);
    std::int64_t best_k = -1;
    double best_f = std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k < 9; ++k) {
        const double f = efficacy(SamplingPattern(grid, {k}, {}), ds, fresh).F;
        if (f < best_f) {
            best_f = f;
            best_k = k;
        }
    }
    GreedyConfig one = cfg;
    one.M = 1;
    const OptimizerRunResult first = greedy_forward(SamplingPattern::empty(grid), one, ds, recon);
    CHECK(first.pattern.members()[0] == best_k);
    CHECK(first.final_F == best_f);
}

TEST_CASE("lazy greedy matches the exhaustive variant with fewer calls") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const Dataset ds = random_dataset(grid, 3, 420);
    const oracle::EmbedReconstructor r1(grid), r2(grid);

    GreedyConfig cfg;
    cfg.M = 6;
    cfg.lazy = false;
    const OptimizerRunResult full = greedy_forward(SamplingPattern::empty(grid), cfg, ds, r1);
    cfg.lazy = true;
    const OptimizerRunResult lazy = greedy_forward(SamplingPattern::empty(grid), cfg, ds, r2);

    CHECK(lazy.pattern == full.pattern);
    CHECK(lazy.final_F == full.final_F);
    CHECK(lazy.recon_calls <= full.recon_calls);
    CHECK(lazy.trace.size() == full.trace.size());
    for (std::size_t i = 0; i < lazy.trace.size(); ++i) {
        CHECK(lazy.trace[i].F == full.trace[i].F);
        CHECK(lazy.trace[i].size == full.trace[i].size);
    }
}

TEST_CASE("greedy respects the recon call budget") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 430);
    const oracle::EmbedReconstructor recon(grid);

    GreedyConfig cfg;
    cfg.M = 8;
    cfg.lazy = true;
    cfg.max_recon_calls = 40;
    const OptimizerRunResult res = greedy_forward(SamplingPattern::empty(grid), cfg, ds, recon);
    CHECK(res.recon_calls <= 40);
    CHECK(res.pattern.size() < 8);
    CHECK(recon.recon_calls() == res.recon_calls);
}

TEST_CASE("greedy starts from a non-empty pattern") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 440);
    const oracle::EmbedReconstructor recon(grid);
    const auto locked = calibration_region(grid, 1, 1);
    const SamplingPattern init(grid, locked, locked);

    GreedyConfig cfg;
    cfg.M = 7;
    const OptimizerRunResult res = greedy_forward(init, cfg, ds, recon);
    CHECK(res.pattern.size() == 7);
    CHECK(res.trace.size() == 3);
    for (std::int64_t k : locked) CHECK(res.pattern.contains(k));
}

TEST_CASE("poss repairs the size and accepts non-increasing moves") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 501);
    const oracle::EmbedReconstructor recon(grid);
    Rng rng = make_rng(502);
    const SamplingPattern init = random_pattern(grid, 5, {}, rng);

    PossConfig cfg;
    cfg.M = 5;
    cfg.L = 25;
    cfg.seed = 13;
    const OptimizerRunResult res = poss_run(init, cfg, ds, recon);
    REQUIRE(res.trace.size() == 25);
    double current = efficacy(init, ds, oracle::EmbedReconstructor(grid)).F;
    for (const TraceRow& row : res.trace) {
        CHECK(row.size == 5);
        if (row.accepted) {
            CHECK(row.F <= current);
            current = row.F;
        } else {
            CHECK(row.F > current);
        }
    }
    CHECK(res.final_F == current);
    CHECK(res.recon_calls == 26 * 2);
    CHECK(res.pattern.size() == 5);
}

TEST_CASE("poss accepts every candidate under a flat objective") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 510);
    const oracle::IdentityReconstructor recon(ds);
    Rng rng = make_rng(511);
    const SamplingPattern init = random_pattern(grid, 6, {}, rng);

    PossConfig cfg;
    cfg.M = 6;
    cfg.L = 12;
    cfg.seed = 3;
    const OptimizerRunResult res = poss_run(init, cfg, ds, recon);
    for (const TraceRow& row : res.trace) {
        CHECK(row.accepted);
        CHECK(row.F == 0.0);
    }
}

TEST_CASE("a flip-free poss iteration keeps the pattern and accepts it") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 520);
    Rng rng = make_rng(521);
    const SamplingPattern init = random_pattern(grid, 5, {}, rng);

    bool found = false;
    for (std::uint64_t seed = 0; seed < 64 && !found; ++seed) {
        const oracle::EmbedReconstructor recon(grid);
        PossConfig cfg;
        cfg.M = 5;
        cfg.L = 1;
        cfg.seed = seed;
        const OptimizerRunResult res = poss_run(init, cfg, ds, recon);
        REQUIRE(res.trace.size() == 1);
        if (res.trace[0].K == 0) {
            found = true;
            CHECK(res.trace[0].accepted);
            CHECK(res.pattern == init);
        }
    }
    CHECK(found);
}

TEST_CASE("poss is deterministic and keeps locked points") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const Dataset ds = random_dataset(grid, 2, 530);
    const auto locked = calibration_region(grid, 1, 1);
    const SamplingPattern init(grid, locked, locked);

    PossConfig cfg;
    cfg.M = 8;
    cfg.L = 20;
    cfg.seed = 5;
    const oracle::EmbedReconstructor r1(grid), r2(grid);
    const OptimizerRunResult a = poss_run(init, cfg, ds, r1);
    const OptimizerRunResult b = poss_run(init, cfg, ds, r2);
    CHECK(a.pattern == b.pattern);
    CHECK(trace_to_csv(a.trace) == trace_to_csv(b.trace));
    CHECK(a.pattern.size() == 8);
    for (std::int64_t k : locked) CHECK(a.pattern.contains(k));
    for (const TraceRow& row : a.trace) CHECK(row.size == 8);

    PossConfig bad = cfg;
    bad.M = 2;
    CHECK_THROWS_WITH_AS(poss_run(init, bad, ds, r1),
                         doctest::Contains("below the locked point count"), Error);
}

TEST_CASE("poss with a zero budget of iterations evaluates once") {
    const KSpaceGrid grid(4, 4, 1, 1);
    const Dataset ds = random_dataset(grid, 3, 540);
    const oracle::EmbedReconstructor recon(grid);
    Rng rng = make_rng(541);
    const SamplingPattern init = random_pattern(grid, 4, {}, rng);

    PossConfig cfg;
    cfg.M = 4;
    cfg.L = 0;
    const OptimizerRunResult res = poss_run(init, cfg, ds, recon);
    CHECK(res.trace.empty());
    CHECK(res.recon_calls == 3);
    CHECK(res.pattern == init);
    CHECK(res.final_F == efficacy(init, ds, oracle::EmbedReconstructor(grid)).F);
}

TEST_CASE("trace csv format is exact") {
    std::vector<TraceRow> rows;
    rows.push_back(TraceRow{1, 8, 8, 0.5, true, 4, 0.0});
    rows.push_back(TraceRow{2, 8, 3, 0.1, false, 6, 0.0});
    const std::string expect =
        "iter,size,K,F,accepted,recon_calls_cum,wall_ms\n"
        "1,8,8,0.5,1,4,0\n"
        "2,8,3,0.10000000000000001,0,6,0\n";
    CHECK(trace_to_csv(rows) == expect);
    CHECK(trace_csv_header() == "iter,size,K,F,accepted,recon_calls_cum,wall_ms");

    bass::testing::TempDir dir("trace");
    const std::string path = dir.file("t.csv");
    write_trace_csv(path, rows);
    CHECK(bass::testing::read_file(path) == expect);
}
