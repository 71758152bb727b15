#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spaser/analysis/closed_form.hpp"
#include "spaser/core/error.hpp"
#include "spaser/core/integrator.hpp"

using namespace spaser;
using namespace spaser::analysis;

namespace {

ModelParams medium_only() {
    ModelParams p = default_model_params();
    p.plasmon.omega_b_single = 0.0;
    return p;
}

double max_abs_diff(const DensityMatrix3& a, const DensityMatrix3& b) {
    return (a.full() - b.full()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("no pump leaves the medium in |1>") {
    ModelParams p = medium_only();
    p.gain.pump_g = 0.0;
    const auto inv = steady_inversions_closed_form(p);
    CHECK(inv.n21_bar == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(inv.n32_bar == doctest::Approx(0.0));
}

TEST_CASE("gamma21 == gamma32 gives n32 = 0 at any drive") {
    ModelParams p = medium_only();
    p.gain.gamma32 = p.gain.gamma21;
    for (double oa : {0.0, 1e12, 16e12, 1e14}) {
        p.drive.omega_a_rabi = oa;
        CHECK(std::abs(steady_inversions_closed_form(p).n32_bar) <= 1e-15);
    }
}

TEST_CASE("closed form rejects a detuned drive") {
    ModelParams p = medium_only();
    p.drive.delta_a = 1e12;
    CHECK_THROWS_AS(steady_inversions_closed_form(p), InvalidParams);
}

TEST_CASE("closed form agrees with long-time integration at the defaults") {
    const ModelParams p = medium_only();
    IntegratorControls c;
    c.rel_tol = 1e-11;
    c.abs_tol = 1e-14;
    c.max_step = std::numeric_limits<double>::infinity();
    const SpaserState end = integrate(SpaserState{}, p, 3e-9, c).points.back().state;
    const auto inv = steady_inversions_closed_form(p);
    CHECK(end.rho.rho22 - end.rho.rho11 == doctest::Approx(inv.n21_bar).epsilon(1e-6));
    CHECK(end.rho.rho33 - end.rho.rho22 == doctest::Approx(inv.n32_bar).epsilon(1e-6));
}

TEST_CASE("background state matches the Lindblad oracle") {
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 25; ++k) {
        ModelParams p = testing::random_medium(rng);
        const DensityMatrix3 ref = testing::lindblad_steady_state(p);
        const DensityMatrix3 bg = background_state(p);
        CHECK(max_abs_diff(bg, ref) <= 1e-9);

        const auto inv = steady_inversions_closed_form(p);
        CHECK(inv.n21_bar == doctest::Approx(ref.rho22 - ref.rho11).epsilon(1e-9));
        CHECK(inv.n32_bar == doctest::Approx(ref.rho33 - ref.rho22).epsilon(1e-9));
    }
}

TEST_CASE("background state with a detuned drive matches the Lindblad oracle") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 10; ++k) {
        ModelParams p = testing::random_medium(rng);
        p.drive.delta_a = std::uniform_real_distribution<double>(-5e13, 5e13)(rng);
        CHECK(max_abs_diff(background_state(p), testing::lindblad_steady_state(p)) <= 1e-9);
    }
}

TEST_CASE("medium_state at zero field is the background state") {
    const ModelParams p = medium_only();
    CHECK(max_abs_diff(medium_state(p, 0.0), background_state(p)) <= 1e-14);
}
