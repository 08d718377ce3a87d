#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mqi/scattering.hpp"

#include <cmath>
#include <random>

using namespace mqi;
using doctest::Approx;

TEST_CASE("resonant strong coupling pins the reflection to -2beta/(2beta+1)") {
    auto a = amplitudes(SystemParams::symmetric(50.0), Detuning(0.0));
    // R = -100/101, T = 1/101 up to rounding of the last bit
    CHECK(std::abs(a.r - Cx(-100.0 / 101.0, 0.0)) < 1e-15);
    CHECK(std::abs(a.t - Cx(1.0 / 101.0, 0.0)) < 1e-15);
    CHECK(std::abs(a.r.imag()) < 1e-16);
    CHECK(std::abs(std::norm(a.r) - (100.0 / 101.0) * (100.0 / 101.0)) < 1e-15);
}

TEST_CASE("lossless resonance gives a perfect mirror") {
    auto a = amplitudes(SystemParams(0.0, 1.0, 1.0), Detuning(0.0));
    CHECK(std::abs(a.r - Cx(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(a.t) < 1e-15);
}

TEST_CASE("lossless amplitudes at one linewidth detuning") {
    SystemParams p(0.0, 1.0, 1.0);
    auto ap = amplitudes(p, Detuning(1.0));
    CHECK(std::abs(ap.t - Cx(0.5, -0.5)) < 1e-15);
    CHECK(std::abs(ap.r - Cx(-0.5, -0.5)) < 1e-15);
    auto am = amplitudes(p, Detuning(-1.0));
    CHECK(std::abs(am.t - Cx(0.5, 0.5)) < 1e-15);
    CHECK(std::abs(am.r - Cx(-0.5, 0.5)) < 1e-15);
}

TEST_CASE("decoupled emitter transmits everything") {
    auto a = amplitudes(SystemParams(1.0, 0.0, 0.0), Detuning(0.3));
    CHECK(a.t == Cx(1.0, 0.0));
    CHECK(a.r == Cx(0.0, 0.0));
    CHECK(a.phi_e == Cx(0.0, 0.0));
    // backward-only coupling still leaves the forward mode untouched
    auto b = amplitudes(SystemParams(1.0, 0.0, 4.0), Detuning(0.0));
    CHECK(b.t == Cx(1.0, 0.0));
    CHECK(b.r == Cx(0.0, 0.0));
}

TEST_CASE("far detuned photons pass through") {
    auto a = amplitudes(SystemParams::symmetric(50.0), Detuning(1e7));
    CHECK(std::abs(a.t) == Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(a.r) < 1e-2);
}

TEST_CASE("transmission equals one plus reflection for symmetric coupling") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> ug(0.01, 80.0), ud(-200.0, 200.0);
    for (int i = 0; i < 200; ++i) {
        SystemParams p(1.0, 0.0, 0.0);
        double g = ug(rng);
        p = SystemParams(1.0, g, g);
        auto a = amplitudes(p, Detuning(ud(rng)));
        CHECK(std::abs(a.t - (Cx(1.0, 0.0) + a.r)) < 1e-14);
    }
}

TEST_CASE("scattered flux never exceeds the input") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ur(0.0, 100.0), ud(-300.0, 300.0);
    for (int i = 0; i < 1000; ++i) {
        SystemParams p(ur(rng), ur(rng), ur(rng));
        auto a = amplitudes(p, Detuning(ud(rng)));
        double flux = std::norm(a.r) + std::norm(a.t);
        CHECK(flux <= 1.0 + 1e-12);
    }
}

TEST_CASE("zero free space loss means unit flux") {
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> ur(0.0, 100.0), ud(-300.0, 300.0);
    for (int i = 0; i < 100; ++i) {
        SystemParams p(0.0, ur(rng), ur(rng));
        auto a = amplitudes(p, Detuning(ud(rng)));
        CHECK(std::norm(a.r) + std::norm(a.t) == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("reflection magnitude is even in detuning") {
    auto p = SystemParams::symmetric(30.0);
    for (double d : {0.5, 3.0, 17.0, 90.0}) {
        auto a = amplitudes(p, Detuning(d));
        auto b = amplitudes(p, Detuning(-d));
        CHECK(std::abs(a.r) == Approx(std::abs(b.r)).epsilon(1e-14));
        CHECK(std::abs(a.t) == Approx(std::abs(b.t)).epsilon(1e-14));
    }
}

TEST_CASE("loss matches the lorentzian closed form") {
    // symmetric coupling: 1-|R|^2-|T|^2 = 4*Gamma*gamma / (4 d^2 + (gamma+2 Gamma)^2)
    for (double g : {5.0, 50.0}) {
        auto p = SystemParams::symmetric(g);
        for (double d : {0.0, 1.0, 25.0, -60.0}) {
            auto a = amplitudes(p, Detuning(d));
            double expect = 4.0 * g * 1.0 / (4.0 * d * d + (1.0 + 2.0 * g) * (1.0 + 2.0 * g));
            CHECK(loss(a) == Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("amplitude sweep matches pointwise evaluation") {
    auto p = SystemParams::symmetric(10.0);
    std::vector<Detuning> ds = {Detuning(-3.0), Detuning(0.0), Detuning(7.5)};
    auto rows = amplitude_sweep(p, ds);
    REQUIRE(rows.size() == 3);
    for (size_t i = 0; i < ds.size(); ++i) {
        auto a = amplitudes(p, ds[i]);
        CHECK(rows[i].r == a.r);
        CHECK(rows[i].t == a.t);
    }
}

TEST_CASE("equal split detunings bracket the analytic crossing") {
    SUBCASE("lossless case crosses exactly at the coupling rate") {
        auto [dp, dm] = equal_split_detunings(SystemParams(0.0, 1.0, 1.0));
        CHECK(dp.value == Approx(1.0).epsilon(1e-8));
        CHECK(dm.value == Approx(-1.0).epsilon(1e-8));
    }
    SUBCASE("strong coupling matches sqrt(Gamma^2 - gamma^2/4)") {
        auto [dp, dm] = equal_split_detunings(SystemParams::symmetric(50.0));
        CHECK(dp.value == Approx(49.9974999375).epsilon(1e-9));
        CHECK(dm.value == Approx(-dp.value).epsilon(1e-15));
        auto a = amplitudes(SystemParams::symmetric(50.0), dp);
        CHECK(std::abs(a.r) == Approx(std::abs(a.t)).epsilon(1e-9));
        // the crossing sits within 2 percent of the bare coupling rate
        CHECK(std::abs(dp.value - 50.0) / 50.0 < 0.02);
    }
    SUBCASE("moderate coupling") {
        auto [dp, dm] = equal_split_detunings(SystemParams::symmetric(10.0));
        CHECK(dp.value == Approx(9.9874921777).epsilon(1e-9));
        (void)dm;
    }
}

TEST_CASE("equal split requires symmetric coupling and an actual crossing") {
    CHECK_THROWS_AS(equal_split_detunings(SystemParams(1.0, 3.0, 1.0)), std::invalid_argument);
    // overdamped emitter: |r| stays below |t| everywhere, no crossing
    CHECK_THROWS_AS(equal_split_detunings(SystemParams(1.0, 0.2, 0.2)), NoCrossingError);
    CHECK_THROWS_AS(equal_split_detunings(SystemParams(1.0, 0.0, 0.0)), std::exception);
}
