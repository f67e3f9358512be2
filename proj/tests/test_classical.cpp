#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "deh/classical.hpp"

using namespace deh;

namespace {

OscillatorParams resonant_unit() {
    OscillatorParams p;  // m = k = 1, so omega0 = 1
    p.f0 = 1.0;
    p.omega = 1.0;
    return p;
}

}  // namespace

TEST_CASE("resonant closed form oracle points") {
    OscillatorParams p = resonant_unit();
    CHECK_THAT(resonant_trajectory(p, kPi / 2.0).q, Catch::Matchers::WithinAbs(kPi / 4.0, 1e-14));
    CHECK_THAT(resonant_trajectory(p, kPi).q, Catch::Matchers::WithinAbs(0.0, 1e-13));

    // undriven limit: plain free oscillation from the initial conditions
    p.f0 = 0.0;
    p.alpha = 0.7;
    p.beta = -0.3;
    for (double t : {0.0, 0.9, 4.4}) {
        const OscState s = resonant_trajectory(p, t);
        CHECK_THAT(s.q, Catch::Matchers::WithinAbs(0.7 * std::cos(t) - 0.3 * std::sin(t), 1e-14));
        CHECK_THAT(s.qdot,
                   Catch::Matchers::WithinAbs(-0.7 * std::sin(t) - 0.3 * std::cos(t), 1e-14));
    }
}

TEST_CASE("initial conditions are honored in both regimes") {
    std::mt19937_64 rng(0x0c1a551cULL);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        OscillatorParams p;
        p.mass = 0.5 + std::abs(u(rng));
        p.spring_k = 0.5 + std::abs(u(rng));
        p.f0 = u(rng);
        p.omega = (k % 2 == 0) ? p.omega0() : p.omega0() * 1.37;
        p.phase = u(rng);
        p.alpha = u(rng);
        p.beta = u(rng);
        const OscState s = oscillator_state(p, 0.0);
        CHECK_THAT(s.q, Catch::Matchers::WithinAbs(p.alpha, 1e-12));
        CHECK_THAT(s.qdot, Catch::Matchers::WithinAbs(p.beta, 1e-12));
    }
}

TEST_CASE("off-resonant constraint case returns to rest") {
    OscillatorParams p;
    p.spring_k = 4.0;  // omega0 = 2
    p.omega = 1.0;
    p.f0 = 1.0;
    const OscState s = offresonant_trajectory(p, 2.0 * kPi);
    CHECK_THAT(s.q, Catch::Matchers::WithinAbs(0.0, 1e-13));
    CHECK_THAT(s.qdot, Catch::Matchers::WithinAbs(0.0, 1e-13));
}

TEST_CASE("off-resonant closed form matches direct integration") {
    OscillatorParams p;
    p.spring_k = 1.69;  // omega0 = 1.3
    p.omega = 1.0;
    p.f0 = 1.0;
    p.phase = 0.4;
    p.alpha = 0.2;
    p.beta = -0.1;
    for (double t : {2.0, 5.5, 11.0}) {
        const OscState closed = offresonant_trajectory(p, t);
        const OscState numeric = oscillator_integrate(p, t, 200000);
        CHECK_THAT(closed.q, Catch::Matchers::WithinAbs(numeric.q, 1e-7));
        CHECK_THAT(closed.qdot, Catch::Matchers::WithinAbs(numeric.qdot, 1e-7));
    }
}

TEST_CASE("trajectory calls route to the applicable regime") {
    OscillatorParams p;
    p.spring_k = 1.69;
    p.omega = 1.0;
    p.f0 = 1.0;
    const OscState a = resonant_trajectory(p, 3.0);  // detuned input routes away
    const OscState b = offresonant_trajectory(p, 3.0);
    CHECK(a.q == b.q);
    CHECK(a.qdot == b.qdot);

    OscillatorParams r = resonant_unit();
    const OscState c = offresonant_trajectory(r, 3.0);  // resonant input routes away
    const OscState d = resonant_trajectory(r, 3.0);
    CHECK(c.q == d.q);

    // the near-resonant band avoids the ill-conditioned closed form
    OscillatorParams n = resonant_unit();
    n.omega = 1.0 + 1e-9;
    CHECK(oscillator_regime(n) == OscRegime::near_resonant);
    const OscState e = oscillator_state(n, 3.0);
    const OscState f = oscillator_state(resonant_unit(), 3.0);
    CHECK_THAT(e.q, Catch::Matchers::WithinAbs(f.q, 1e-6));
}

TEST_CASE("closed forms satisfy the equation of motion") {
    std::mt19937_64 rng(0x05c111a7ULL);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const double h = 1e-5;
    for (int k = 0; k < 30; ++k) {
        OscillatorParams p;
        p.mass = 0.5 + std::abs(u(rng));
        p.spring_k = 0.5 + std::abs(u(rng));
        p.f0 = u(rng);
        p.omega = (k % 3 == 0) ? p.omega0() : p.omega0() * (1.2 + 0.3 * std::abs(u(rng)));
        p.phase = u(rng);
        p.alpha = u(rng);
        p.beta = u(rng);
        for (double t : {0.4, 2.7, 9.1}) {
            // qddot from a central difference of the analytic velocity; a
            // second difference of q alone would drown in rounding at this h
            const double qdd =
                (oscillator_state(p, t + h).qdot - oscillator_state(p, t - h).qdot) / (2.0 * h);
            const double res = p.mass * qdd + p.spring_k * oscillator_state(p, t).q -
                               p.f0 * std::cos(p.omega * t + p.phase);
            CHECK_THAT(res, Catch::Matchers::WithinAbs(0.0, 1e-8));
        }
    }
}

TEST_CASE("phase sensitivity oracle points") {
    OscillatorParams p = resonant_unit();
    CHECK_THAT(phase_sensitivity(p, kPi / 2.0).dq_dphi,
               Catch::Matchers::WithinAbs(-0.5, 1e-14));

    p.f0 = 0.0;
    const PhaseSensitivity d = phase_sensitivity(p, 2.0);
    CHECK(d.dq_dphi == 0.0);
    CHECK(d.dqdot_dphi == 0.0);
}

TEST_CASE("phase sensitivity matches finite differences") {
    std::mt19937_64 rng(0xd1ffe4e2ULL);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const double h = 1e-6;
    for (int k = 0; k < 40; ++k) {
        OscillatorParams p;
        p.mass = 0.5 + std::abs(u(rng));
        p.spring_k = 0.5 + std::abs(u(rng));
        p.f0 = 0.5 + std::abs(u(rng));
        p.omega = (k % 2 == 0) ? p.omega0() : p.omega0() * (1.15 + 0.5 * std::abs(u(rng)));
        p.phase = u(rng);
        p.alpha = u(rng);
        p.beta = u(rng);
        for (double t : {0.8, 3.9, 14.2}) {
            OscillatorParams hi = p, lo = p;
            hi.phase += h;
            lo.phase -= h;
            const double fd_q = (oscillator_state(hi, t).q - oscillator_state(lo, t).q) / (2.0 * h);
            const double fd_v =
                (oscillator_state(hi, t).qdot - oscillator_state(lo, t).qdot) / (2.0 * h);
            const PhaseSensitivity d = phase_sensitivity(p, t);
            const double scale_q = std::max(1e-3, std::abs(fd_q));
            const double scale_v = std::max(1e-3, std::abs(fd_v));
            CHECK(std::abs(d.dq_dphi - fd_q) / scale_q < 1e-5);
            CHECK(std::abs(d.dqdot_dphi - fd_v) / scale_v < 1e-5);
        }
    }
}

TEST_CASE("certificate: no stopping time silences the phase everywhere") {
    OscillatorParams p = resonant_unit();
    std::vector<double> tg, pg;
    for (int i = 1; i <= 1000; ++i) tg.push_back(20.0 * kPi * i / 1000.0);
    for (int k = 0; k < 64; ++k) pg.push_back(2.0 * kPi * k / 64.0);
    const FailureReport rep = deh_failure_certificate(p, tg, pg);

    // In (q, qdot) jointly the sensitivity never drops near zero; measured
    // floor on this grid is 6.27e-2, at the first grid time.
    CHECK(rep.min_state_sensitivity > 0.01);
    CHECK_THAT(rep.min_state_sensitivity, Catch::Matchers::WithinAbs(6.2749e-2, 1e-5));

    // Position alone is O(T^2) for small T, so the two earliest grid times
    // fall under 0.01: 1.97e-3 and 7.87e-3. From the third time on it holds.
    int below = 0;
    for (double v : rep.max_abs_dq_dphi)
        if (v <= 0.01) ++below;
    CHECK(below == 2);
    CHECK_THAT(rep.max_abs_dq_dphi[0], Catch::Matchers::WithinAbs(1.9726e-3, 1e-6));
    CHECK_THAT(rep.max_abs_dq_dphi[2], Catch::Matchers::WithinAbs(1.7684e-2, 1e-5));

    // resonant runs never enter the return-to-start branch
    CHECK(rep.constrained_times == 0);
}

TEST_CASE("certificate: constrained off-resonant stop harvests nothing") {
    std::mt19937_64 rng(0xe4e26e57ULL);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        OscillatorParams p;
        p.spring_k = 4.0;  // omega0 = 2, drive at omega = 1
        p.omega = 1.0;
        p.f0 = 1.0;
        p.alpha = u(rng);
        p.beta = u(rng);
        const std::vector<double> tg{2.0 * kPi};
        const std::vector<double> pg{std::abs(u(rng)) * kPi, 0.3, 4.9};
        const FailureReport rep = deh_failure_certificate(p, tg, pg);
        CHECK(rep.constrained_times == 1);
        CHECK(rep.max_abs_delta_e <= 1e-9);
    }
}

TEST_CASE("certificate: undriven oscillator is trivially phase-blind") {
    OscillatorParams p = resonant_unit();
    p.f0 = 0.0;
    p.alpha = 1.0;
    const FailureReport rep =
        deh_failure_certificate(p, {1.0, 2.0, 3.0}, {0.0, 1.0, 2.0});
    CHECK(rep.min_state_sensitivity == 0.0);
    for (double v : rep.max_abs_dq_dphi) CHECK(v == 0.0);
}

TEST_CASE("certificate validates grids") {
    CHECK_THROWS_AS(deh_failure_certificate(resonant_unit(), {}, {0.0}), config_error);
    CHECK_THROWS_AS(deh_failure_certificate(resonant_unit(), {1.0}, {}), config_error);
}

TEST_CASE("dipole flip reaches the north pole for every drive phase") {
    DipoleParams base;  // electric, coupling 1, field0 1, resonance at omega 1
    base.amp = 0.01;
    const double T = dipole_flip_time(base);
    CHECK_THAT(T, Catch::Matchers::WithinAbs(100.0 * kPi, 1e-12));

    const int steps = suggested_steps(T, 1.1);
    for (int k = 0; k < 64; ++k) {
        DipoleParams p = base;
        p.phase = 2.0 * kPi * k / 64.0;
        const VecTrace tr = integrate_dipole(p, Vec3{0.0, 0.0, -1.0}, T, steps);
        CHECK(tr.final_point().z >= 0.995);
        for (std::size_t i = 0; i < tr.points.size(); i += 499)
            CHECK(std::abs(norm(tr.points[i]) - 1.0) < 1e-10);
    }
}

TEST_CASE("undriven dipole precesses with fixed tilt") {
    DipoleParams p;
    p.amp = 0.0;
    const Vec3 l0{0.6, 0.0, 0.8};
    const VecTrace tr = integrate_dipole(p, l0, 25.0, 4000);
    for (const Vec3& l : tr.points) {
        CHECK_THAT(l.z, Catch::Matchers::WithinAbs(0.8, 1e-12));
        CHECK_THAT(norm(l), Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("matched magnetic and electric dipoles trace the same path") {
    DipoleParams e;
    e.kind = DipoleParams::Kind::electric;
    e.coupling = 2.0;  // rotation scale 1/2
    e.field0 = 2.0;    // precession rate 1 -> resonant at omega 1
    e.amp = 0.02;
    e.phase = 0.7;

    DipoleParams m = e;
    m.kind = DipoleParams::Kind::magnetic;
    m.coupling = 0.5;  // same rotation scale directly

    const double T = dipole_flip_time(e);
    CHECK_THAT(T, Catch::Matchers::WithinAbs(dipole_flip_time(m), 1e-12));
    const int steps = suggested_steps(T, 2.1);
    const VecTrace a = integrate_dipole(e, Vec3{0.0, 0.0, -1.0}, T, steps);
    const VecTrace b = integrate_dipole(m, Vec3{0.0, 0.0, -1.0}, T, steps);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.points.size(); i += 97)
        worst = std::max(worst, max_abs_diff(a.points[i], b.points[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("zero-damping precession flip also works with the LLG sign") {
    DipoleParams p;
    p.kind = DipoleParams::Kind::llg;
    p.coupling = 1.0;
    p.amp = 0.01;
    const double T = dipole_flip_time(p);
    const VecTrace tr = integrate_dipole(p, Vec3{0.0, 0.0, -1.0}, T, suggested_steps(T, 1.1));
    CHECK(tr.final_point().z >= 0.995);
}

TEST_CASE("dipole configuration guards") {
    DipoleParams p;
    p.damping = 0.1;
    CHECK_THROWS_AS(integrate_dipole(p, Vec3{0.0, 0.0, -1.0}, 1.0, 1000), unsupported_error);

    DipoleParams z;
    z.coupling = 0.0;
    CHECK_THROWS_AS(integrate_dipole(z, Vec3{0.0, 0.0, -1.0}, 1.0, 1000), config_error);

    DipoleParams nodrve;
    nodrve.amp = 0.0;
    CHECK_THROWS_AS(dipole_flip_time(nodrve), no_solution_error);

    DipoleParams ok;
    ok.amp = 0.01;
    CHECK_THAT(dipole_precession_rate(ok), Catch::Matchers::WithinAbs(1.0, 1e-15));
    ok.coupling = 2.0;
    CHECK_THAT(dipole_precession_rate(ok), Catch::Matchers::WithinAbs(0.5, 1e-15));
}
