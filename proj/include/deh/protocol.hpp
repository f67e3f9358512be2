#pragma once

// Protocol machinery: drive envelopes, the stopping-time rule, the
// deterministic-harvest predicate over drive-phase ensembles, and the
// state-swap potential family for multi-level systems.

#include <algorithm>
#include <cmath>
#include <vector>

#include "deh/classical.hpp"
#include "deh/qdyn.hpp"
#include "deh/smallmat.hpp"

namespace deh {

// ---------------------------------------------------------------------------
// Drive envelopes, in rotation-angle units: a constant envelope of size A
// turns the rotating-frame state at rate 2A.

struct Envelope {
    enum class Kind { constant, ramp, beat };

    Kind kind = Kind::constant;
    double amp = 0.0;            // base amplitude A
    double ramp_fraction = 0.0;  // rise and fall fractions of the run, in [0, 0.5)
    double omega1 = 0.0;         // beat component frequencies
    double omega2 = 0.0;

    static Envelope constant(double a) {
        Envelope e;
        e.amp = a;
        return e;
    }
    static Envelope ramp(double a, double fraction) {
        Envelope e;
        e.kind = Kind::ramp;
        e.amp = a;
        e.ramp_fraction = fraction;
        return e;
    }
    static Envelope beat(double a, double w1, double w2) {
        Envelope e;
        e.kind = Kind::beat;
        e.amp = a;
        e.omega1 = w1;
        e.omega2 = w2;
        return e;
    }

    // Instantaneous signed amplitude. Beats keep their sign; the axis of the
    // driven rotation genuinely reverses at an envelope node.
    double amplitude(double t, double t_total) const {
        switch (kind) {
            case Kind::constant:
                return amp;
            case Kind::ramp: {
                if (ramp_fraction <= 0.0) return amp;
                const double rise = ramp_fraction * t_total;
                if (t <= 0.0 || t >= t_total) return 0.0;
                if (t < rise) return amp * t / rise;
                if (t > t_total - rise) return amp * (t_total - t) / rise;
                return amp;
            }
            case Kind::beat:
                return amp * std::cos(0.5 * (omega1 - omega2) * t);
        }
        return amp;
    }

    double carrier() const { return 0.5 * (omega1 + omega2); }
};

inline void validate(const Envelope& e) {
    if (!(e.amp >= 0.0) || !std::isfinite(e.amp))
        throw config_error("envelope amplitude must be a nonnegative number");
    if (e.kind == Envelope::Kind::ramp &&
        !(e.ramp_fraction >= 0.0 && e.ramp_fraction < 0.5))
        throw config_error("ramp fraction must lie in [0, 0.5)");
    if (e.kind == Envelope::Kind::beat &&
        (!std::isfinite(e.omega1) || !std::isfinite(e.omega2)))
        throw config_error("beat frequencies must be finite");
}

namespace detail {
// integral of |cos x| from 0 to u, u >= 0
inline double abs_cos_integral(double u) {
    const double k = std::floor(u / kPi);
    const double rho = u - k * kPi;
    return 2.0 * k + (rho <= kPi / 2.0 ? std::sin(rho) : 2.0 - std::sin(rho));
}
}  // namespace detail

// Accumulated rotation angle int_0^T 2|A(t)| dt, in closed form.
inline double accumulated_angle(const Envelope& e, double t_total) {
    validate(e);
    if (!(t_total >= 0.0)) throw config_error("duration must be nonnegative");
    switch (e.kind) {
        case Envelope::Kind::constant:
            return 2.0 * e.amp * t_total;
        case Envelope::Kind::ramp:
            return 2.0 * e.amp * t_total * (1.0 - e.ramp_fraction);
        case Envelope::Kind::beat: {
            const double half_delta = 0.5 * std::abs(e.omega1 - e.omega2);
            if (half_delta < 1e-300) return 2.0 * e.amp * t_total;
            return 2.0 * e.amp * detail::abs_cos_integral(half_delta * t_total) / half_delta;
        }
    }
    return 0.0;
}

// Smallest T with int_0^T 2|A(t)| dt = pi: the run length after which the
// driven rotation has turned the state by half a revolution. Constant and
// ramp envelopes have closed forms; beats are bisected on the closed-form
// accumulated angle to relative tolerance 1e-10.
inline double stopping_time(const Envelope& e) {
    validate(e);
    if (!(e.amp > 0.0))
        throw no_solution_error("envelope never accumulates the half-turn angle");
    switch (e.kind) {
        case Envelope::Kind::constant:
            return kPi / (2.0 * e.amp);
        case Envelope::Kind::ramp:
            return kPi / (2.0 * e.amp * (1.0 - e.ramp_fraction));
        case Envelope::Kind::beat: {
            double hi = kPi / (2.0 * e.amp);
            while (accumulated_angle(e, hi) < kPi) hi *= 2.0;
            double lo = 0.0;
            while ((hi - lo) > 1e-10 * hi) {
                const double mid = 0.5 * (lo + hi);
                (accumulated_angle(e, mid) < kPi ? lo : hi) = mid;
            }
            return hi;
        }
    }
    throw config_error("unreachable envelope kind");
}

// ---------------------------------------------------------------------------
// The harvest predicate: fixed-duration open-loop run, judged over a
// drive-phase ensemble.

enum class DehSystem { quantum_full, quantum_rwa, classical_dipole };

struct DehThresholds {
    double spread = 0.01;          // max - min of final population over phases
    double min_population = 0.99;  // worst final population over phases
};

struct DehReport {
    double t_final = 0.0;
    double angle_two_a = 0.0;  // int 2|A| dt over the run; pi by construction
    double angle_a = 0.0;      // same integral of |A| alone, for reference
    double min_population = 0.0;
    double max_population = 0.0;
    double mean_population = 0.0;
    double stdev_population = 0.0;
    double population_spread = 0.0;
    double min_delta_e = 0.0;
    double max_delta_e = 0.0;
    double mean_delta_e = 0.0;
    double delta_e_spread = 0.0;
    bool pass = false;
};

namespace detail {
inline DehReport finalize_report(const std::vector<double>& pops,
                                 const std::vector<double>& des, double t_final,
                                 double angle, const DehThresholds& thr) {
    DehReport r;
    r.t_final = t_final;
    r.angle_two_a = angle;
    r.angle_a = 0.5 * angle;
    r.min_population = *std::min_element(pops.begin(), pops.end());
    r.max_population = *std::max_element(pops.begin(), pops.end());
    double acc = 0.0;
    for (double p : pops) acc += p;
    r.mean_population = acc / static_cast<double>(pops.size());
    double var = 0.0;
    for (double p : pops) var += (p - r.mean_population) * (p - r.mean_population);
    r.stdev_population = std::sqrt(var / static_cast<double>(pops.size()));
    r.population_spread = r.max_population - r.min_population;
    r.min_delta_e = *std::min_element(des.begin(), des.end());
    r.max_delta_e = *std::max_element(des.begin(), des.end());
    acc = 0.0;
    for (double d : des) acc += d;
    r.mean_delta_e = acc / static_cast<double>(des.size());
    r.delta_e_spread = r.max_delta_e - r.min_delta_e;
    r.pass = r.population_spread <= thr.spread && r.min_population >= thr.min_population;
    return r;
}
}  // namespace detail

// Quantum run: drive a resonant two-level system with the enveloped source
// for exactly stopping_time(env) and collect ensemble statistics. The
// params' own amplitude is ignored; the envelope carries it.
inline DehReport deh_check(DehSystem system, const QubitParams& base, const Envelope& env,
                           const std::vector<double>& phi_grid,
                           const DehThresholds& thr = {}, int steps_per_period = 200) {
    if (system == DehSystem::classical_dipole)
        throw config_error("classical runs take DipoleParams, not QubitParams");
    validate(base);
    validate(env);
    if (phi_grid.empty()) throw config_error("phase grid must be non-empty");
    if (env.kind == Envelope::Kind::beat &&
        std::abs(env.carrier() - base.omega) > 1e-12 * std::max(1.0, base.omega))
        throw config_error("beat carrier must match the drive frequency");
    if (!on_resonance(base))
        throw resonance_error("the harvest predicate is defined for a resonant carrier");

    const double T = stopping_time(env);
    const double period = 2.0 * kPi / base.omega;

    std::vector<double> pops, des;
    pops.reserve(phi_grid.size());
    des.reserve(phi_grid.size());
    for (double phi : phi_grid) {
        QubitParams p = base;
        p.phase = phi;
        auto h = [&p, &env, T, system](double t) {
            QubitParams q = p;
            q.amp = env.amplitude(t, T);  // signed; a beat node reverses the drive
            return (system == DehSystem::quantum_full) ? h_full(q, t) : h_rwa(q, t);
        };
        const QubitTrace tr = propagate(StateVector::ground(), h, T, steps_per_period, period);
        const double pop = excited_population(tr.final_state());
        pops.push_back(pop);
        des.push_back(base.gap * pop);  // energy stored relative to the ground start
    }
    return detail::finalize_report(pops, des, T, accumulated_angle(env, T), thr);
}

// The envelope, in rotation-angle units, equivalent to a dipole's drive
// field: the co-rotating half of the linear drive turns the moment at
// (coupling scale) * amp, so the angle-unit amplitude is half of that.
inline Envelope dipole_envelope(const DipoleParams& p, Envelope shape) {
    validate(p);
    const double k = (p.kind == DipoleParams::Kind::electric) ? 1.0 / p.coupling : p.coupling;
    shape.amp = 0.5 * std::abs(k) * p.amp;
    return shape;
}

// Classical run: same contract for a precessing dipole. The final alignment
// (1 + L_z/|L|)/2 stands in for the excited population, and the stored
// energy is measured against the static-field precession scale.
inline DehReport deh_check(const DipoleParams& base, const Envelope& env,
                           const std::vector<double>& phi_grid,
                           const DehThresholds& thr = {}, int steps_per_period = 200) {
    validate(base);
    validate(env);
    if (phi_grid.empty()) throw config_error("phase grid must be non-empty");
    const Envelope want = dipole_envelope(base, env);
    if (std::abs(want.amp - env.amp) > 1e-12 * std::max(1.0, want.amp))
        throw config_error("envelope amplitude does not match the dipole drive mapping");
    const double rate = dipole_precession_rate(base);
    if (std::abs(base.omega - rate) > 1e-12 * std::max(1.0, rate))
        throw resonance_error("dipole drive must match the static-field precession rate");

    const double T = stopping_time(env);
    const Vec3 l0{0.0, 0.0, -1.0};  // anti-aligned start, the analog of the ground state

    const double kmag = (base.kind == DipoleParams::Kind::electric) ? std::abs(1.0 / base.coupling)
                                                                    : std::abs(base.coupling);
    const double max_rate =
        kmag * std::sqrt(base.field0 * base.field0 + 4.0 * base.amp * base.amp);
    const int steps = suggested_steps(T, max_rate, steps_per_period);

    std::vector<double> pops, des;
    pops.reserve(phi_grid.size());
    des.reserve(phi_grid.size());
    for (double phi : phi_grid) {
        DipoleParams p = base;
        p.phase = phi;
        const RotationField field{[&p, &env, T](double t) {
            DipoleParams q = p;
            q.amp = p.amp * env.amplitude(t, T) / env.amp;
            return dipole_rotation(q, t);
        }};
        const VecTrace tr = integrate_cross(l0, field, T, steps);
        const double pop = 0.5 * (1.0 + tr.final_point().z / norm(l0));
        pops.push_back(pop);
        // pole-to-pole alignment energy, the analog of gap * population
        des.push_back(2.0 * rate * norm(l0) * pop);
    }
    return detail::finalize_report(pops, des, T, accumulated_angle(env, T), thr);
}

// ---------------------------------------------------------------------------
// Potential family turning a static spectrum into a two-level swap: given
// H0 eigenlevels i -> j, find V so that exp(i(H0 + V) tau) swaps them.

template <int N>
struct VuFamily {
    Matrix<N> h0;
    int i = 0;
    int j = 0;
    double theta = 0.0;
    double theta_tilde = 0.0;
    double tau = 1.0;
    Matrix<N> u;    // the target swap unitary, in the original basis
    Matrix<N> v_u;  // the potential: exp(i(H0 + V_U) tau) = U
    double exp_residual = 0.0;       // |exp(i(H0+V_U) tau) - U|
    double transfer_residual = 0.0;  // |U Pi U^dag - Pj|
};

// Levels are indexed by ascending eigenvalue, 0-based. The swap must move
// population up in energy, E_j > E_i.
template <int N>
VuFamily<N> vu_family(const Matrix<N>& h0m, int i, int j, double theta, double theta_tilde,
                      double tau) {
    if (i == j) throw config_error("swap levels must differ");
    if (i < 0 || j < 0 || i >= N || j >= N) throw config_error("level index out of range");
    if (!(tau > 0.0)) throw config_error("switch duration must be positive");

    const EigResult<N> eig = hermitian_eig(h0m);
    if (!(eig.values[j] > eig.values[i]))
        throw energy_direction_error("target level must sit above the source level");

    // the swap in the eigenbasis
    Matrix<N> ue;
    for (int k = 0; k < N; ++k)
        if (k != i && k != j) ue(k, k) = 1.0;
    ue(j, i) = std::exp(cplx(0.0, theta));
    ue(i, j) = std::exp(cplx(0.0, theta_tilde));

    VuFamily<N> fam;
    fam.h0 = h0m;
    fam.i = i;
    fam.j = j;
    fam.theta = theta;
    fam.theta_tilde = theta_tilde;
    fam.tau = tau;
    fam.u = eig.vectors * ue * eig.vectors.adjoint();

    const Matrix<N> a = unitary_log(fam.u);  // u = exp(i a), a Hermitian
    fam.v_u = cplx(1.0 / tau, 0.0) * a - h0m;

    // exp(i (H0 + V_U) tau) = exp(i a) must recover u
    const Matrix<N> back = mat_exp_i(h0m + fam.v_u, -tau);
    fam.exp_residual = max_abs_diff(back, fam.u);
    if (fam.exp_residual > 1e-9)
        throw numeric_error("potential construction failed to re-exponentiate");

    Matrix<N> pi, pj;
    pi(i, i) = 1.0;
    pj(j, j) = 1.0;
    const Matrix<N> pi_lab = eig.vectors * pi * eig.vectors.adjoint();
    const Matrix<N> pj_lab = eig.vectors * pj * eig.vectors.adjoint();
    fam.transfer_residual = max_abs_diff(fam.u * pi_lab * fam.u.adjoint(), pj_lab);
    if (fam.transfer_residual > 1e-12)
        throw numeric_error("swap does not move the source projector onto the target");

    return fam;
}

}  // namespace deh
