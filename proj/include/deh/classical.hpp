#pragma once

// Classical counterparts: the driven harmonic oscillator with its
// phase-sensitivity certificates, and rigid dipole precession (electric,
// magnetic, and zero-damping LLG) through the shared rotation engine.

#include <cmath>
#include <limits>
#include <vector>

#include "deh/bloch.hpp"
#include "deh/smallmat.hpp"

namespace deh {

// ---------------------------------------------------------------------------
// Driven harmonic oscillator  m q'' + k q = F0 cos(omega t + phase)

struct OscillatorParams {
    double mass = 1.0;      // m > 0
    double spring_k = 1.0;  // k > 0; natural frequency omega0 = sqrt(k/m)
    double f0 = 0.0;        // drive force amplitude
    double omega = 1.0;     // drive angular frequency
    double phase = 0.0;     // drive phase
    double alpha = 0.0;     // initial position q(0)
    double beta = 0.0;      // initial velocity q'(0)

    double omega0() const { return std::sqrt(spring_k / mass); }
};

inline void validate(const OscillatorParams& p) {
    if (!(p.mass > 0.0)) throw config_error("oscillator mass must be positive");
    if (!(p.spring_k > 0.0)) throw config_error("spring constant must be positive");
    if (!(p.omega > 0.0)) throw config_error("drive frequency must be positive");
    if (!std::isfinite(p.f0) || !std::isfinite(p.phase) || !std::isfinite(p.alpha) ||
        !std::isfinite(p.beta))
        throw config_error("oscillator parameters must be finite");
}

struct OscState {
    double q = 0.0;
    double qdot = 0.0;
};

struct PhaseSensitivity {
    double dq_dphi = 0.0;
    double dqdot_dphi = 0.0;
};

enum class OscRegime { resonant, off_resonant, near_resonant };

// Exactly resonant drives get the secular closed form; clearly detuned ones
// the two-frequency closed form. In between, 1/(omega0^2 - omega^2) is too
// ill-conditioned for the closed form and the ODE is integrated directly.
inline OscRegime oscillator_regime(const OscillatorParams& p) {
    const double w0 = p.omega0();
    const double gap = std::abs(p.omega - w0);
    if (gap <= 1e-12 * std::max(1.0, w0)) return OscRegime::resonant;
    if (gap <= 1e-6 * std::max(1.0, w0)) return OscRegime::near_resonant;
    return OscRegime::off_resonant;
}

// Fixed-step RK4 for m q'' + k q = F0 cos(omega t + phase). Serves as the
// independent oracle in tests and as the near-resonance fallback.
inline OscState oscillator_integrate(const OscillatorParams& p, double t_final, int steps = 0) {
    validate(p);
    if (steps <= 0) {
        const double fastest = std::max(p.omega, p.omega0());
        steps = std::max(1000, static_cast<int>(std::ceil(
                                   1000.0 * std::abs(t_final) * fastest / (2.0 * kPi))));
    }
    const double h = t_final / steps;
    auto acc = [&p](double t, double q) {
        return (p.f0 * std::cos(p.omega * t + p.phase) - p.spring_k * q) / p.mass;
    };
    double q = p.alpha, v = p.beta, t = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double k1q = v, k1v = acc(t, q);
        const double k2q = v + 0.5 * h * k1v, k2v = acc(t + 0.5 * h, q + 0.5 * h * k1q);
        const double k3q = v + 0.5 * h * k2v, k3v = acc(t + 0.5 * h, q + 0.5 * h * k2q);
        const double k4q = v + h * k3v, k4v = acc(t + h, q + h * k3q);
        q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        t += h;
    }
    return {q, v};
}

// Resonant closed form: homogeneous motion plus the secular t sin(omega t +
// phase) response whose amplitude grows without bound.
inline OscState resonant_closed_form(const OscillatorParams& p, double t) {
    const double w = p.omega;
    const double g = p.f0 / (2.0 * p.mass * w);
    const double cw = std::cos(w * t), sw = std::sin(w * t);
    const double th = w * t + p.phase;
    OscState s;
    s.q = p.alpha * cw + (p.beta / w - g * std::sin(p.phase) / w) * sw + g * t * std::sin(th);
    s.qdot = -p.alpha * w * sw + (p.beta - g * std::sin(p.phase)) * cw +
             g * (std::sin(th) + w * t * std::cos(th));
    return s;
}

// Off-resonant closed form. The drive contributes the particular response
// C cos(omega t + phase) minus the homogeneous motion that cancels its
// initial value and slope, with C = F0 / (m (omega0^2 - omega^2)).
inline OscState offresonant_closed_form(const OscillatorParams& p, double t) {
    const double w = p.omega, w0 = p.omega0();
    const double c = p.f0 / (p.mass * (w0 * w0 - w * w));
    const double cw = std::cos(w * t), sw = std::sin(w * t);
    const double c0 = std::cos(w0 * t), s0 = std::sin(w0 * t);
    const double cp = std::cos(p.phase), sp = std::sin(p.phase);
    OscState s;
    s.q = p.alpha * c0 + (p.beta / w0) * s0 + c * cp * (cw - c0) + c * sp * ((w / w0) * s0 - sw);
    s.qdot = -p.alpha * w0 * s0 + p.beta * c0 + c * cp * (-w * sw + w0 * s0) +
             c * w * sp * (c0 - cw);
    return s;
}

inline OscState oscillator_state(const OscillatorParams& p, double t) {
    validate(p);
    switch (oscillator_regime(p)) {
        case OscRegime::resonant:
            return resonant_closed_form(p, t);
        case OscRegime::off_resonant:
            return offresonant_closed_form(p, t);
        case OscRegime::near_resonant:
            return oscillator_integrate(p, t);
    }
    throw config_error("unreachable oscillator regime");
}

// Routing entry points: each handles its own regime and hands anything else
// to the dispatcher above.
inline OscState resonant_trajectory(const OscillatorParams& p, double t) {
    validate(p);
    if (oscillator_regime(p) == OscRegime::resonant) return resonant_closed_form(p, t);
    return oscillator_state(p, t);
}

inline OscState offresonant_trajectory(const OscillatorParams& p, double t) {
    validate(p);
    if (oscillator_regime(p) == OscRegime::off_resonant) return offresonant_closed_form(p, t);
    return oscillator_state(p, t);
}

// Analytic d/dphase of the trajectory. The near-resonant band falls back to
// central differences of the integrated trajectory.
inline PhaseSensitivity phase_sensitivity(const OscillatorParams& p, double t) {
    validate(p);
    const OscRegime regime = oscillator_regime(p);
    if (regime == OscRegime::resonant) {
        const double w = p.omega;
        const double g = p.f0 / (2.0 * p.mass * w);
        const double th = w * t + p.phase;
        PhaseSensitivity d;
        d.dq_dphi = -(g / w) * std::cos(p.phase) * std::sin(w * t) + g * t * std::cos(th);
        d.dqdot_dphi = -g * std::cos(p.phase) * std::cos(w * t) +
                       g * (std::cos(th) - w * t * std::sin(th));
        return d;
    }
    if (regime == OscRegime::off_resonant) {
        const double w = p.omega, w0 = p.omega0();
        const double c = p.f0 / (p.mass * (w0 * w0 - w * w));
        const double cw = std::cos(w * t), sw = std::sin(w * t);
        const double c0 = std::cos(w0 * t), s0 = std::sin(w0 * t);
        const double cp = std::cos(p.phase), sp = std::sin(p.phase);
        PhaseSensitivity d;
        d.dq_dphi = -c * sp * (cw - c0) + c * cp * ((w / w0) * s0 - sw);
        d.dqdot_dphi = -c * sp * (-w * sw + w0 * s0) + c * w * cp * (c0 - cw);
        return d;
    }
    const double h = 1e-6;
    OscillatorParams hi = p, lo = p;
    hi.phase += h;
    lo.phase -= h;
    const OscState a = oscillator_integrate(hi, t);
    const OscState b = oscillator_integrate(lo, t);
    return {(a.q - b.q) / (2.0 * h), (a.qdot - b.qdot) / (2.0 * h)};
}

inline double oscillator_energy(const OscillatorParams& p, const OscState& s) {
    return 0.5 * p.spring_k * s.q * s.q + 0.5 * p.mass * s.qdot * s.qdot;
}

// ---------------------------------------------------------------------------
// Phase-sensitivity certificate: the oscillator cannot run the protocol.

struct FailureReport {
    std::vector<double> t_grid;
    std::vector<double> max_abs_dq_dphi;     // per stopping time, worst phase
    std::vector<double> max_abs_dqdot_dphi;  // per stopping time, worst phase
    double min_position_sensitivity = 0.0;   // smallest entry of the first list
    double min_state_sensitivity = 0.0;      // smallest max(|dq|,|dqdot|) entry
    int constrained_times = 0;               // grid times meeting the return conditions
    double max_abs_delta_e = 0.0;            // worst |E(T)-E(0)| at those times
};

// The special stopping times where the off-resonant motion returns to its
// start: both angles at a multiple of 2 pi with equal cosine sign.
inline bool phase_independence_constraints_hold(const OscillatorParams& p, double t,
                                                double tol = 1e-9) {
    const double w0 = p.omega0();
    const double s1 = std::sin(p.omega * t), s0 = std::sin(w0 * t);
    const double c1 = std::cos(p.omega * t), c0 = std::cos(w0 * t);
    return std::abs(s1) <= tol && std::abs(s0) <= tol && std::abs(std::abs(c1) - 1.0) <= tol &&
           std::abs(c1 - c0) <= tol;
}

inline FailureReport deh_failure_certificate(const OscillatorParams& p,
                                             const std::vector<double>& t_grid,
                                             const std::vector<double>& phi_grid) {
    validate(p);
    if (t_grid.empty() || phi_grid.empty())
        throw config_error("certificate needs non-empty time and phase grids");

    FailureReport rep;
    rep.t_grid = t_grid;
    rep.min_position_sensitivity = std::numeric_limits<double>::infinity();
    rep.min_state_sensitivity = std::numeric_limits<double>::infinity();

    for (double t : t_grid) {
        double mq = 0.0, mv = 0.0;
        for (double phi : phi_grid) {
            OscillatorParams q = p;
            q.phase = phi;
            const PhaseSensitivity d = phase_sensitivity(q, t);
            mq = std::max(mq, std::abs(d.dq_dphi));
            mv = std::max(mv, std::abs(d.dqdot_dphi));
        }
        rep.max_abs_dq_dphi.push_back(mq);
        rep.max_abs_dqdot_dphi.push_back(mv);
        rep.min_position_sensitivity = std::min(rep.min_position_sensitivity, mq);
        rep.min_state_sensitivity = std::min(rep.min_state_sensitivity, std::max(mq, mv));

        // Return-to-start certification only makes sense off resonance; the
        // resonant secular term meets the angle conditions yet pumps energy.
        if (oscillator_regime(p) == OscRegime::off_resonant &&
            phase_independence_constraints_hold(p, t)) {
            ++rep.constrained_times;
            for (double phi : phi_grid) {
                OscillatorParams q = p;
                q.phase = phi;
                const double e0 = oscillator_energy(q, oscillator_state(q, 0.0));
                const double eT = oscillator_energy(q, oscillator_state(q, t));
                rep.max_abs_delta_e = std::max(rep.max_abs_delta_e, std::abs(eT - e0));
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Rigid dipole precession, three physically equivalent couplings.

struct DipoleParams {
    enum class Kind { electric, magnetic, llg };

    Kind kind = Kind::electric;
    double coupling = 1.0;  // alpha_d (L = alpha_d * moment), beta_m (mu = beta_m L), or gamma
    double field0 = 1.0;    // static field component along +z
    double amp = 0.0;       // drive field is 2*amp*cos(omega t + phase) along x
    double omega = 1.0;     // drive angular frequency
    double phase = 0.0;     // drive phase
    double inertia = 1.0;   // moment of inertia; the L/I term drops out of L x L
    double damping = 0.0;   // only 0 is supported
};

inline void validate(const DipoleParams& p) {
    if (p.coupling == 0.0) throw config_error("dipole coupling must be nonzero");
    if (!(p.inertia > 0.0)) throw config_error("moment of inertia must be positive");
    if (!(p.omega > 0.0)) throw config_error("drive frequency must be positive");
    if (!std::isfinite(p.field0) || !std::isfinite(p.amp) || !std::isfinite(p.phase))
        throw config_error("dipole parameters must be finite");
    if (p.damping != 0.0)
        throw unsupported_error("damped dipole dynamics is not supported; set damping to 0");
}

inline Vec3 dipole_field(const DipoleParams& p, double t) {
    return Vec3{2.0 * p.amp * std::cos(p.omega * t + p.phase), 0.0, p.field0};
}

// The angular-momentum rotation generator for each coupling:
//   electric  dL/dt = -(1/alpha_d) E x L,
//   magnetic  dL/dt = beta_m L x B = -beta_m B x L,
//   LLG       dr/dt = -gamma r x B = +gamma B x r.
inline Vec3 dipole_rotation(const DipoleParams& p, double t) {
    const Vec3 f = dipole_field(p, t);
    double k = 0.0;
    switch (p.kind) {
        case DipoleParams::Kind::electric:
            k = -1.0 / p.coupling;
            break;
        case DipoleParams::Kind::magnetic:
            k = -p.coupling;
            break;
        case DipoleParams::Kind::llg:
            k = p.coupling;
            break;
    }
    return Vec3{k * f.x, k * f.y, k * f.z};
}

// Magnitude of the precession rate set by the static field; drive resonance
// means omega equals this rate.
inline double dipole_precession_rate(const DipoleParams& p) {
    const double k = (p.kind == DipoleParams::Kind::electric) ? 1.0 / p.coupling : p.coupling;
    return std::abs(k * p.field0);
}

// Time for the co-rotating half of the linear drive to turn the moment by
// pi: the drive peak 2*amp splits into counter-rotating halves of size amp,
// scaled by the same coupling constant as the precession.
inline double dipole_flip_time(const DipoleParams& p) {
    validate(p);
    if (!(p.amp > 0.0)) throw no_solution_error("flip time requires a positive drive amplitude");
    const double k = (p.kind == DipoleParams::Kind::electric) ? 1.0 / p.coupling : p.coupling;
    return kPi / std::abs(k * p.amp);
}

inline VecTrace integrate_dipole(const DipoleParams& p, const Vec3& l0, double t_final,
                                 int steps) {
    validate(p);
    const RotationField field{[p](double t) { return dipole_rotation(p, t); }};
    return integrate_cross(l0, field, t_final, steps);
}

}  // namespace deh
