#pragma once

// Two-level dynamics for the deterministic-harvest protocol: Hamiltonian
// builders, the resonant closed-form propagator, midpoint exponential
// integration, drive-phase ensemble averages, and entropy.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "deh/smallmat.hpp"

namespace deh {

struct QubitParams {
    double gap = 1.0;    // level splitting E (hbar = 1 units)
    double amp = 0.0;    // coupling amplitude A
    double omega = 1.0;  // drive angular frequency
    double phase = 0.0;  // drive phase offset, radians
};

inline void validate(const QubitParams& p) {
    if (!(p.gap > 0.0)) throw config_error("qubit gap must be positive");
    if (!(p.amp >= 0.0)) throw config_error("drive amplitude must be nonnegative");
    if (!(p.omega > 0.0)) throw config_error("drive frequency must be positive");
    if (!std::isfinite(p.phase)) throw config_error("drive phase must be finite");
}

struct StateVector {
    cplx a0{0.0, 0.0};  // amplitude on the lower level
    cplx a1{0.0, 0.0};  // amplitude on the upper level

    static StateVector ground() { return {cplx(1.0, 0.0), cplx(0.0, 0.0)}; }
    static StateVector excited() { return {cplx(0.0, 0.0), cplx(1.0, 0.0)}; }

    double norm() const { return std::sqrt(std::norm(a0) + std::norm(a1)); }
};

inline void require_normalized(const StateVector& psi, double tol = 1e-9) {
    if (std::abs(psi.norm() - 1.0) > tol) throw numeric_error("state vector is not normalized");
}

inline double excited_population(const StateVector& psi) {
    require_normalized(psi);
    return std::norm(psi.a1);
}

inline Mat2 density_of(const StateVector& psi) {
    require_normalized(psi);
    Mat2 rho;
    rho(0, 0) = psi.a0 * std::conj(psi.a0);
    rho(0, 1) = psi.a0 * std::conj(psi.a1);
    rho(1, 0) = psi.a1 * std::conj(psi.a0);
    rho(1, 1) = psi.a1 * std::conj(psi.a1);
    return rho;
}

inline Vec3 bloch_of(const StateVector& psi) {
    const Mat2 rho = density_of(psi);
    return Vec3{2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

inline Vec3 bloch_of(const Mat2& rho) {
    const PauliCoeffs c = pauli_decompose(rho);
    return Vec3{2.0 * c.cx, 2.0 * c.cy, 2.0 * c.cz};
}

// Bare splitting term. The lower level sits at -E/2, so the level gap is E.
inline Mat2 h0(const QubitParams& p) { return cplx(-0.5 * p.gap, 0.0) * pauli_z(); }

// Linearly polarized drive: -(E/2) Z + 2A cos(omega t + phase) X.
inline Mat2 h_full(const QubitParams& p, double t) {
    return h0(p) + cplx(2.0 * p.amp * std::cos(p.omega * t + p.phase), 0.0) * pauli_x();
}

// Co-rotating half of the linear drive. With the lower level at -E/2 the
// rotating component that stays on resonance carries a -sin on Y:
//   -(E/2) Z + A cos(omega t + phase) X - A sin(omega t + phase) Y,
// i.e. off-diagonal A e^{+i(omega t + phase)} coupling the lower level up.
// The +sin choice rotates against the free evolution and never flips.
inline Mat2 h_rwa(const QubitParams& p, double t) {
    const double th = p.omega * t + p.phase;
    return h0(p) + cplx(p.amp * std::cos(th), 0.0) * pauli_x() -
           cplx(p.amp * std::sin(th), 0.0) * pauli_y();
}

inline bool on_resonance(const QubitParams& p, double tol = 1e-12) {
    return std::abs(p.omega - p.gap) <= tol * std::max(1.0, std::abs(p.gap));
}

// Resonant rotating-field propagator,
//   U(t) = cos(At) I - i sin(At) X e^{-i(omega t + phase) Z},
// so U(t)|0> = cos(At)|0> - i e^{-i(omega t + phase)} sin(At)|1>.
// Valid only at omega = gap; detuned runs go through propagate().
inline Mat2 closed_form_propagator(const QubitParams& p, double t) {
    validate(p);
    if (!on_resonance(p))
        throw resonance_error(
            "closed-form propagator requires omega = gap; use numerical propagation when detuned");
    const double c = std::cos(p.amp * t);
    const double s = std::sin(p.amp * t);
    const double th = p.omega * t + p.phase;
    Mat2 u;
    u(0, 0) = c;
    u(1, 1) = c;
    u(0, 1) = cplx(0.0, -s) * std::exp(cplx(0.0, th));
    u(1, 0) = cplx(0.0, -s) * std::exp(cplx(0.0, -th));
    return u;
}

// exp(-i h dt) for Hermitian 2x2 h, in closed form.
inline Mat2 su2_exp(const Mat2& h, double dt) {
    const PauliCoeffs c = pauli_decompose(h);
    const double b = std::sqrt(c.cx * c.cx + c.cy * c.cy + c.cz * c.cz);
    const cplx phase = std::exp(cplx(0.0, -c.ci * dt));
    if (b * std::abs(dt) < 1e-300) return phase * Mat2::identity();
    const double ang = b * dt;
    const cplx sc = cplx(0.0, -std::sin(ang) / b);
    Mat2 u = cplx(std::cos(ang), 0.0) * Mat2::identity() +
             sc * (cplx(c.cx, 0.0) * pauli_x() + cplx(c.cy, 0.0) * pauli_y() +
                   cplx(c.cz, 0.0) * pauli_z());
    return phase * u;
}

struct QubitTrace {
    std::vector<double> times;
    std::vector<StateVector> states;

    const StateVector& final_state() const { return states.back(); }
};

// Integrates i dpsi/dt = h(t) psi by composing midpoint-sampled step
// propagators exp(-i h(t_mid) dt). Each step is exactly unitary, so the
// norm is preserved structurally; the drift check is a safety net.
template <typename HFunc>
QubitTrace propagate(const StateVector& psi0, HFunc&& h, double t_final, int steps_per_period,
                     double drive_period) {
    require_normalized(psi0);
    if (steps_per_period < 16) throw config_error("steps_per_period must be at least 16");
    if (!(t_final > 0.0)) throw config_error("t_final must be positive");
    if (!(drive_period > 0.0)) throw config_error("drive period must be positive");

    const double dt = drive_period / steps_per_period;
    const auto nfull = static_cast<std::size_t>(t_final / dt);

    QubitTrace out;
    out.times.reserve(nfull + 2);
    out.states.reserve(nfull + 2);
    out.times.push_back(0.0);
    out.states.push_back(psi0);

    StateVector psi = psi0;
    double t = 0.0;
    while (t < t_final - 1e-15 * std::max(1.0, t_final)) {
        const double step = std::min(dt, t_final - t);
        const Mat2 u = su2_exp(h(t + 0.5 * step), step);
        const cplx b0 = u(0, 0) * psi.a0 + u(0, 1) * psi.a1;
        const cplx b1 = u(1, 0) * psi.a0 + u(1, 1) * psi.a1;
        psi = StateVector{b0, b1};
        t += step;
        out.times.push_back(t);
        out.states.push_back(psi);
        if (std::abs(psi.norm() - 1.0) > 1e-6)
            throw integration_error("state norm drifted beyond 1e-6; reduce the step size");
    }
    return out;
}

enum class Model { full, rwa };

inline QubitTrace propagate(const StateVector& psi0, const QubitParams& p, Model model,
                            double t_final, int steps_per_period) {
    validate(p);
    const double period = 2.0 * kPi / p.omega;
    if (model == Model::full)
        return propagate(psi0, [&p](double t) { return h_full(p, t); }, t_final, steps_per_period,
                         period);
    return propagate(psi0, [&p](double t) { return h_rwa(p, t); }, t_final, steps_per_period,
                     period);
}

// Drive-phase ensemble average of the resonantly driven state, closed form:
// diag(cos^2(At), sin^2(At)). The phase-dependent coherences integrate away.
inline Mat2 phi_averaged_state(const QubitParams& p, double t) {
    validate(p);
    if (!on_resonance(p)) throw resonance_error("phase-averaged state uses the resonant closed form");
    const double c2 = std::cos(p.amp * t) * std::cos(p.amp * t);
    Mat2 rho;
    rho(0, 0) = c2;
    rho(1, 1) = 1.0 - c2;
    return rho;
}

// Cross-check: same average over a uniform n-point phase grid.
inline Mat2 phi_averaged_state_sampled(const QubitParams& p, double t, int n = 64) {
    if (n < 2) throw config_error("phase grid needs at least 2 points");
    Mat2 acc;
    for (int k = 0; k < n; ++k) {
        QubitParams q = p;
        q.phase = 2.0 * kPi * k / n;
        const Mat2 u = closed_form_propagator(q, t);
        Mat2 rho;
        rho(0, 0) = 1.0;
        acc = acc + u * rho * u.adjoint();
    }
    return cplx(1.0 / n, 0.0) * acc;
}

inline void require_density(const Mat2& rho) {
    if (hermiticity_defect(rho) > 1e-12) throw hermiticity_error("density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
        throw numeric_error("density matrix trace is not 1");
    const EigResult<2> e = hermitian_eig(rho);
    if (e.values[0] < -1e-10) throw numeric_error("density matrix has a negative eigenvalue");
}

// Von Neumann entropy in bits.
inline double von_neumann_entropy(const Mat2& rho) {
    require_density(rho);
    const EigResult<2> e = hermitian_eig(rho);
    double s = 0.0;
    for (double lam : e.values) {
        if (lam <= 0.0) continue;
        s -= lam * std::log2(lam);
    }
    return std::max(0.0, s);
}

}  // namespace deh
