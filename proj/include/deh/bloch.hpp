#pragma once

// Geometric layer: Rabi vectors, the rotating frame, and a norm-preserving
// integrator for dr/dt = Omega(t) x r, shared with the classical dipole.

#include <cmath>
#include <functional>
#include <vector>

#include "deh/qdyn.hpp"
#include "deh/smallmat.hpp"

namespace deh {

// Instantaneous rotation generator of the two-level dynamics: twice the
// traceless Pauli coefficients of the rotating-field Hamiltonian,
//   (2A cos(omega t + phase), -2A sin(omega t + phase), -E).
// The xy part turns clockwise; a +sin y-component would turn against the
// free precession and could never hold a resonant lock.
inline Vec3 rabi_vector(const QubitParams& p, double t) {
    const double th = p.omega * t + p.phase;
    return Vec3{2.0 * p.amp * std::cos(th), -2.0 * p.amp * std::sin(th), -p.gap};
}

// Passive frame change for points on the sphere: rotate by +angle about z.
// The z-axis is a fixed point; angle omega*t freezes the drive's xy turn.
inline Vec3 to_rotating_frame(const Vec3& v, double angle) { return rotate_z(v, angle); }

// The generator seen from the frame rotating with the drive. Unlike a point,
// a generator picks up the frame's own rotation rate, +omega on z:
//   (2A cos(phase), -2A sin(phase), omega - E),
// which lies on the equator exactly at resonance.
inline Vec3 rotating_frame_rabi(const QubitParams& p) {
    return Vec3{2.0 * p.amp * std::cos(p.phase), -2.0 * p.amp * std::sin(p.phase),
                p.omega - p.gap};
}

struct RotationField {
    std::function<Vec3(double)> omega_fn;
};

struct VecTrace {
    std::vector<double> times;
    std::vector<Vec3> points;

    const Vec3& final_point() const { return points.back(); }
};

// Steps for `per_period` samples of every turn at the given rotation rate.
inline int suggested_steps(double t_final, double max_rate, int per_period = 200) {
    const double turns = t_final * std::max(max_rate, 1e-12) / (2.0 * kPi);
    return std::max(per_period, static_cast<int>(std::ceil(per_period * turns)));
}

// Integrates dr/dt = Omega(t) x r (equivalently -r x Omega) by composing
// exact rotations about the midpoint-sampled axis. Norm conservation is
// structural; the drift check only guards against a corrupted field.
inline VecTrace integrate_cross(const Vec3& r0, const RotationField& field, double t_final,
                                int steps) {
    if (!field.omega_fn) throw config_error("rotation field has no generator function");
    if (!(t_final > 0.0)) throw config_error("t_final must be positive");

    // enforce at least 16 steps per turn of the fastest sampled rotation
    double max_rate = 0.0;
    for (int k = 0; k <= 256; ++k) {
        const Vec3 w = field.omega_fn(t_final * k / 256.0);
        max_rate = std::max(max_rate, norm(w));
    }
    const double min_steps = 16.0 * t_final * max_rate / (2.0 * kPi);
    if (static_cast<double>(steps) < min_steps)
        throw config_error("too few steps for the sampled rotation rate");

    const double r0n = norm(r0);
    const double dt = t_final / steps;

    VecTrace out;
    out.times.reserve(static_cast<std::size_t>(steps) + 1);
    out.points.reserve(static_cast<std::size_t>(steps) + 1);
    out.times.push_back(0.0);
    out.points.push_back(r0);

    Vec3 r = r0;
    for (int i = 0; i < steps; ++i) {
        const Vec3 w = field.omega_fn((i + 0.5) * dt);
        const double rate = norm(w);
        if (rate > 0.0) {
            const Vec3 axis{w.x / rate, w.y / rate, w.z / rate};
            r = rotate_about(r, axis, rate * dt);
        }
        out.times.push_back((i + 1) * dt);
        out.points.push_back(r);
        if (std::abs(norm(r) - r0n) > 1e-8)
            throw integration_error("trajectory norm drifted beyond 1e-8");
    }
    return out;
}

}  // namespace deh
