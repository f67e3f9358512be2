#pragma once

// SI-unit energy and power accounting. Every dynamics header works in
// hbar = 1 units; the conversion to joules, volts, and watts happens here
// and nowhere else.

#include <algorithm>
#include <cmath>

#include "deh/qdyn.hpp"
#include "deh/smallmat.hpp"

namespace deh {
namespace consts {

// CODATA 2018. c0, h, and the elementary charge are exact by definition;
// the others are rounded recommended values.
inline constexpr double kSpeedOfLight = 2.99792458e8;            // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kVacuumPermeability = 1.25663706212e-6;  // H/m
inline constexpr double kHbar = 1.054571817e-34;                 // J s
inline constexpr double kPlanck = 6.62607015e-34;                // J s
inline constexpr double kDebye = 3.33564e-30;                    // C m
inline constexpr double kElementaryCharge = 1.602176634e-19;     // C
inline constexpr double kMilliElectronVolt = 1e-3 * kElementaryCharge;  // J

}  // namespace consts

enum class FreqConvention { ordinary, angular };

inline const char* to_string(FreqConvention c) {
    return c == FreqConvention::ordinary ? "ordinary" : "angular";
}

// Plane-wave harvesting scenario. Defaults reproduce the headline estimate:
// solar-scale intensity on a sheet of large molecular dipoles with a 1 meV
// gap, packed one per 400 nm^2.
struct HarvestModel {
    double intensity = 1000.0;                     // W/m^2
    double dipole_moment = 75.0 * consts::kDebye;  // C m
    double gap = consts::kMilliElectronVolt;       // J
    double density = 2.5e15;                       // dipoles per m^2
    FreqConvention convention = FreqConvention::ordinary;
};

inline void validate(const HarvestModel& m) {
    if (!(m.intensity > 0.0)) throw config_error("intensity must be positive");
    if (!(m.dipole_moment > 0.0)) throw config_error("dipole moment must be positive");
    if (!(m.gap > 0.0)) throw config_error("energy gap must be positive");
    if (!(m.density >= 0.0)) throw config_error("areal density must be nonnegative");
}

// Peak field of a plane wave, from I = (1/2) c0 eps0 E0^2.
inline double field_amplitude(double intensity) {
    if (!(intensity >= 0.0)) throw config_error("intensity must be nonnegative");
    return std::sqrt(2.0 * intensity /
                     (consts::kSpeedOfLight * consts::kVacuumPermittivity));
}

// Duration of one resonant flip driven at the plane-wave field peak.
inline double flip_time(const HarvestModel& m) {
    validate(m);
    return kPi * consts::kHbar / (field_amplitude(m.intensity) * m.dipole_moment);
}

// Harvested power per dipole: one gap per flip. The angular convention reads
// gap / flip_time = E0 d (gap/hbar) / pi; the ordinary convention divides by
// 2 pi. Dividing (rather than recomputing with gap/h) keeps the ratio between
// the conventions exactly 2 pi; the CODATA rounding of hbar would otherwise
// shift it by about 6e-10.
inline double power_per_dipole(const HarvestModel& m) {
    const double angular = m.gap / flip_time(m);
    return m.convention == FreqConvention::angular ? angular : angular / (2.0 * kPi);
}

inline double power_per_area(const HarvestModel& m) { return power_per_dipole(m) * m.density; }

// Energy moved into the system between two states, measured by the static
// Hamiltonian: Tr(H0 rhoT) - Tr(H0 rho0).
inline double delta_energy(const Mat2& rho0, const Mat2& rho_t, const Mat2& h_static) {
    require_density(rho0);
    require_density(rho_t);
    require_hermitian(h_static, 1e-12);
    const cplx de = (h_static * (rho_t - rho0)).trace();
    if (std::abs(de.imag()) > 1e-12 * std::max(1.0, std::abs(de.real())))
        throw numeric_error("energy difference has a non-real trace");
    return de.real();
}

}  // namespace deh
