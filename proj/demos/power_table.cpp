// Harvested-power estimates for a sheet of driven dipoles at a few wave
// intensities, in the ordinary frequency convention.

#include <cstdio>

#include "deh/harvest.hpp"

int main() {
    using namespace deh;

    HarvestModel m;  // 75 debye dipoles with a 1 meV gap, 2.5e15 per m^2
    std::printf("%14s %16s %14s %16s %14s\n", "I (W/m^2)", "field (V/m)", "flip (s)",
                "P/dipole (W)", "P/area (W/m^2)");
    for (const double intensity : {1.0, 100.0, 1000.0, 1e5}) {
        m.intensity = intensity;
        std::printf("%14.3e %16.6e %14.6e %16.6e %14.6f\n", intensity,
                    field_amplitude(intensity), flip_time(m), power_per_dipole(m),
                    power_per_area(m));
    }
    return 0;
}
