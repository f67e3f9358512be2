// Propagates one resonant flip with the full linear drive and with its
// co-rotating half, printing the excited population side by side.

#include <cstdio>

#include "deh/protocol.hpp"
#include "deh/qdyn.hpp"

int main() {
    using namespace deh;

    QubitParams p;
    p.amp = 0.05;
    const double t_flip = stopping_time(Envelope::constant(p.amp));
    std::printf("amplitude %.2f, solved stop time %.6f\n\n", p.amp, t_flip);

    const QubitTrace full = propagate(StateVector::ground(), p, Model::full, t_flip, 200);
    const QubitTrace rwa = propagate(StateVector::ground(), p, Model::rwa, t_flip, 200);

    std::printf("%10s  %12s  %12s\n", "t", "p_full", "p_rwa");
    const std::size_t stride = full.times.size() / 10;
    for (std::size_t k = 0; k + 1 < full.times.size(); k += stride)
        std::printf("%10.4f  %12.9f  %12.9f\n", full.times[k],
                    excited_population(full.states[k]), excited_population(rwa.states[k]));
    std::printf("%10.4f  %12.9f  %12.9f\n", full.times.back(),
                excited_population(full.final_state()), excited_population(rwa.final_state()));
    return 0;
}
