#pragma once

// Deterministic parameter sweeps: final excited population under the full
// linearly polarized drive, on a cartesian grid of drive parameters and
// deviation factors. Cells are independent; results land in preassigned row
// slots, so the emitted table is identical however many workers run.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "deh/emit.hpp"
#include "deh/protocol.hpp"
#include "deh/qdyn.hpp"

namespace deh {

// One sweep dimension. Known names:
//   A              base drive amplitude
//   phi            drive phase; replaces the phase ensemble with one run per value
//   dA             amplitude deviation factor: the drive runs at dA*A
//   dT             stop-time deviation factor: the run lasts dT*T
//   dw             frequency deviation factor: the drive runs at dw*omega
//   ramp_fraction  envelope ramp fraction, with the stopping time re-solved
// Deviations never re-solve the stopping time: T always comes from the
// nominal amplitude, so dA and dw measure robustness against drift the
// protocol does not know about.
struct Axis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int count = 0;
};

inline const std::vector<std::string>& axis_names() {
    static const std::vector<std::string> names = {"A",  "phi", "dA",
                                                   "dT", "dw",  "ramp_fraction"};
    return names;
}

inline void validate(const Axis& ax) {
    bool known = false;
    for (const auto& n : axis_names()) known = known || n == ax.name;
    if (!known) throw config_error("unknown sweep axis: " + ax.name);
    if (ax.count < 1) throw config_error("sweep axis " + ax.name + " is empty");
    if (!std::isfinite(ax.min) || !std::isfinite(ax.max))
        throw config_error("sweep axis " + ax.name + " has non-finite bounds");
    if (ax.max < ax.min)
        throw config_error("sweep axis " + ax.name + " needs min <= max");
}

inline std::vector<double> axis_values(const Axis& ax) {
    validate(ax);
    std::vector<double> v(ax.count);
    v[0] = ax.min;
    for (int k = 1; k < ax.count; ++k)
        v[k] = ax.min + (ax.max - ax.min) * k / (ax.count - 1);
    return v;
}

struct SweepConfig {
    QubitParams base;                          // nominal gap, amplitude, frequency, phase
    Envelope envelope = Envelope::constant(0.0);  // shape only; amplitude comes from A
    std::vector<Axis> axes;
    int phi_points = 64;        // ensemble size when phi is not an axis
    int steps_per_period = 200;
    int jobs = 1;
    bool sampled_phi = false;   // draw the ensemble uniformly instead of evenly
    std::uint64_t seed = 0;     // for sampled_phi
};

namespace detail {

struct CellParams {
    double a;
    double phi;
    double da = 1.0;
    double dt = 1.0;
    double dw = 1.0;
    double rfrac = 0.0;
    bool use_ramp = false;
    bool phi_is_axis = false;
};

inline double cell_population(const SweepConfig& cfg, const CellParams& c, double phi) {
    QubitParams run = cfg.base;
    run.omega = c.dw * cfg.base.omega;
    run.phase = phi;

    Envelope nominal = cfg.envelope;
    nominal.amp = c.a;
    if (c.use_ramp) nominal = Envelope::ramp(c.a, c.rfrac);
    const double t_run = c.dt * stopping_time(nominal);

    Envelope driven = nominal;
    driven.amp = c.da * c.a;
    auto h = [&run, &driven, t_run](double t) {
        QubitParams q = run;
        q.amp = driven.amplitude(t, t_run);
        return h_full(q, t);
    };
    const double period = 2.0 * kPi / run.omega;
    const QubitTrace tr =
        propagate(StateVector::ground(), h, t_run, cfg.steps_per_period, period);
    return excited_population(tr.final_state());
}

}  // namespace detail

inline Table run_sweep(const SweepConfig& cfg) {
    validate(cfg.base);
    validate(cfg.envelope);
    if (cfg.axes.empty()) throw config_error("sweep needs at least one axis");
    if (cfg.phi_points < 1) throw config_error("phase ensemble must be non-empty");
    if (cfg.jobs < 1) throw config_error("jobs must be at least 1");

    std::vector<std::vector<double>> grid;
    bool phi_is_axis = false;
    for (std::size_t k = 0; k < cfg.axes.size(); ++k) {
        grid.push_back(axis_values(cfg.axes[k]));
        for (std::size_t m = 0; m < k; ++m)
            if (cfg.axes[m].name == cfg.axes[k].name)
                throw config_error("duplicate sweep axis: " + cfg.axes[k].name);
        phi_is_axis = phi_is_axis || cfg.axes[k].name == "phi";
    }

    std::vector<double> ensemble;
    if (!phi_is_axis) {
        ensemble.resize(cfg.phi_points);
        if (cfg.sampled_phi) {
            std::mt19937_64 rng(cfg.seed);
            std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
            for (double& p : ensemble) p = u(rng);
        } else {
            for (int k = 0; k < cfg.phi_points; ++k)
                ensemble[k] = 2.0 * kPi * k / cfg.phi_points;
        }
    }

    std::size_t total = 1;
    for (const auto& v : grid) total *= v.size();

    Table table;
    for (const auto& ax : cfg.axes) table.columns.push_back(ax.name);
    for (const char* stat : {"min_pop", "mean_pop", "max_pop", "spread", "delta_e_mean"})
        table.columns.emplace_back(stat);
    table.rows.resize(total);

    auto compute_cell = [&](std::size_t idx) {
        detail::CellParams c;
        c.a = cfg.base.amp;
        c.phi = cfg.base.phase;
        c.phi_is_axis = phi_is_axis;
        if (cfg.envelope.kind == Envelope::Kind::ramp) {
            c.use_ramp = true;
            c.rfrac = cfg.envelope.ramp_fraction;
        }

        // decode the cell index, last axis fastest
        std::vector<std::size_t> at(grid.size());
        std::size_t rem = idx;
        for (std::size_t k = grid.size(); k-- > 0;) {
            at[k] = rem % grid[k].size();
            rem /= grid[k].size();
        }

        std::vector<double> row;
        row.reserve(table.columns.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double v = grid[k][at[k]];
            row.push_back(v);
            const std::string& name = cfg.axes[k].name;
            if (name == "A") c.a = v;
            else if (name == "phi") c.phi = v;
            else if (name == "dA") c.da = v;
            else if (name == "dT") c.dt = v;
            else if (name == "dw") c.dw = v;
            else {  // ramp_fraction
                c.use_ramp = true;
                c.rfrac = v;
            }
        }

        double mn = 1.0, mx = 0.0, sum = 0.0;
        if (phi_is_axis) {
            mn = mx = sum = detail::cell_population(cfg, c, c.phi);
        } else {
            for (double phi : ensemble) {
                const double p = detail::cell_population(cfg, c, phi);
                mn = std::min(mn, p);
                mx = std::max(mx, p);
                sum += p;
            }
            sum /= static_cast<double>(ensemble.size());
        }
        row.push_back(mn);
        row.push_back(sum);
        row.push_back(mx);
        row.push_back(mx - mn);
        row.push_back(cfg.base.gap * sum);
        table.rows[idx] = std::move(row);
    };

    if (cfg.jobs == 1 || total == 1) {
        for (std::size_t i = 0; i < total; ++i) compute_cell(i);
        return table;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        try {
            for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
                compute_cell(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            next.store(total);  // drain the remaining work
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n_workers = std::min<std::size_t>(cfg.jobs, total);
    pool.reserve(n_workers);
    for (std::size_t k = 0; k < n_workers; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return table;
}

}  // namespace deh
