// Command-line front end: single drive runs, robustness sweeps, classical
// comparisons, entropy traces, level-swap potentials, and power estimates.
// Every command emits a self-describing table (CSV or JSON) whose header
// echoes the resolved configuration.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "deh/classical.hpp"
#include "deh/emit.hpp"
#include "deh/harvest.hpp"
#include "deh/protocol.hpp"
#include "deh/qdyn.hpp"
#include "deh/sweep.hpp"

namespace {

using namespace deh;

constexpr const char* kToolVersion = "0.1.0";

// strict numeric parsing for composite values like ramp:0.2 or axis bounds
double to_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw config_error("not a number: '" + s + "'");
    return v;
}

int to_count(const std::string& s) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size())
        throw config_error("not an integer: '" + s + "'");
    return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t at = s.find(sep, start);
        if (at == std::string::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, at - start));
        start = at + 1;
    }
}

Envelope parse_envelope(const std::string& text, double amp) {
    if (text == "const") return Envelope::constant(amp);
    if (text.rfind("ramp:", 0) == 0) return Envelope::ramp(amp, to_double(text.substr(5)));
    if (text.rfind("beat:", 0) == 0) {
        const auto parts = split(text.substr(5), ',');
        if (parts.size() != 2)
            throw config_error("beat envelope needs two frequencies: beat:<w1>,<w2>");
        return Envelope::beat(amp, to_double(parts[0]), to_double(parts[1]));
    }
    throw config_error("envelope must be const, ramp:<fraction>, or beat:<w1>,<w2>, got '" +
                       text + "'");
}

Axis parse_axis(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 4)
        throw config_error("axis must be <name>:<min>:<max>:<count>, got '" + text + "'");
    Axis ax;
    ax.name = parts[0];
    ax.min = to_double(parts[1]);
    ax.max = to_double(parts[2]);
    ax.count = to_count(parts[3]);
    validate(ax);
    return ax;
}

std::string fmt_cfg(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Flat key=value config file, keys mirroring the long flag names of the
// chosen subcommand. Blank lines and #/; comments are skipped.
std::vector<std::pair<std::string, std::string>> read_flat_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config file: " + path);
    const auto trim = [](const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    std::vector<std::pair<std::string, std::string>> items;
    std::string line;
    while (std::getline(in, line)) {
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        const auto at = text.find('=');
        if (at == std::string::npos)
            throw config_error("config line is not key=value: '" + text + "'");
        const std::string key = trim(text.substr(0, at));
        std::string value = trim(text.substr(at + 1));
        if (key.empty()) throw config_error("config line has an empty key: '" + text + "'");
        if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                                  (value.front() == '\'' && value.back() == '\'')))
            value = value.substr(1, value.size() - 2);
        items.emplace_back(key, value);
    }
    return items;
}

// Splice config-file entries into the argument list as --key=value tokens,
// right after the subcommand name. Keys already given on the command line
// are skipped, so flags override file values; keys the subcommand does not
// know are rejected by the regular argument parser.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> args;
    std::string config_path;
    bool have_config = false;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) {
            config_path = argv[++i];
            have_config = true;
        } else if (a.rfind("--config=", 0) == 0) {
            config_path = a.substr(9);
            have_config = true;
        } else {
            args.push_back(a);
        }
    }
    if (!have_config || args.empty()) return args;

    const auto given = [&args](const std::string& key) {
        const std::string flag = "--" + key;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    std::vector<std::string> merged;
    merged.push_back(args.front());
    for (const auto& [key, value] : read_flat_config(config_path))
        if (!given(key)) merged.push_back("--" + key + "=" + value);
    merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

struct OutputOpts {
    std::string format = "csv";
    std::string out;
    bool show_config = false;
};

void add_output_flags(CLI::App* cmd, OutputOpts& o) {
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "Output file path (default: stdout)");
    cmd->add_flag("--show-config", o.show_config,
                  "Print the resolved configuration instead of running");
}

// true when --show-config replaced the run
bool show_and_skip(const Table& t, const OutputOpts& o) {
    if (!o.show_config) return false;
    for (const auto& [key, value] : t.config) std::printf("%s = %s\n", key.c_str(), value.c_str());
    return true;
}

void deliver(const Table& t, const OutputOpts& o) {
    const std::string text = o.format == "json" ? emit_json(t) : emit_csv(t);
    if (o.out.empty())
        std::fwrite(text.data(), 1, text.size(), stdout);
    else
        write_file(o.out, text);
}

// ---------------------------------------------------------------------------
// simulate: one drive run, emitted as a time trace

struct SimulateOpts {
    double gap = 1.0;
    double amp = 0.05;
    double omega = 1.0;
    double phase = 0.0;
    std::string t_final = "auto";
    std::string envelope = "const";
    std::string model = "full";
    int spp = 200;
    OutputOpts out;
};

void run_simulate(const SimulateOpts& o) {
    QubitParams p;
    p.gap = o.gap;
    p.amp = o.amp;
    p.omega = o.omega;
    p.phase = o.phase;
    validate(p);
    const Envelope env = parse_envelope(o.envelope, o.amp);
    const double t_final = o.t_final == "auto" ? stopping_time(env) : to_double(o.t_final);

    Table t;
    t.config = {{"command", "simulate"},
                {"tool_version", kToolVersion},
                {"gap", fmt_cfg(o.gap)},
                {"amp", fmt_cfg(o.amp)},
                {"omega", fmt_cfg(o.omega)},
                {"phase", fmt_cfg(o.phase)},
                {"envelope", o.envelope},
                {"t_final", fmt_cfg(t_final)},
                {"steps_per_period", std::to_string(o.spp)},
                {"model", o.model}};
    t.columns = {"t", "p_excited"};
    if (show_and_skip(t, o.out)) return;

    auto h = [&p, &env, t_final, &o](double time) {
        QubitParams q = p;
        q.amp = env.amplitude(time, t_final);
        return o.model == "rwa" ? h_rwa(q, time) : h_full(q, time);
    };
    const QubitTrace tr =
        propagate(StateVector::ground(), h, t_final, o.spp, 2.0 * kPi / p.omega);
    t.rows.reserve(tr.times.size());
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        t.rows.push_back({tr.times[i], excited_population(tr.states[i])});
    deliver(t, o.out);
}

// ---------------------------------------------------------------------------
// sweep: population statistics over a parameter grid

struct SweepOpts {
    double gap = 1.0;
    double amp = 0.05;
    double omega = 1.0;
    double phase = 0.0;
    std::vector<std::string> axes;
    std::string envelope = "const";
    std::string phi_mode = "grid";
    int phi_grid = 64;
    int spp = 200;
    int jobs = 1;
    std::uint64_t seed = 0;
    OutputOpts out;
};

void run_sweep_cmd(const SweepOpts& o) {
    SweepConfig cfg;
    cfg.base.gap = o.gap;
    cfg.base.amp = o.amp;
    cfg.base.omega = o.omega;
    cfg.base.phase = o.phase;
    cfg.envelope = parse_envelope(o.envelope, o.amp);
    for (const auto& s : o.axes) cfg.axes.push_back(parse_axis(s));
    cfg.phi_points = o.phi_grid;
    cfg.steps_per_period = o.spp;
    cfg.jobs = o.jobs;
    cfg.sampled_phi = o.phi_mode == "sampled";
    cfg.seed = o.seed;

    std::string axes_echo;
    for (const auto& s : o.axes) {
        if (!axes_echo.empty()) axes_echo += ' ';
        axes_echo += s;
    }
    // the worker count is deliberately not echoed: outputs must be
    // byte-identical however the cells were scheduled
    Table header;
    header.config = {{"command", "sweep"},
                     {"tool_version", kToolVersion},
                     {"gap", fmt_cfg(o.gap)},
                     {"amp", fmt_cfg(o.amp)},
                     {"omega", fmt_cfg(o.omega)},
                     {"phase", fmt_cfg(o.phase)},
                     {"envelope", o.envelope},
                     {"axes", axes_echo},
                     {"phi_mode", o.phi_mode},
                     {"phi_grid", std::to_string(o.phi_grid)},
                     {"seed", std::to_string(o.seed)},
                     {"steps_per_period", std::to_string(o.spp)}};
    if (show_and_skip(header, o.out)) return;

    Table t = run_sweep(cfg);
    t.config = header.config;
    deliver(t, o.out);
}

// ---------------------------------------------------------------------------
// classical: oscillator or dipole traces

struct ClassicalOpts {
    std::string system = "oscillator";
    double mass = 1.0;
    double spring_k = 1.0;
    double f0 = 1.0;
    double omega = 1.0;
    double phase = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::string kind = "electric";
    double coupling = 1.0;
    double field0 = 1.0;
    double amp = 0.01;
    std::string t_final = "auto";
    int points = 501;
    int spp = 200;
    OutputOpts out;
};

void run_classical_oscillator(const ClassicalOpts& o) {
    OscillatorParams p;
    p.mass = o.mass;
    p.spring_k = o.spring_k;
    p.f0 = o.f0;
    p.omega = o.omega;
    p.phase = o.phase;
    p.alpha = o.alpha;
    p.beta = o.beta;
    validate(p);
    if (o.t_final == "auto")
        throw config_error("oscillator runs need a numeric --t-final");
    const double t_final = to_double(o.t_final);
    if (!(t_final > 0.0)) throw config_error("t_final must be positive");
    if (o.points < 2) throw config_error("points must be at least 2");

    Table t;
    t.config = {{"command", "classical"},
                {"tool_version", kToolVersion}, {"system", "oscillator"},
                {"mass", fmt_cfg(o.mass)},  {"spring_k", fmt_cfg(o.spring_k)},
                {"f0", fmt_cfg(o.f0)},      {"omega", fmt_cfg(o.omega)},
                {"phase", fmt_cfg(o.phase)},{"alpha", fmt_cfg(o.alpha)},
                {"beta", fmt_cfg(o.beta)},  {"t_final", fmt_cfg(t_final)},
                {"points", std::to_string(o.points)}};
    t.columns = {"t", "q", "qdot", "energy", "dq_dphi", "dqdot_dphi"};
    if (show_and_skip(t, o.out)) return;

    for (int i = 0; i < o.points; ++i) {
        const double ti = t_final * i / (o.points - 1);
        const OscState s = oscillator_state(p, ti);
        const PhaseSensitivity d = phase_sensitivity(p, ti);
        t.rows.push_back({ti, s.q, s.qdot, oscillator_energy(p, s), d.dq_dphi, d.dqdot_dphi});
    }
    deliver(t, o.out);
}

void run_classical_dipole(const ClassicalOpts& o) {
    DipoleParams p;
    if (o.kind == "electric") p.kind = DipoleParams::Kind::electric;
    else if (o.kind == "magnetic") p.kind = DipoleParams::Kind::magnetic;
    else p.kind = DipoleParams::Kind::llg;
    p.coupling = o.coupling;
    p.field0 = o.field0;
    p.amp = o.amp;
    p.omega = o.omega;
    p.phase = o.phase;
    validate(p);
    const double t_final = o.t_final == "auto" ? dipole_flip_time(p) : to_double(o.t_final);
    if (o.points < 2) throw config_error("points must be at least 2");

    Table t;
    t.config = {{"command", "classical"},
                {"tool_version", kToolVersion}, {"system", "dipole"},
                {"kind", o.kind},         {"coupling", fmt_cfg(o.coupling)},
                {"field0", fmt_cfg(o.field0)}, {"amp", fmt_cfg(o.amp)},
                {"omega", fmt_cfg(o.omega)},   {"phase", fmt_cfg(o.phase)},
                {"t_final", fmt_cfg(t_final)},
                {"steps_per_period", std::to_string(o.spp)},
                {"points", std::to_string(o.points)}};
    t.columns = {"t", "lx", "ly", "lz"};
    if (show_and_skip(t, o.out)) return;

    const double kmag = (p.kind == DipoleParams::Kind::electric) ? std::abs(1.0 / p.coupling)
                                                                 : std::abs(p.coupling);
    const double max_rate = kmag * std::sqrt(p.field0 * p.field0 + 4.0 * p.amp * p.amp);
    const int steps = suggested_steps(t_final, max_rate, o.spp);
    const VecTrace tr = integrate_dipole(p, Vec3{0.0, 0.0, -1.0}, t_final, steps);

    const std::size_t n = tr.times.size();
    const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(o.points), n);
    for (std::size_t i = 0; i < want; ++i) {
        const std::size_t k = (want == 1) ? 0 : i * (n - 1) / (want - 1);
        t.rows.push_back({tr.times[k], tr.points[k].x, tr.points[k].y, tr.points[k].z});
    }
    deliver(t, o.out);
}

void run_classical(const ClassicalOpts& o) {
    if (o.system == "oscillator")
        run_classical_oscillator(o);
    else
        run_classical_dipole(o);
}

// ---------------------------------------------------------------------------
// entropy: phase-averaged mixedness along the protocol

struct EntropyOpts {
    double gap = 1.0;
    double amp = 0.05;
    double omega = 1.0;
    std::string t_final = "auto";
    int points = 201;
    int phi_grid = 0;  // 0: closed form; otherwise average over that many phases
    OutputOpts out;
};

void run_entropy(const EntropyOpts& o) {
    QubitParams p;
    p.gap = o.gap;
    p.amp = o.amp;
    p.omega = o.omega;
    validate(p);
    const double t_final =
        o.t_final == "auto" ? stopping_time(Envelope::constant(o.amp)) : to_double(o.t_final);
    if (!(t_final > 0.0)) throw config_error("t_final must be positive");
    if (o.points < 2) throw config_error("points must be at least 2");

    Table t;
    t.config = {{"command", "entropy"},
                {"tool_version", kToolVersion},
                {"gap", fmt_cfg(o.gap)},
                {"amp", fmt_cfg(o.amp)},
                {"omega", fmt_cfg(o.omega)},
                {"t_final", fmt_cfg(t_final)},
                {"points", std::to_string(o.points)},
                {"phi_grid", std::to_string(o.phi_grid)}};
    t.columns = {"t", "S_bits", "p_excited"};
    if (show_and_skip(t, o.out)) return;

    for (int i = 0; i < o.points; ++i) {
        const double ti = t_final * i / (o.points - 1);
        const Mat2 rho =
            o.phi_grid > 0 ? phi_averaged_state_sampled(p, ti, o.phi_grid) : phi_averaged_state(p, ti);
        t.rows.push_back({ti, von_neumann_entropy(rho), rho(1, 1).real()});
    }
    deliver(t, o.out);
}

// ---------------------------------------------------------------------------
// vu: level-swap potential for a two- or three-level spectrum

struct VuOpts {
    std::string levels = "-1,0,1";
    int i = 0;
    int j = 2;
    double theta = 0.0;
    double theta_tilde = 0.0;
    double tau = 1.0;
    OutputOpts out;
};

template <int N>
void emit_vu(const VuFamily<N>& fam, Table& t, const OutputOpts& out) {
    t.config.emplace_back("exp_residual", format_value(fam.exp_residual));
    t.config.emplace_back("transfer_residual", format_value(fam.transfer_residual));
    t.columns = {"row", "col", "v_re", "v_im"};
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c)
            t.rows.push_back({static_cast<double>(r), static_cast<double>(c),
                              fam.v_u(r, c).real(), fam.v_u(r, c).imag()});
    deliver(t, out);
}

void run_vu(const VuOpts& o) {
    const auto parts = split(o.levels, ',');
    if (parts.size() != 2 && parts.size() != 3)
        throw config_error("--levels needs two or three comma-separated energies");
    std::vector<double> levels;
    for (const auto& s : parts) levels.push_back(to_double(s));

    Table t;
    t.config = {{"command", "vu"},
                {"tool_version", kToolVersion},
                {"levels", o.levels},
                {"i", std::to_string(o.i)},
                {"j", std::to_string(o.j)},
                {"theta", fmt_cfg(o.theta)},
                {"theta_tilde", fmt_cfg(o.theta_tilde)},
                {"tau", fmt_cfg(o.tau)}};
    if (show_and_skip(t, o.out)) return;

    if (levels.size() == 2) {
        Mat2 h;
        h(0, 0) = levels[0];
        h(1, 1) = levels[1];
        emit_vu(vu_family<2>(h, o.i, o.j, o.theta, o.theta_tilde, o.tau), t, o.out);
    } else {
        Mat3 h;
        for (int k = 0; k < 3; ++k) h(k, k) = levels[k];
        emit_vu(vu_family<3>(h, o.i, o.j, o.theta, o.theta_tilde, o.tau), t, o.out);
    }
}

// ---------------------------------------------------------------------------
// power: plane-wave harvesting estimate in SI units

struct PowerOpts {
    double intensity = 1000.0;  // W/m^2
    double dipole_debye = 75.0;
    double gap_mev = 1.0;
    double density = 2.5e15;  // 1/m^2
    OutputOpts out;
};

void run_power(const PowerOpts& o) {
    HarvestModel m;
    m.intensity = o.intensity;
    m.dipole_moment = o.dipole_debye * consts::kDebye;
    m.gap = o.gap_mev * consts::kMilliElectronVolt;
    m.density = o.density;
    validate(m);

    Table t;
    t.config = {{"command", "power"},
                {"tool_version", kToolVersion},
                {"intensity_w_per_m2", fmt_cfg(o.intensity)},
                {"dipole_debye", fmt_cfg(o.dipole_debye)},
                {"gap_mev", fmt_cfg(o.gap_mev)},
                {"density_per_m2", fmt_cfg(o.density)},
                {"convention_note",
                 "ordinary counts gap/h flips per second; the angular column is exactly "
                 "2*pi larger"}};
    t.columns = {"intensity",        "field_amplitude",  "flip_time",
                 "p_dipole_ordinary", "p_dipole_angular", "p_area_ordinary",
                 "p_area_angular",    "angular_over_ordinary"};
    if (show_and_skip(t, o.out)) return;

    HarvestModel ang = m;
    ang.convention = FreqConvention::angular;
    const double p_ord = power_per_dipole(m);
    const double p_ang = power_per_dipole(ang);
    t.rows.push_back({o.intensity, field_amplitude(o.intensity), flip_time(m), p_ord, p_ang,
                      power_per_area(m), power_per_area(ang), p_ang / p_ord});
    deliver(t, o.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-level energy harvesting toolkit: drive simulations, robustness "
                 "sweeps, classical analogs, and power estimates"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("deh ") + kToolVersion);

    // --config is stripped and expanded before parsing (see expand_config_args);
    // the bound option only documents the flag and catches a missing value
    std::string config_sink;
    const auto add_config_flag = [&config_sink](CLI::App* cmd) {
        cmd->add_option("--config", config_sink,
                        "Flat key=value file; command-line flags override file values");
    };

    SimulateOpts sim;
    auto* csim = app.add_subcommand("simulate", "Propagate one drive run and emit the trace");
    csim->add_option("--gap", sim.gap, "Level splitting");
    csim->add_option("--amp", sim.amp, "Drive amplitude");
    csim->add_option("--omega", sim.omega, "Drive frequency");
    csim->add_option("--phase", sim.phase, "Drive phase");
    csim->add_option("--t-final", sim.t_final, "Run length, or 'auto' for the solved stop time");
    csim->add_option("--envelope", sim.envelope, "const | ramp:<fraction> | beat:<w1>,<w2>");
    csim->add_option("--model", sim.model, "Drive model")->check(CLI::IsMember({"full", "rwa"}));
    csim->add_option("--steps-per-period", sim.spp, "Integration steps per drive period");
    add_output_flags(csim, sim.out);
    add_config_flag(csim);
    csim->callback([&] { run_simulate(sim); });

    SweepOpts swp;
    auto* cswp = app.add_subcommand("sweep", "Grid of runs with population statistics per cell");
    cswp->add_option("--gap", swp.gap, "Level splitting");
    cswp->add_option("--amp", swp.amp, "Nominal drive amplitude");
    cswp->add_option("--omega", swp.omega, "Nominal drive frequency");
    cswp->add_option("--phase", swp.phase, "Drive phase when phi is fixed");
    cswp->add_option("--axis", swp.axes,
                     "Sweep axis <name>:<min>:<max>:<count>; names: A phi dA dT dw "
                     "ramp_fraction (repeatable)");
    cswp->add_option("--envelope", swp.envelope, "const | ramp:<fraction> | beat:<w1>,<w2>");
    cswp->add_option("--phi-grid", swp.phi_grid, "Phase ensemble size when phi is not an axis");
    cswp->add_option("--phi-mode", swp.phi_mode, "Phase ensemble layout")
        ->check(CLI::IsMember({"grid", "sampled"}));
    cswp->add_option("--seed", swp.seed, "Seed for sampled phase ensembles");
    cswp->add_option("--steps-per-period", swp.spp, "Integration steps per drive period");
    cswp->add_option("--jobs", swp.jobs, "Worker threads for sweep cells");
    add_output_flags(cswp, swp.out);
    add_config_flag(cswp);
    cswp->callback([&] { run_sweep_cmd(swp); });

    ClassicalOpts cls;
    auto* ccls = app.add_subcommand("classical", "Oscillator or dipole trace");
    ccls->add_option("--system", cls.system, "Classical system")
        ->check(CLI::IsMember({"oscillator", "dipole"}));
    ccls->add_option("--mass", cls.mass, "Oscillator mass");
    ccls->add_option("--spring-k", cls.spring_k, "Spring constant");
    ccls->add_option("--f0", cls.f0, "Drive force amplitude");
    ccls->add_option("--omega", cls.omega, "Drive frequency");
    ccls->add_option("--phase", cls.phase, "Drive phase");
    ccls->add_option("--alpha", cls.alpha, "Initial position");
    ccls->add_option("--beta", cls.beta, "Initial velocity");
    ccls->add_option("--kind", cls.kind, "Dipole coupling kind")
        ->check(CLI::IsMember({"electric", "magnetic", "llg"}));
    ccls->add_option("--coupling", cls.coupling, "Dipole coupling constant");
    ccls->add_option("--field0", cls.field0, "Static field along +z");
    ccls->add_option("--amp", cls.amp, "Drive field amplitude");
    ccls->add_option("--t-final", cls.t_final,
                     "Run length; 'auto' solves the dipole flip time");
    ccls->add_option("--points", cls.points, "Rows in the emitted trace");
    ccls->add_option("--steps-per-period", cls.spp, "Integration steps per precession turn");
    add_output_flags(ccls, cls.out);
    add_config_flag(ccls);
    ccls->callback([&] { run_classical(cls); });

    EntropyOpts ent;
    auto* cent = app.add_subcommand("entropy", "Phase-averaged entropy along the protocol");
    cent->add_option("--gap", ent.gap, "Level splitting");
    cent->add_option("--amp", ent.amp, "Drive amplitude");
    cent->add_option("--omega", ent.omega, "Drive frequency (resonant runs only)");
    cent->add_option("--t-final", ent.t_final, "Trace length, or 'auto' for the stop time");
    cent->add_option("--points", ent.points, "Rows in the emitted trace");
    cent->add_option("--phi-grid", ent.phi_grid,
                     "Average over this many phases instead of the closed form");
    add_output_flags(cent, ent.out);
    add_config_flag(cent);
    cent->callback([&] { run_entropy(ent); });

    VuOpts vu;
    auto* cvu = app.add_subcommand("vu", "Potential that swaps two levels of a static spectrum");
    cvu->add_option("--levels", vu.levels, "Two or three energies, comma separated");
    cvu->add_option("--i", vu.i, "Source level (0-based, ascending energy)");
    cvu->add_option("--j", vu.j, "Target level (0-based, ascending energy)");
    cvu->add_option("--theta", vu.theta, "Upward transfer phase");
    cvu->add_option("--theta-tilde", vu.theta_tilde, "Downward transfer phase");
    cvu->add_option("--tau", vu.tau, "Switch duration");
    add_output_flags(cvu, vu.out);
    add_config_flag(cvu);
    cvu->callback([&] { run_vu(vu); });

    PowerOpts pow;
    auto* cpow = app.add_subcommand("power", "Plane-wave harvesting power estimate (SI)");
    cpow->add_option("--intensity", pow.intensity, "Wave intensity in W/m^2");
    cpow->add_option("--dipole-debye", pow.dipole_debye, "Transition dipole moment in debye");
    cpow->add_option("--gap-mev", pow.gap_mev, "Energy gap in meV");
    cpow->add_option("--density", pow.density, "Dipoles per m^2");
    add_output_flags(cpow, pow.out);
    add_config_flag(cpow);
    cpow->callback([&] { run_power(pow); });

    try {
        std::vector<std::string> args = expand_config_args(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
