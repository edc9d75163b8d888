#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsch/config.hpp"
#include "nsch/csv.hpp"
#include "nsch/energy.hpp"
#include "nsch/errors.hpp"
#include "nsch/sim.hpp"
#include "nsch/snapshot.hpp"
#include "nsch/version.hpp"

namespace fs = std::filesystem;
using namespace nsch;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read '" + path + "'");
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ';';
    return s;
}

std::string platform_string() {
    std::ostringstream os;
#ifdef __VERSION__
    os << "cxx " << __VERSION__;
#else
    os << "cxx unknown";
#endif
    os << ", " << 8 * sizeof(void*) << "-bit pointers, " << 8 * sizeof(long double)
       << "-bit long double";
#ifdef NDEBUG
    os << ", release";
#else
    os << ", debug";
#endif
    return os.str();
}

void write_manifest_atomic(const fs::path& dir, const std::string& content) {
    const fs::path tmp = dir / "manifest.txt.tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        os << content;
        os.flush();
        if (!os) throw ConfigError("cannot write manifest in '" +
                                   dir.string() + "'");
    }
    fs::rename(tmp, dir / "manifest.txt");
}

void append_config_echo(std::ostringstream& m, const SimConfig& cfg) {
    std::istringstream lines(echo_config(cfg));
    std::string line;
    while (std::getline(lines, line)) m << "config." << line << "\n";
}

void write_row_snapshot(const std::string& dir, int nx, int ny,
                        const SnapshotRow& s) {
    const std::vector<SnapField> fields = {
        {0, "phi", s.phi.v}, {0, "mu", s.mu.v}, {1, "vx", s.v.x},
        {2, "vy", s.v.y},    {0, "g", s.g.v},
    };
    write_snap(dir + "/fields_" + std::to_string(s.step) + ".snap", nx, ny,
               fields);
}

std::uint64_t total_steps(const SimConfig& cfg) {
    return static_cast<std::uint64_t>(std::floor(cfg.t_end / cfg.dt + 1e-9));
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    const SimConfig cfg = make_sim_config(parse_config_text(slurp(config_path)));
    fs::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();

    std::ofstream csv(out_dir + "/series.csv",
                      std::ios::binary | std::ios::trunc);
    if (!csv) throw ConfigError("cannot write in '" + out_dir + "'");
    csv << kSeriesHeader << "\r\n";
    Observer obs = [&](const RowOutput& ro) {
        csv << series_row(*ro.row);
        if (ro.snap) write_row_snapshot(out_dir, cfg.nx, cfg.ny, *ro.snap);
    };

    SimConfig c = cfg;
    c.keep_snapshots = false;
    std::string status = "ok";
    int code = 0;
    Trajectory traj;
    bool ok = false;
    try {
        traj = run(c, obs);
        ok = true;
    } catch (const Error& e) {
        status = std::string("error: ") + sanitize(e.what());
        code = dynamic_cast<const ConfigError*>(&e) ? 3 : 2;
    }
    csv.flush();

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::ostringstream m;
    m << "version = " << kVersionString << "\n";
    m << "platform = " << platform_string() << "\n";
    m << "wallclock_seconds = " << wall << "\n";
    m << "status = " << status << "\n";
    if (ok) {
        const std::vector<EnergyReport>& r = traj.reports;
        double drift = 0.0;
        for (const EnergyReport& row : r)
            drift = std::max(drift, std::abs(row.mass - r.front().mass));
        const double etol = (cfg.flow_enabled && cfg.v0_amp > 0.0 ? 1e-3 : 1e-8) *
                            r.front().e_tot;
        const InequalityCheck ec =
            check_energy_inequality(r, 0, r.size() - 1, etol);
        m << "rows = " << r.size() << "\n";
        m << "steps = " << traj.step_live << "\n";
        m << "check.mass_drift = " << drift << "\n";
        m << "check.mass_drift_pass = " << (drift <= 1e-11 ? "true" : "false")
          << "\n";
        m << "check.delta_over = " << traj.delta_over_max << "\n";
        m << "check.delta_over_pass = "
          << (traj.delta_over_max <= 1e-6 ? "true" : "false") << "\n";
        m << "check.energy_slack = " << ec.slack << "\n";
        m << "check.energy_tol = " << etol << "\n";
        m << "check.energy_pass = " << (ec.pass ? "true" : "false") << "\n";
        m << "check.sup_e_tot = " << traj.sup_e_tot << "\n";
        m << "check.stab_s_used = " << traj.stab_S_used << "\n";
        m << "check.phi0_max_abs = " << traj.phi0_max_abs << "\n";
    }
    append_config_echo(m, cfg);
    write_manifest_atomic(out_dir, m.str());
    if (ok)
        std::cout << "completed " << traj.step_live << " steps, "
                  << traj.reports.size() << " rows, wallclock " << wall
                  << " s\n";
    else
        std::cerr << status << "\n";
    return code;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir) {
    const SimConfig cfg = make_sim_config(parse_config_text(slurp(config_path)));
    if (cfg.sweep_eps.empty())
        throw ConfigError("sweep.eps must list the regularization values");
    fs::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();

    RunObserverFactory factory = [&](std::size_t idx,
                                     double /*eps*/) -> Observer {
        const std::string dir = out_dir + "/eps_" + std::to_string(idx);
        fs::create_directories(dir);
        auto csv = std::make_shared<std::ofstream>(
            dir + "/series.csv", std::ios::binary | std::ios::trunc);
        if (!*csv) throw ConfigError("cannot write in '" + dir + "'");
        *csv << kSeriesHeader << "\r\n";
        return [csv, dir, nx = cfg.nx, ny = cfg.ny](const RowOutput& ro) {
            *csv << series_row(*ro.row);
            if (ro.snap) write_row_snapshot(dir, nx, ny, *ro.snap);
        };
    };

    std::string status = "ok";
    int code = 0;
    SweepResult res;
    bool ok = false;
    try {
        res = sweep_eps(cfg, factory);
        ok = true;
    } catch (const Error& e) {
        status = std::string("error: ") + sanitize(e.what());
        code = dynamic_cast<const ConfigError*>(&e) ? 3 : 2;
    }

    std::string verdict_line;
    if (ok) {
        std::ofstream sc(out_dir + "/sweep.csv",
                         std::ios::binary | std::ios::trunc);
        sc << kSweepHeader << "\r\n";
        for (const SweepRow& r : res.rows) sc << sweep_row(r);
        verdict_line = std::string("bounds: ") +
                       (res.verdict.pass ? "PASS" : "FAIL");
        {
            std::ofstream vf(out_dir + "/verdict.txt",
                             std::ios::binary | std::ios::trunc);
            vf << verdict_line << "\n" << res.verdict.detail;
        }
        std::cout << verdict_line << "\n";
        if (!res.verdict.pass) std::cout << res.verdict.detail;
        // Per-run manifests so diag works on the subdirectories.
        for (std::size_t k = 0; k < cfg.sweep_eps.size(); ++k) {
            SimConfig ck = cfg;
            ck.material.eps = cfg.sweep_eps[k];
            ck.sweep_eps.clear();
            std::ostringstream m;
            m << "version = " << kVersionString << "\n";
            m << "platform = " << platform_string() << "\n";
            m << "status = ok\n";
            append_config_echo(m, ck);
            write_manifest_atomic(out_dir + "/eps_" + std::to_string(k),
                                  m.str());
        }
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::ostringstream m;
    m << "version = " << kVersionString << "\n";
    m << "platform = " << platform_string() << "\n";
    m << "wallclock_seconds = " << wall << "\n";
    m << "status = " << status << "\n";
    if (ok)
        m << "bounds_verdict = " << (res.verdict.pass ? "pass" : "fail")
          << "\n";
    append_config_echo(m, cfg);
    write_manifest_atomic(out_dir, m.str());
    if (!ok) std::cerr << status << "\n";
    return code;
}

struct LoadedSnapshot {
    std::uint64_t step = 0;
    ScalarField phi, mu, g;
    FaceField v;
};

LoadedSnapshot load_snapshot(const Grid& g, const std::string& path,
                             std::uint64_t step) {
    const SnapContents c = read_snap(path);
    if (c.nx != g.nx || c.ny != g.ny)
        throw CorruptSnapshot("snapshot grid does not match the config");
    LoadedSnapshot s;
    s.step = step;
    s.phi = ScalarField(g);
    s.mu = ScalarField(g);
    s.g = ScalarField(g);
    s.v = FaceField(g);
    int found = 0;
    for (const SnapField& f : c.fields) {
        if (f.name == "phi" && f.kind == 0) s.phi.v = f.data, ++found;
        else if (f.name == "mu" && f.kind == 0) s.mu.v = f.data, ++found;
        else if (f.name == "g" && f.kind == 0) s.g.v = f.data, ++found;
        else if (f.name == "vx" && f.kind == 1) s.v.x = f.data, ++found;
        else if (f.name == "vy" && f.kind == 2) s.v.y = f.data, ++found;
    }
    if (found != 5)
        throw CorruptSnapshot("snapshot '" + path +
                              "' lacks the phi/mu/vx/vy/g fields");
    return s;
}

int cmd_diag(const std::string& in_dir) {
    const std::string manifest = slurp(in_dir + "/manifest.txt");
    std::map<std::string, std::string> stripped;
    for (const auto& [k, v] : parse_config_text(manifest))
        if (k.rfind("config.", 0) == 0) stripped[k.substr(7)] = v;
    if (stripped.empty())
        throw ConfigError("no config echo found in '" + in_dir +
                          "/manifest.txt'");
    const SimConfig cfg = make_sim_config(stripped);
    const Grid g = make_grid(cfg);
    const MaterialModel M = make_material(cfg);
    const std::vector<EnergyReport> rows =
        read_series_csv(in_dir + "/series.csv");

    const std::uint64_t nsteps = total_steps(cfg);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t n = 0; n < nsteps;
         n += static_cast<std::uint64_t>(cfg.report_every))
        expected.push_back(n);
    expected.push_back(nsteps);
    if (rows.size() != expected.size())
        throw CorruptSnapshot("series.csv has " + std::to_string(rows.size()) +
                              " rows, expected " +
                              std::to_string(expected.size()));

    std::vector<std::pair<std::uint64_t, std::string>> snaps;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("fields_", 0) != 0 || name.size() < 13 ||
            name.substr(name.size() - 5) != ".snap")
            continue;
        const std::string digits = name.substr(7, name.size() - 12);
        if (digits.empty() ||
            digits.find_first_not_of("0123456789") != std::string::npos)
            continue;
        snaps.emplace_back(std::stoull(digits), entry.path().string());
    }
    std::sort(snaps.begin(), snaps.end());

    double max_disc = 0.0;
    auto disc = [&](double stored, double recomputed) {
        const double d = std::abs(stored - recomputed) /
                         std::max({1.0, std::abs(stored), std::abs(recomputed)});
        max_disc = std::max(max_disc, d);
    };

    std::vector<std::uint64_t> snap_steps;
    std::vector<ScalarField> snap_phis;
    for (const auto& [step, path] : snaps) {
        const LoadedSnapshot s = load_snapshot(g, path, step);
        std::size_t row_idx;
        if (step == nsteps) {
            row_idx = rows.size() - 1;
        } else if (step % static_cast<std::uint64_t>(cfg.report_every) == 0) {
            row_idx = static_cast<std::size_t>(
                step / static_cast<std::uint64_t>(cfg.report_every));
        } else {
            throw CorruptSnapshot("snapshot step " + std::to_string(step) +
                                  " is not a report step");
        }
        PhaseState phase(g);
        phase.phi = s.phi;
        phase.mu = s.mu;
        flux(g, s.phi, s.mu, M, phase.J, phase.Jhat);
        phase.t = rows[row_idx].t;
        FlowState flow(g);
        flow.v = s.v;
        flow.g = s.g;
        for (std::size_t k = 0; k < s.phi.v.size(); ++k)
            flow.rho.v[k] = M.density(s.phi.v[k]);
        const EnergyReport rep = report(g, flow, phase, M);
        const EnergyReport& st = rows[row_idx];
        disc(st.e_kin, rep.e_kin);
        disc(st.e_free, rep.e_free);
        disc(st.e_tot, rep.e_tot);
        disc(st.d_visc, rep.d_visc);
        disc(st.d_flux, rep.d_flux);
        disc(st.mass, rep.mass);
        disc(st.g_eps_int, rep.g_eps_int);
        disc(st.phi_min, rep.phi_min);
        disc(st.phi_max, rep.phi_max);
        snap_steps.push_back(step);
        snap_phis.push_back(s.phi);
    }

    // Cumulative columns need the full per-step record.
    if (cfg.report_every == 1 && snap_steps == expected) {
        long double lap_acc = 0.0L, psi_acc = 0.0L;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            disc(rows[i].lapA_sq_cum, static_cast<double>(lap_acc));
            disc(rows[i].psi_ln_prime_sq_cum, static_cast<double>(psi_acc));
            if (i + 1 < rows.size()) {
                lap_acc += static_cast<long double>(cfg.dt) *
                           lap_a_sq(g, snap_phis[i], M);
                psi_acc += static_cast<long double>(cfg.dt) *
                           psi_ln_prime_sq(g, snap_phis[i], M);
            }
        }
    }

    std::printf("checked %zu snapshots against %zu rows\n", snaps.size(),
                rows.size());
    std::printf("max discrepancy = %.3e\n", max_disc);
    return max_disc > 1e-10 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-phase Cahn-Hilliard / Navier-Stokes solver"};
    app.require_subcommand(1);
    std::string config_path, out_dir, in_dir;

    CLI::App* r = app.add_subcommand("run", "run one simulation");
    r->add_option("--config", config_path, "flat key=value config file")
        ->required();
    r->add_option("--out", out_dir, "output directory")->required();

    CLI::App* s = app.add_subcommand(
        "sweep", "run the regularization sweep from sweep.eps");
    s->add_option("--config", config_path, "flat key=value config file")
        ->required();
    s->add_option("--out", out_dir, "output directory")->required();

    CLI::App* d = app.add_subcommand(
        "diag", "recompute reports from stored snapshots");
    d->add_option("--in", in_dir, "directory with run outputs")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (r->parsed()) return cmd_run(config_path, out_dir);
        if (s->parsed()) return cmd_sweep(config_path, out_dir);
        return cmd_diag(in_dir);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
