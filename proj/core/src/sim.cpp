#include "nsch/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <utility>

#include "io_util.hpp"
#include "nsch/errors.hpp"
#include "nsch/ops.hpp"
#include "nsch/rng.hpp"
#include "nsch/snapshot.hpp"

namespace nsch {

namespace {

void validate(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigError("time.dt must be positive");
    if (!(cfg.t_end > 0.0)) throw ConfigError("time.t_end must be positive");
    if (cfg.report_every < 1)
        throw ConfigError("sim.report_every must be at least 1");
    if (cfg.snap_every < 0)
        throw ConfigError("sim.snap_every must not be negative");
    if (cfg.max_iter_factor < 1)
        throw ConfigError("sim.max_iter_factor must be at least 1");
    if (!(cfg.ic_cap > 0.0 && cfg.ic_cap <= 1.0))
        throw ConfigError("ic.cap must lie in (0, 1]");
    if (!(std::abs(cfg.ic_mean) <= 1.0))
        throw ConfigError("ic.mean must lie in [-1, 1]");
    if (cfg.ic_amp < 0.0) throw ConfigError("ic.amp must not be negative");
    if ((cfg.ic_type == IcType::Stripe || cfg.ic_type == IcType::Disk) &&
        !(cfg.ic_width > 0.0))
        throw ConfigError("ic.width must be positive");
    if (cfg.ic_type == IcType::Disk && !(cfg.ic_radius > 0.0))
        throw ConfigError("ic.radius must be positive");
    if (cfg.v0_amp < 0.0) throw ConfigError("flow.v0_amp must not be negative");
    if (cfg.v0_modes < 1)
        throw ConfigError("flow.v0_modes must be at least 1");
    if (!(cfg.ch_tol > 0.0)) throw ConfigError("ch.tol must be positive");
    if (!(cfg.tol_visc > 0.0 && cfg.tol_poisson > 0.0))
        throw ConfigError("flow tolerances must be positive");
    if (cfg.scheme == ChScheme::Stabilized && cfg.material.a1 != 0.0)
        throw ConfigError(
            "the stabilized scheme requires a constant gradient coefficient "
            "(material.a1 = 0); use ch.scheme = explicit");
}

std::uint64_t total_steps(const SimConfig& cfg) {
    return static_cast<std::uint64_t>(
        std::floor(cfg.t_end / cfg.dt + 1e-9));
}

bool saturated_constant(const SimConfig& cfg) {
    return cfg.ic_type == IcType::Constant && std::abs(cfg.ic_mean) == 1.0;
}

void recenter(std::vector<double>& v, double target) {
    long double s = 0.0L;
    for (double x : v) s += x;
    const double shift =
        target - static_cast<double>(s / static_cast<long double>(v.size()));
    for (double& x : v) x += shift;
}

// 12 doubles, the CSV column order.
void put_report(std::ostream& os, const EnergyReport& r) {
    detail::put_f64(os, r.t);
    detail::put_f64(os, r.e_kin);
    detail::put_f64(os, r.e_free);
    detail::put_f64(os, r.e_tot);
    detail::put_f64(os, r.d_visc);
    detail::put_f64(os, r.d_flux);
    detail::put_f64(os, r.mass);
    detail::put_f64(os, r.g_eps_int);
    detail::put_f64(os, r.lapA_sq_cum);
    detail::put_f64(os, r.psi_ln_prime_sq_cum);
    detail::put_f64(os, r.phi_min);
    detail::put_f64(os, r.phi_max);
}

EnergyReport get_report(std::istream& is) {
    EnergyReport r;
    r.t = detail::get_f64(is);
    r.e_kin = detail::get_f64(is);
    r.e_free = detail::get_f64(is);
    r.e_tot = detail::get_f64(is);
    r.d_visc = detail::get_f64(is);
    r.d_flux = detail::get_f64(is);
    r.mass = detail::get_f64(is);
    r.g_eps_int = detail::get_f64(is);
    r.lapA_sq_cum = detail::get_f64(is);
    r.psi_ln_prime_sq_cum = detail::get_f64(is);
    r.phi_min = detail::get_f64(is);
    r.phi_max = detail::get_f64(is);
    return r;
}

// Exact double-double split; hi + lo restores the extended value exactly
// because the remainder fits well inside a double's mantissa.
void put_ld(std::ostream& os, long double x) {
    const double hi = static_cast<double>(x);
    const double lo = static_cast<double>(x - static_cast<long double>(hi));
    detail::put_f64(os, hi);
    detail::put_f64(os, lo);
}

long double get_ld(std::istream& is) {
    const double hi = detail::get_f64(is);
    const double lo = detail::get_f64(is);
    return static_cast<long double>(hi) + static_cast<long double>(lo);
}

SnapField cell_field(const char* name, const ScalarField& f) {
    return SnapField{0, name, f.v};
}

ScalarField as_cell(const Grid& g, const SnapField& f) {
    ScalarField s(g);
    s.v = f.data;
    return s;
}

FaceField as_faces(const Grid& g, const SnapField& fx, const SnapField& fy) {
    FaceField v(g);
    v.x = fx.data;
    v.y = fy.data;
    return v;
}

Trajectory advance(const SimConfig& cfg, Trajectory traj, const Observer& obs,
                   bool keep_phi_history) {
    const Grid g = make_grid(cfg);
    const MaterialModel M = make_material(cfg);
    const std::uint64_t nsteps = total_steps(cfg);
    if (traj.step_live > nsteps)
        throw ConfigError("trajectory is already past time.t_end");
    const bool saturated = saturated_constant(cfg);

    PhaseState phase = phase_state_instant(g, traj.phi_live, M, traj.t_live);
    FlowState flow(g);
    flow.v = traj.v_live;
    flow.g = traj.g_live;
    flow.t = traj.t_live;
    for (size_t k = 0; k < phase.phi.v.size(); ++k)
        flow.rho.v[k] = M.density(phase.phi.v[k]);

    ChStepOptions chopt;
    chopt.scheme = cfg.scheme;
    chopt.tol = cfg.ch_tol;
    chopt.max_iter_factor = cfg.max_iter_factor;
    chopt.stab_S = traj.stab_S_used;
    chopt.phi0_max_abs = traj.phi0_max_abs;
    chopt.c_stab = cfg.c_stab;

    NsOptions nsopt;
    nsopt.tol_visc = cfg.tol_visc;
    nsopt.tol_poisson = cfg.tol_poisson;
    nsopt.max_iter_factor = cfg.max_iter_factor;
    nsopt.include_bj = cfg.include_bj;

    auto emit = [&](const EnergyReport& row, std::uint64_t step,
                    const ScalarField& phi, const ScalarField& mu,
                    const FaceField& v, const ScalarField& gp,
                    bool is_final) {
        const std::size_t r = traj.reports.size();
        traj.reports.push_back(row);
        traj.report_steps.push_back(step);
        if (keep_phi_history) traj.phi_history.push_back(phi);
        const bool snap_due =
            cfg.snap_every > 0
                ? (r % static_cast<std::size_t>(cfg.snap_every) == 0 ||
                   is_final)
                : (r == 0 || is_final);
        SnapshotRow snap;
        const SnapshotRow* sp = nullptr;
        if (snap_due) {
            snap.step = step;
            snap.phi = phi;
            snap.mu = mu;
            snap.g = gp;
            snap.v = v;
            sp = &snap;
        }
        if (obs) obs(RowOutput{&traj.reports.back(), step, sp});
        if (snap_due && cfg.keep_snapshots)
            traj.snapshots.push_back(std::move(snap));
    };

    for (std::uint64_t n = traj.step_live; n < nsteps; ++n) {
        try {
            PhaseState pnext(g);
            FlowState fnext(g);
            bool have_flow = false;
            if (cfg.ns_first && cfg.flow_enabled) {
                fnext = step_ns(g, flow, phase, phase.phi, cfg.dt, M, nsopt);
                have_flow = true;
            }
            if (saturated) {
                pnext = phase;
                pnext.t = phase.t + cfg.dt;
            } else {
                const FaceField& vadv = have_flow ? fnext.v : flow.v;
                pnext = step_ch(g, phase, vadv, cfg.dt, M, chopt);
            }

            // Row n: pre-step fields with the forward flux of this step.
            PhaseState rowstate(g);
            rowstate.phi = phase.phi;
            rowstate.mu = pnext.mu;
            rowstate.J = pnext.J;
            rowstate.Jhat = pnext.Jhat;
            rowstate.t = phase.t;
            EnergyReport row = report(g, flow, rowstate, M);
            row.lapA_sq_cum = static_cast<double>(traj.lapA_cum);
            row.psi_ln_prime_sq_cum = static_cast<double>(traj.psiln_cum);
            if (n % static_cast<std::uint64_t>(cfg.report_every) == 0)
                emit(row, n, rowstate.phi, rowstate.mu, flow.v, flow.g,
                     false);

            traj.lapA_cum += static_cast<long double>(cfg.dt) *
                             lap_a_sq(g, phase.phi, M);
            traj.psiln_cum += static_cast<long double>(cfg.dt) *
                              psi_ln_prime_sq(g, phase.phi, M);
            traj.jhat_cum += static_cast<long double>(cfg.dt) * row.d_flux;
            traj.sup_e_tot = std::max(traj.sup_e_tot, row.e_tot);

            if (!have_flow) {
                if (cfg.flow_enabled) {
                    fnext = step_ns(g, flow, pnext, pnext.phi, cfg.dt, M,
                                    nsopt);
                } else {
                    fnext.v = flow.v;
                    fnext.g = flow.g;
                    fnext.t = flow.t + cfg.dt;
                    for (size_t k = 0; k < pnext.phi.v.size(); ++k)
                        fnext.rho.v[k] = M.density(pnext.phi.v[k]);
                }
            }
            phase = std::move(pnext);
            flow = std::move(fnext);
            traj.delta_over_max =
                std::max(traj.delta_over_max,
                         std::max(0.0, max_abs(phase.phi.v) - 1.0));
        } catch (const SolverError& e) {
            throw SolverError(std::string(e.what()) + " [step " +
                              std::to_string(n) + "]");
        }
    }

    // Final row: instantaneous quantities of the end state.
    PhaseState pinst = saturated
                           ? phase
                           : phase_state_instant(g, phase.phi, M, phase.t);
    EnergyReport row = report(g, flow, pinst, M);
    row.lapA_sq_cum = static_cast<double>(traj.lapA_cum);
    row.psi_ln_prime_sq_cum = static_cast<double>(traj.psiln_cum);
    traj.sup_e_tot = std::max(traj.sup_e_tot, row.e_tot);
    emit(row, nsteps, pinst.phi, pinst.mu, flow.v, flow.g, true);

    traj.phi_live = std::move(phase.phi);
    traj.v_live = std::move(flow.v);
    traj.g_live = std::move(flow.g);
    traj.step_live = nsteps;
    traj.t_live = flow.t;
    return traj;
}

}  // namespace

Grid make_grid(const SimConfig& cfg) {
    return Grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
}

MaterialModel make_material(const SimConfig& cfg) {
    return MaterialModel(cfg.material);
}

ScalarField initial_phi(const Grid& g, const SimConfig& cfg) {
    validate(cfg);
    ScalarField phi(g);
    const double cap = cfg.ic_cap;
    switch (cfg.ic_type) {
        case IcType::Constant:
            for (double& x : phi.v) x = cfg.ic_mean;
            break;
        case IcType::Random: {
            Rng rng(cfg.seed);
            for (double& x : phi.v)
                x = std::clamp(cfg.ic_mean + cfg.ic_amp * rng.symmetric(),
                               -cap, cap);
            recenter(phi.v, cfg.ic_mean);
            break;
        }
        case IcType::Stripe: {
            const double w = std::numbers::sqrt2 * cfg.ic_width;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    phi(i, j) = std::clamp(
                        std::tanh((g.xc(i) - cfg.ic_x0) / w), -cap, cap);
            break;
        }
        case IcType::Disk: {
            const double w = std::numbers::sqrt2 * cfg.ic_width;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double r = std::hypot(g.xc(i) - cfg.ic_x0,
                                                g.yc(j) - cfg.ic_y0);
                    phi(i, j) = std::clamp(
                        std::tanh((cfg.ic_radius - r) / w), -cap, cap);
                }
            break;
        }
    }
    return phi;
}

FaceField initial_velocity(const Grid& g, const SimConfig& cfg,
                           const ScalarField& phi0, const MaterialModel& M) {
    FaceField v(g);
    if (!(cfg.v0_amp > 0.0)) return v;
    const int nx = g.nx, ny = g.ny;
    // Corner streamfunction from seeded sine modes; walls pinned to exactly
    // zero so that the curl respects no-penetration bitwise.
    Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<double> cm(static_cast<size_t>(cfg.v0_modes));
    for (int m = 0; m < cfg.v0_modes; ++m)
        cm[static_cast<size_t>(m)] = rng.symmetric() / (m + 1);
    std::vector<double> psi(static_cast<size_t>(nx + 1) * (ny + 1), 0.0);
    for (int j = 1; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double x = i * g.hx, y = j * g.hy;
            double s = 0.0;
            for (int m = 0; m < cfg.v0_modes; ++m)
                s += cm[static_cast<size_t>(m)] *
                     std::sin((m + 1) * std::numbers::pi * x / g.lx) *
                     std::sin((m + 1) * std::numbers::pi * y / g.ly);
            psi[static_cast<size_t>(j) * (nx + 1) + i] = cfg.v0_amp * s;
        }
    auto ps = [&](int i, int j) {
        return psi[static_cast<size_t>(j) * (nx + 1) + i];
    };
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i)
            v.fx(i, j) = (ps(i, j + 1) - ps(i, j)) / g.hy;
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            v.fy(i, j) = -(ps(i + 1, j) - ps(i, j)) / g.hx;

    ScalarField rho(g);
    for (size_t k = 0; k < phi0.v.size(); ++k)
        rho.v[k] = M.density(phi0.v[k]);
    auto [vp, dg] =
        project(g, v, rho, 1.0, cfg.tol_poisson, cfg.max_iter_factor);
    return vp;
}

Trajectory run(const SimConfig& cfg, const Observer& obs,
               bool keep_phi_history) {
    validate(cfg);
    const Grid g = make_grid(cfg);
    const MaterialModel M = make_material(cfg);
    Trajectory traj;
    traj.phi_live = initial_phi(g, cfg);
    traj.phi0_max_abs = max_abs(traj.phi_live.v);
    traj.v_live = cfg.flow_enabled ? initial_velocity(g, cfg, traj.phi_live, M)
                                   : FaceField(g);
    traj.g_live = ScalarField(g);
    traj.stab_S_used = cfg.stab_s >= 0.0
                           ? cfg.stab_s
                           : M.stabilization_S(traj.phi0_max_abs);
    traj.delta_over_max = std::max(0.0, traj.phi0_max_abs - 1.0);
    return advance(cfg, std::move(traj), obs, keep_phi_history);
}

Trajectory resume(const SimConfig& cfg, Trajectory traj, const Observer& obs,
                  bool keep_phi_history) {
    validate(cfg);
    // The stored final row was emitted with instantaneous accounting; drop
    // it so the loop re-emits it forward, keeping resumed output bitwise
    // equal to an uninterrupted run.
    if (!traj.report_steps.empty() &&
        traj.report_steps.back() == traj.step_live) {
        traj.reports.pop_back();
        traj.report_steps.pop_back();
        if (!traj.snapshots.empty() &&
            traj.snapshots.back().step == traj.step_live)
            traj.snapshots.pop_back();
        if (traj.phi_history.size() == traj.report_steps.size() + 1)
            traj.phi_history.pop_back();
    }
    return advance(cfg, std::move(traj), obs, keep_phi_history);
}

SweepResult sweep_eps(const SimConfig& cfg,
                      const RunObserverFactory& factory) {
    const std::vector<double>& eps = cfg.sweep_eps;
    if (eps.size() < 3)
        throw ConfigError("sweep.eps needs at least 3 values");
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0.0 && eps[k] < 1.0))
            throw ConfigError("sweep.eps values must lie in (0, 1)");
        if (k > 0 && !(eps[k] < eps[k - 1]))
            throw ConfigError("sweep.eps must be strictly decreasing");
    }
    const Grid g = make_grid(cfg);
    const MaterialModel base = make_material(cfg);
    const double cm = g.cell_measure();

    SweepResult res;
    std::vector<ScalarField> prev;
    std::vector<std::uint64_t> prev_steps;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        SimConfig ck = cfg;
        ck.material.eps = eps[k];
        ck.keep_snapshots = false;
        Observer obs = factory ? factory(k, eps[k]) : Observer{};
        Trajectory tr = run(ck, obs, /*keep_phi_history=*/true);

        SweepRow row;
        row.summary.eps = eps[k];
        row.summary.sup_e_tot = tr.sup_e_tot;
        row.summary.lapA_sq_cum = static_cast<double>(tr.lapA_cum);
        row.summary.eps3_psiln_sq =
            eps[k] * eps[k] * eps[k] * static_cast<double>(tr.psiln_cum);
        row.summary.jhat_sq_cum = static_cast<double>(tr.jhat_cum);
        if (k == 0) {
            row.dist_phi_prev = std::numeric_limits<double>::quiet_NaN();
            row.dist_gradA_prev = std::numeric_limits<double>::quiet_NaN();
        } else {
            if (tr.phi_history.size() != prev.size() ||
                tr.report_steps != prev_steps)
                throw MismatchedGrids(
                    "sweep runs disagree on the report cadence");
            // L2(Q_T) with piecewise-constant rows; the last row spans no
            // interval and gets weight zero.
            long double dphi = 0.0L, dga = 0.0L;
            for (std::size_t r = 0; r + 1 < prev.size(); ++r) {
                const double w =
                    cfg.dt * static_cast<double>(tr.report_steps[r + 1] -
                                                 tr.report_steps[r]);
                long double sp = 0.0L;
                for (std::size_t c = 0; c < prev[r].v.size(); ++c) {
                    const double d = prev[r].v[c] - tr.phi_history[r].v[c];
                    sp += static_cast<long double>(d) * d;
                }
                dphi += w * sp * cm;
                ScalarField Aa(g), Ab(g);
                for (std::size_t c = 0; c < prev[r].v.size(); ++c) {
                    Aa.v[c] = base.a_const()
                                  ? std::sqrt(base.params().a0) * prev[r].v[c]
                                  : base.A_of(prev[r].v[c]);
                    Ab.v[c] = base.a_const()
                                  ? std::sqrt(base.params().a0) *
                                        tr.phi_history[r].v[c]
                                  : base.A_of(tr.phi_history[r].v[c]);
                }
                const FaceField ga = grad_cc_to_face(g, Aa);
                const FaceField gb = grad_cc_to_face(g, Ab);
                long double sg = 0.0L;
                for (std::size_t c = 0; c < ga.x.size(); ++c) {
                    const double d = ga.x[c] - gb.x[c];
                    sg += static_cast<long double>(d) * d;
                }
                for (std::size_t c = 0; c < ga.y.size(); ++c) {
                    const double d = ga.y[c] - gb.y[c];
                    sg += static_cast<long double>(d) * d;
                }
                dga += w * sg * cm;
            }
            row.dist_phi_prev = std::sqrt(static_cast<double>(dphi));
            row.dist_gradA_prev = std::sqrt(static_cast<double>(dga));
        }
        prev = std::move(tr.phi_history);
        prev_steps = tr.report_steps;
        res.rows.push_back(std::move(row));
    }
    std::vector<SweepSummary> sums;
    sums.reserve(res.rows.size());
    for (const SweepRow& r : res.rows) sums.push_back(r.summary);
    res.verdict = check_uniform_bounds(sums);
    return res;
}

void checkpoint(const Trajectory& traj, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot open '" + path + "' for writing");
    os.write("NSCHKPT1", 8);
    detail::put_u32(os, 1);  // version
    const int nx = traj.phi_live.nx, ny = traj.phi_live.ny;
    detail::put_u32(os, static_cast<std::uint32_t>(nx));
    detail::put_u32(os, static_cast<std::uint32_t>(ny));
    detail::put_u64(os, traj.step_live);
    detail::put_f64(os, traj.t_live);
    detail::put_f64(os, traj.sup_e_tot);
    detail::put_f64(os, traj.delta_over_max);
    detail::put_f64(os, traj.stab_S_used);
    detail::put_f64(os, traj.phi0_max_abs);
    put_ld(os, traj.lapA_cum);
    put_ld(os, traj.psiln_cum);
    put_ld(os, traj.jhat_cum);
    detail::put_u32(os, static_cast<std::uint32_t>(traj.reports.size()));
    for (const EnergyReport& r : traj.reports) put_report(os, r);
    for (std::uint64_t s : traj.report_steps) detail::put_u64(os, s);
    detail::put_u32(os, static_cast<std::uint32_t>(traj.snapshots.size()));
    for (const SnapshotRow& s : traj.snapshots) {
        detail::put_u64(os, s.step);
        detail::put_field(os, cell_field("phi", s.phi));
        detail::put_field(os, cell_field("mu", s.mu));
        detail::put_field(os, cell_field("g", s.g));
        detail::put_field(os, SnapField{1, "vx", s.v.x});
        detail::put_field(os, SnapField{2, "vy", s.v.y});
    }
    detail::put_u32(os, static_cast<std::uint32_t>(traj.phi_history.size()));
    for (const ScalarField& f : traj.phi_history)
        detail::put_field(os, cell_field("phi", f));
    detail::put_field(os, cell_field("phi", traj.phi_live));
    detail::put_field(os, SnapField{1, "vx", traj.v_live.x});
    detail::put_field(os, SnapField{2, "vy", traj.v_live.y});
    detail::put_field(os, cell_field("g", traj.g_live));
    os.flush();
    if (!os) throw ConfigError("write to '" + path + "' failed");
}

Trajectory restore(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CorruptSnapshot("cannot open '" + path + "'");
    char magic[8];
    detail::get_bytes(is, magic, 8);
    if (std::memcmp(magic, "NSCHKPT1", 8) != 0)
        throw CorruptSnapshot("'" + path + "' is not a checkpoint file");
    const std::uint32_t version = detail::get_u32(is);
    if (version != 1)
        throw FormatVersionMismatch("checkpoint version " +
                                    std::to_string(version) +
                                    " is not supported");
    const int nx = static_cast<int>(detail::get_u32(is));
    const int ny = static_cast<int>(detail::get_u32(is));
    if (nx < 4 || ny < 4 || nx > (1 << 20) || ny > (1 << 20))
        throw CorruptSnapshot("implausible grid size in checkpoint");
    const Grid g(nx, ny, 1.0, 1.0);  // extents irrelevant for field sizes
    Trajectory traj;
    traj.step_live = detail::get_u64(is);
    traj.t_live = detail::get_f64(is);
    traj.sup_e_tot = detail::get_f64(is);
    traj.delta_over_max = detail::get_f64(is);
    traj.stab_S_used = detail::get_f64(is);
    traj.phi0_max_abs = detail::get_f64(is);
    traj.lapA_cum = get_ld(is);
    traj.psiln_cum = get_ld(is);
    traj.jhat_cum = get_ld(is);
    const std::uint32_t nrep = detail::get_u32(is);
    if (nrep > (1u << 26)) throw CorruptSnapshot("implausible report count");
    traj.reports.reserve(nrep);
    for (std::uint32_t k = 0; k < nrep; ++k)
        traj.reports.push_back(get_report(is));
    traj.report_steps.reserve(nrep);
    for (std::uint32_t k = 0; k < nrep; ++k)
        traj.report_steps.push_back(detail::get_u64(is));
    const std::uint32_t nsnap = detail::get_u32(is);
    if (nsnap > nrep) throw CorruptSnapshot("implausible snapshot count");
    traj.snapshots.reserve(nsnap);
    for (std::uint32_t k = 0; k < nsnap; ++k) {
        SnapshotRow s;
        s.step = detail::get_u64(is);
        s.phi = as_cell(g, detail::get_field(is, nx, ny));
        s.mu = as_cell(g, detail::get_field(is, nx, ny));
        s.g = as_cell(g, detail::get_field(is, nx, ny));
        const SnapField fx = detail::get_field(is, nx, ny);
        const SnapField fy = detail::get_field(is, nx, ny);
        s.v = as_faces(g, fx, fy);
        traj.snapshots.push_back(std::move(s));
    }
    const std::uint32_t nhist = detail::get_u32(is);
    if (nhist > nrep) throw CorruptSnapshot("implausible history count");
    traj.phi_history.reserve(nhist);
    for (std::uint32_t k = 0; k < nhist; ++k)
        traj.phi_history.push_back(as_cell(g, detail::get_field(is, nx, ny)));
    traj.phi_live = as_cell(g, detail::get_field(is, nx, ny));
    const SnapField fx = detail::get_field(is, nx, ny);
    const SnapField fy = detail::get_field(is, nx, ny);
    traj.v_live = as_faces(g, fx, fy);
    traj.g_live = as_cell(g, detail::get_field(is, nx, ny));
    return traj;
}

}  // namespace nsch
