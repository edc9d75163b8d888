#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nsch/energy.hpp"
#include "nsch/flow.hpp"
#include "nsch/material.hpp"
#include "nsch/phasefield.hpp"
#include "nsch/types.hpp"

namespace nsch {

enum class IcType { Random, Stripe, Disk, Constant };

// Everything a run depends on. Defaults describe the desk-scale case:
// 64 x 64 unit box, dt = 1e-4, t_end = 0.05, eps = 1e-2.
struct SimConfig {
    int nx = 64, ny = 64;
    double lx = 1.0, ly = 1.0;

    MaterialParams material;

    double dt = 1e-4;
    double t_end = 0.05;

    ChScheme scheme = ChScheme::Stabilized;
    double c_stab = 0.05;
    double stab_s = -1.0;  // < 0: derived from eps and the initial envelope
    double ch_tol = 1e-12;

    IcType ic_type = IcType::Random;
    double ic_mean = 0.0;    // also the value of the constant IC
    double ic_amp = 0.05;    // random perturbation amplitude
    double ic_width = 0.02;  // tanh interface width parameter
    double ic_radius = 0.25;
    double ic_x0 = 0.5, ic_y0 = 0.5;
    double ic_cap = 1.0 - 1e-5;  // clamp for non-constant profiles
    std::uint64_t seed = 12345;

    bool flow_enabled = true;
    double v0_amp = 0.0;  // streamfunction amplitude of the seeded velocity
    int v0_modes = 1;
    bool include_bj = true;
    double tol_visc = 1e-10;
    double tol_poisson = 1e-10;

    bool ns_first = false;  // flip the splitting order (diagnostics only)
    int report_every = 1;
    int snap_every = 0;  // 0: first and last report rows only
    int max_iter_factor = 10;
    bool keep_snapshots = true;  // retain snapshot rows inside the Trajectory

    std::vector<double> sweep_eps;  // consumed by sweep_eps only
};

// Stored fields of one report row: phi and v/g are the pre-step state at
// that time, mu is the forward potential whose flux moved phi to the next
// step (instantaneous on the final row). This is exactly enough to rebuild
// the whole row: J/Jhat from (phi, mu), rho from phi.
struct SnapshotRow {
    std::uint64_t step = 0;
    ScalarField phi, mu, g;
    FaceField v;
};

struct Trajectory {
    std::vector<EnergyReport> reports;
    std::vector<std::uint64_t> report_steps;
    std::vector<SnapshotRow> snapshots;    // subset of report rows
    std::vector<ScalarField> phi_history;  // per report row, only if requested

    // Live state, sufficient to continue the run bitwise.
    ScalarField phi_live;
    FaceField v_live;
    ScalarField g_live;
    std::uint64_t step_live = 0;
    double t_live = 0.0;
    long double lapA_cum = 0.0L;   // int_0^t |lap A|^2
    long double psiln_cum = 0.0L;  // int_0^t |psi_ln'(clamped phi)|^2
    long double jhat_cum = 0.0L;   // int_0^t |Jhat|^2
    double sup_e_tot = 0.0;
    double delta_over_max = 0.0;  // max over steps of (|phi|_inf - 1)+
    double stab_S_used = 0.0;
    double phi0_max_abs = 0.0;
};

// Called once per emitted report row; snap is null when the row has no
// stored fields.
struct RowOutput {
    const EnergyReport* row = nullptr;
    std::uint64_t step = 0;
    const SnapshotRow* snap = nullptr;
};
using Observer = std::function<void(const RowOutput&)>;

Grid make_grid(const SimConfig& cfg);
MaterialModel make_material(const SimConfig& cfg);

// Seeded initial order parameter; non-constant profiles are clamped to
// +-ic_cap and the random type is recentered to its mean exactly.
ScalarField initial_phi(const Grid& g, const SimConfig& cfg);

// Discretely solenoidal seeded velocity: the curl of a corner streamfunction
// built from sine modes, then projected with rho(phi0). Zero when v0_amp = 0.
FaceField initial_velocity(const Grid& g, const SimConfig& cfg,
                           const ScalarField& phi0, const MaterialModel& M);

// Full time loop: CH step then NS step per dt (order flipped by ns_first),
// reports on the report_every cadence plus the final step. Solver errors are
// rethrown with the step index attached after already-emitted rows have
// reached the observer.
Trajectory run(const SimConfig& cfg, const Observer& obs = {},
               bool keep_phi_history = false);

// Continue a finished or checkpointed trajectory to cfg.t_end. The stored
// final row is re-emitted with forward accounting, so the result is bitwise
// identical to an uninterrupted run with the same config.
Trajectory resume(const SimConfig& cfg, Trajectory traj,
                  const Observer& obs = {}, bool keep_phi_history = false);

struct SweepRow {
    SweepSummary summary;
    double dist_phi_prev = 0.0;    // L2(Q_T) distance to the previous eps
    double dist_gradA_prev = 0.0;  // same for grad A(phi); NaN on first row
};

struct SweepResult {
    std::vector<SweepRow> rows;
    BoundsVerdict verdict;
};

using RunObserverFactory =
    std::function<Observer(std::size_t idx, double eps)>;

// Runs cfg once per entry of cfg.sweep_eps (>= 3 values, strictly decreasing
// in (0,1)), identical seed and IC across runs; distances use
// piecewise-constant-in-time interpolation on the report cadence.
SweepResult sweep_eps(const SimConfig& cfg,
                      const RunObserverFactory& factory = {});

// Bit-exact trajectory serialization (format NSCHKPT1 version 1).
void checkpoint(const Trajectory& traj, const std::string& path);
Trajectory restore(const std::string& path);

}  // namespace nsch
