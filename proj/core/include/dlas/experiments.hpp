#pragma once

#include <map>
#include <optional>
#include <string>

#include "dlas/oracle.hpp"
#include "dlas/orders.hpp"
#include "dlas/tracer.hpp"

namespace dlas {

// ------------------------------------------------------------- example line

enum class ExampleVariant { xi, xi_prime, xi_double_prime };

struct ExampleLineSpec {
    ExampleVariant variant = ExampleVariant::xi;
    long long T = 20;
    long long window_lo = -22; // default [-(T+2), T+12]
    long long window_hi = 32;
    long long replicas = 100000;
    std::uint64_t seed = 1;
    TimeModel time_model = TimeModel::discrete;
    int workers = 1;
};

/// Occupation time of H = {0} on the integer window under the chosen initial
/// law. Refuses windows a walk could exit within the horizon.
EmpiricalSample example_line(const ExampleLineSpec& spec);

/// The per-site initial law of the chosen variant on a window graph.
InitialSpec example_line_initial(ExampleVariant variant, const Graph& g);

/// Exact law of the same statistic by oracle enumeration (discrete, small T).
ExactDistribution example_line_exact(ExampleVariant variant, long long T, long long window_lo,
                                     long long window_hi, const EnumerationBudget& budget);

// ------------------------------------------------------------- minimal config

struct MinimalConfigRun {
    EmpiricalSample v;       // the two-point initial law
    EmpiricalSample v_prime; // the alpha/beta initial law
};

struct MinimalConfigPreset {
    MinimalConfigSpec spec;
    double T = 6;
    VertexSet h;
    long long replicas = 100000;
    std::uint64_t seed = 1;
    TimeModel time_model = TimeModel::discrete;
    int workers = 1;
};

MinimalConfigRun minimal_config(const Graph& g, const MinimalConfigPreset& preset);

// ------------------------------------------------------------- parking

struct TreeSpec {
    // regular arity when set; otherwise a Galton-Watson draw per replica
    std::optional<int> regular_arity;
    std::optional<Pmf> offspring;
    int depth = 3;
};

struct ParkingPreset {
    TreeSpec tree;
    Pmf eta = Pmf::delta(1);
    long long replicas = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
};

/// One B-particle per site plus eta(x) A-particles, overlaps cancelled,
/// rootward discrete dynamics with an absorbing root; counts net initial
/// root occupants plus later arrivals.
EmpiricalSample parking_root_count(const ParkingPreset& preset);

// ------------------------------------------------------------- IDLA

struct IdlaPreset {
    std::optional<long long> n; // fixed particle count ...
    std::optional<Pmf> eta;     // ... or a draw per replica
    long long replicas = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
};

/// Aggregate motion time of the DLAS encoding of internal DLA: a root
/// B-particle cancels one of the n A-particles released at the root and
/// every other vertex holds one B-particle; runs to A-extinction.
EmpiricalSample idla_via_dlas(const Graph& g, Vertex root, const IdlaPreset& preset);

/// The matching DLAS initial condition (root count n-1, -1 elsewhere).
InitialCondition idla_initial(const Graph& g, Vertex root, long long n);

/// Monte Carlo sequential IDLA, same kernel, independent stream.
EmpiricalSample sequential_idla(const Graph& g, Vertex root, long long n, long long replicas,
                                std::uint64_t seed, int workers);

// ------------------------------------------------------------- coupling sweep

struct CouplingSweepSpec {
    long long runs = 10000;
    std::uint64_t seed = 1;
    int k_lo = -2, k_hi = 2;
    int max_vertices = 8;
    bool include_example_arena = true;
    double continuous_fraction = 0.2;
    bool invert_tracer_priority = false;
    bool skip_coexistence_check = false;
    bool collect_rows = false;
    long long life_curve_runs = 0; // collect life curves for the first runs
    int workers = 1;
};

struct SweepRow {
    long long run;
    double phi, phi_x, phi_y, phi_xy;
    double life_x, life_y, life_y_hat;
};

struct SweepReport {
    long long runs = 0;
    long long violations = 0;
    std::string first_violation;  // message of the first failure
    std::string first_replay;     // replayable seed dump
    std::map<std::string, long long> violation_kinds;
    long long strict_dx = 0, strict_dy = 0, strict_e = 0, strict_life = 0;
    long long checks_run = 0;
    std::vector<SweepRow> rows; // when collect_rows
    // (run, samples of (t, Lx, Ly, Lx-hat, Ly-hat)) for the first runs
    std::vector<std::pair<long long, std::vector<std::array<double, 5>>>> life_curves;
    bool ok() const { return violations == 0; }
};

/// Runs the coupled tracer construction with full assertions across a seeded
/// instance family; never throws on violations, reports them instead.
SweepReport coupling_sweep(const CouplingSweepSpec& spec);

// ------------------------------------------------------------- window convergence

struct WindowConvergenceSpec {
    ExampleVariant variant = ExampleVariant::xi_prime;
    long long T = 20;
    std::vector<long long> radii = {40, 80, 160};
    long long replicas = 2000;
    std::uint64_t seed = 1;
    TimeModel time_model = TimeModel::continuous;
    int workers = 1;
};

struct WindowConvergenceReport {
    std::vector<long long> radii;
    // fraction of replicas whose V matches exactly between consecutive radii
    std::vector<double> stabilization;
    double final_stabilization = 0;
};

WindowConvergenceReport window_convergence(const WindowConvergenceSpec& spec);

// ------------------------------------------------------------- helpers

/// Advance a plain engine until no event can occur; throws past step_guard.
void run_to_quiescence(Engine& eng, double step_guard = 1e7);

} // namespace dlas
