#pragma once

#include <array>
#include <memory>
#include <vector>

#include "dlas/engine.hpp"

namespace dlas {

/// Snapshot of the six derived count fields at one instant.
struct ZetaView {
    std::vector<long long> zeta;        // tracer system, tracers-as-B view (== xi)
    std::vector<long long> zeta_x;      // tracer system, X added
    std::vector<long long> zeta_xy;     // tracer system, X and Y added
    std::vector<long long> zeta_hat;    // flipped system, tracers-as-B view (== xi)
    std::vector<long long> zeta_hat_y;  // flipped system, Y added
    std::vector<long long> zeta_hat_yx; // flipped system, Y and X added
};

struct CoupledOptions {
    double horizon = 0.0;
    VertexSet h;
    AssertLevel asserts = AssertLevel::full;
    bool invert_tracer_priority = false;
    bool collect_life_curve = false;
    // mutation-analysis hook: drop the rule-(d) fixpoint check so later
    // assertions get a chance to observe the damage themselves
    bool skip_coexistence_check = false;
    double rel_tol = 1e-9; // continuous-mode comparisons
};

struct CouplingOutcome {
    double phi = 0, phi_x = 0, phi_y = 0, phi_xy = 0;
    double life_x = 0, life_y = 0, life_x_hat = 0, life_y_hat = 0;
    bool strict_dx = false, strict_dy = false, strict_e = false, strict_life = false;
    long long checks_run = 0;
    std::vector<std::array<double, 5>> life_curve; // t, Lx, Ly, Lx^, Ly^
};

/// Three engines on shared instructions: the base system, the tracer system
/// (Y prioritized for state A), and the flipped tracer system (X prioritized).
/// Advanced in lockstep over the merged event-time sequence; pathwise checks
/// run at every merged event time when asserts == full.
class CoupledRun {
public:
    CoupledRun(std::shared_ptr<const Graph> graph, const InitialCondition& xi0, Vertex x,
               std::shared_ptr<const Instructions> instr, CoupledOptions options);

    void advance_to(double t);
    void run(); // to the horizon
    double now() const { return now_; }

    ZetaView zeta_view() const;
    const Engine& base() const { return *base_; }
    const Engine& tracer() const { return *tracer_; }
    const Engine& flipped() const { return *flipped_; }

    /// Location-difference identities at the current instant; throws
    /// CouplingViolation on any mismatch.
    void check_difference_identities() const;
    /// L_t^Y >= L-hat_t^Y at the current instant.
    void check_life_dominance() const;

    CouplingOutcome outcome() const; // valid after run()

private:
    void run_checks(double t);
    [[noreturn]] void violation(const std::string& what) const;
    double tol() const;

    std::shared_ptr<const Graph> graph_;
    std::shared_ptr<const Instructions> instr_;
    CoupledOptions opt_;
    Vertex site_;
    std::unique_ptr<Engine> base_, tracer_, flipped_;
    int acc_phi_, acc_phi_x_, acc_phi_xy_, acc_phi_y_;
    double now_ = 0.0;
    double last_checked_ = -1.0;
    mutable CouplingOutcome out_;
};

CouplingOutcome run_coupled(std::shared_ptr<const Graph> graph, const InitialCondition& xi0,
                            Vertex x, std::shared_ptr<const Instructions> instr,
                            const CoupledOptions& options);

/// Exact time the path S^{origin,j} spends in H over path time [0, life):
/// sum over path segments of their overlap with the life window.
double path_time_in(const Instructions& instr, Vertex origin, int j, const VertexSet& h,
                    double life);

} // namespace dlas
