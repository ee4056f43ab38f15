#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "dlas/instructions.hpp"

namespace dlas {

enum class TracerMode { none, tracer, flipped };

/// Count field evaluated by occupation accumulators.
///  - counts:    xi (mode none) or zeta / zeta-hat (paused tracers count as B)
///  - zeta_solo: the system's single-addition view (zeta^X, resp. zeta-hat^Y)
///  - zeta_pair: the two-addition view (zeta^{X,Y}, resp. zeta-hat^{Y,X})
enum class View { counts, zeta_solo, zeta_pair };

struct EngineOptions {
    AssertLevel asserts = AssertLevel::invariants;
    bool invert_tracer_priority = false; // mutation hook: consistently swaps the
                                         // state-A priority and the sentinel bravenesses
    bool log_events = false;
};

struct EventRecord {
    double time;
    Vertex vertex;
    int delta;    // change in the per-species particle count at the vertex
    char species; // 'A' or 'B'
};

struct TracerView {
    bool state_a;
    double life;
    Vertex at;
    int path_pos;
};

class Engine {
public:
    Engine(std::shared_ptr<const Graph> graph, std::shared_ptr<const Instructions> instr,
           const InitialCondition& xi0, TracerMode mode, Vertex tracer_site,
           EngineOptions options);

    double now() const { return now_; }
    static constexpr double kNever = std::numeric_limits<double>::infinity();
    double next_event_time() const;
    /// Integrates accumulators and tracer lives to t, processing every event
    /// with time <= t at its exact time. t must be >= now().
    void advance_to(double t);
    /// True when no further event can occur (no mobile A-side particle).
    bool quiescent() const;

    int add_accumulator(View view, VertexSet h);
    double accumulator_value(int idx) const;

    // Count fields at the current instant.
    long long alpha(Vertex z) const { return alpha_[static_cast<std::size_t>(z)]; }
    long long beta(Vertex z) const {
        return static_cast<long long>(b_at_[static_cast<std::size_t>(z)].size());
    }
    /// xi for mode none; otherwise zeta, the paused-tracers-as-B view.
    long long view_count(View view, Vertex z) const;

    TracerView tracer_x() const;
    TracerView tracer_y() const;
    /// Path identity of the X-tracer: S^{site, k} with k = max(xi0(site)+1, 1).
    int tracer_path_base() const { return tracer_path_base_; }
    Vertex tracer_site() const { return tracer_site_; }

    long long root_arrivals() const { return root_arrivals_; }
    long long live_a_count() const { return live_a_; }
    const std::vector<EventRecord>& events() const { return events_; }

    const Graph& graph() const { return *graph_; }
    TracerMode mode() const { return mode_; }

private:
    struct AParticle {
        Vertex origin;
        int j;
        int path_pos = 0;
        Vertex at;
        Braveness h;
        bool alive = true;
        double next_jump = 0.0;
    };
    struct TracerSlot {
        bool present = false;
        bool is_x = false;
        Vertex origin = kNoVertex;
        int path_j = 0;
        bool state_a = true;
        double life = 0.0;
        int path_pos = 0;
        Vertex at = kNoVertex;
        Braveness h;
        double next_path_epoch = 0.0; // path time of the next jump (continuous)
        double next_jump = std::numeric_limits<double>::infinity();
    };
    struct Accumulator {
        View view;
        VertexSet h;
        double rate = 0.0;
        double value = 0.0;
    };

    void integrate_to(double t);
    void process_events_at(double t);
    void discrete_round(double t);
    void continuous_jumps(double t);
    void resolve_vertex(Vertex z, double t);
    void recompute_rates();
    bool mobile(const AParticle& p) const;
    bool tracer_mobile(const TracerSlot& s) const;
    void schedule_tracer(TracerSlot& s, double t);
    void pause_tracer(TracerSlot& s);
    void move_particle(AParticle& p, Vertex dest, double t);
    void kill_particle(AParticle& p, double t);
    TracerSlot* tracer_in_state(Vertex z, bool state_a, bool prefer_priority);
    bool prioritized_is_x() const;

    std::shared_ptr<const Graph> graph_;
    std::shared_ptr<const Instructions> instr_;
    EngineOptions opt_;
    TracerMode mode_;
    Vertex tracer_site_ = kNoVertex;
    int tracer_path_base_ = 1;

    double now_ = 0.0;
    std::vector<AParticle> as_;
    std::vector<std::vector<Braveness>> b_at_;
    std::vector<long long> alpha_;
    std::vector<std::vector<int>> a_ids_at_; // alive nontracer A particle ids per vertex
    TracerSlot tx_, ty_;
    long long live_a_ = 0;
    long long root_arrivals_ = 0;
    std::vector<Accumulator> accs_;
    std::vector<EventRecord> events_;
    std::vector<Vertex> touched_;
};

/// Pure pairing rule on braveness multisets: repeatedly remove the current
/// bravest A and bravest B as a pair until one side is empty.
struct SiteResolution {
    std::vector<Braveness> surviving_a;
    std::vector<Braveness> surviving_b;
    std::vector<std::pair<Braveness, Braveness>> pairs;
};
SiteResolution resolve_site(std::vector<Braveness> a, std::vector<Braveness> b);

struct SimulateOptions {
    double horizon = 0.0;
    VertexSet occupation_set;        // H for v_T
    bool log_events = false;
    std::vector<double> checkpoints; // times at which V is sampled
    AssertLevel asserts = AssertLevel::invariants;
};

struct Trajectory {
    InitialCondition xi0;
    double horizon = 0.0;
    std::vector<EventRecord> events;
    std::vector<long long> final_a;
    std::vector<long long> final_b;
    double v_T = 0.0;      // occupation of H
    double motion_T = 0.0; // occupation with H = all vertices
    long long root_arrivals = 0;
    std::vector<std::pair<double, double>> checkpoint_values;
};

Trajectory simulate(std::shared_ptr<const Graph> graph, const InitialCondition& xi0,
                    std::shared_ptr<const Instructions> instr, const SimulateOptions& options);

/// Exact piecewise-constant occupation integral recovered from an event log.
/// Requires the trajectory to have been recorded with log_events and
/// T <= horizon.
double occupation_time(const Trajectory& traj, const VertexSet& h, double T);
double aggregate_motion_time(const Trajectory& traj, double T);

} // namespace dlas
