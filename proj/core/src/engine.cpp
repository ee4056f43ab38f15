#include "dlas/engine.hpp"

#include <algorithm>
#include <cmath>

namespace dlas {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SiteResolution resolve_site(std::vector<Braveness> a, std::vector<Braveness> b) {
    std::sort(a.begin(), a.end(), std::greater<>());
    std::sort(b.begin(), b.end(), std::greater<>());
    SiteResolution r;
    std::size_t k = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < k; ++i) r.pairs.emplace_back(a[i], b[i]);
    r.surviving_a.assign(a.begin() + static_cast<std::ptrdiff_t>(k), a.end());
    r.surviving_b.assign(b.begin() + static_cast<std::ptrdiff_t>(k), b.end());
    return r;
}

Engine::Engine(std::shared_ptr<const Graph> graph, std::shared_ptr<const Instructions> instr,
               const InitialCondition& xi0, TracerMode mode, Vertex tracer_site,
               EngineOptions options)
    : graph_(std::move(graph)), instr_(std::move(instr)), opt_(options), mode_(mode),
      tracer_site_(tracer_site) {
    int n = graph_->vertex_count();
    if (xi0.vertex_count() != n) throw SimulationError("initial condition size mismatch");
    b_at_.resize(static_cast<std::size_t>(n));
    alpha_.assign(static_cast<std::size_t>(n), 0);
    a_ids_at_.resize(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) {
        long long c = xi0.count(v);
        for (long long j = 1; j <= c; ++j) {
            AParticle p;
            p.origin = v;
            p.j = static_cast<int>(j);
            p.at = v;
            p.h = instr_->braveness(v, p.j);
            as_.push_back(p);
            a_ids_at_[static_cast<std::size_t>(v)].push_back(static_cast<int>(as_.size()) - 1);
            ++alpha_[static_cast<std::size_t>(v)];
            ++live_a_;
        }
        for (long long j = 1; j <= -c; ++j)
            b_at_[static_cast<std::size_t>(v)].push_back(instr_->braveness(v, -static_cast<int>(j)));
    }
    if (mode_ != TracerMode::none) {
        if (!graph_->valid_vertex(tracer_site_)) throw SimulationError("tracer site not in graph");
        tracer_path_base_ = static_cast<int>(std::max(xi0.count(tracer_site_) + 1, 1LL));
        tx_.present = ty_.present = true;
        tx_.is_x = true;
        ty_.is_x = false;
        tx_.origin = ty_.origin = tracer_site_;
        tx_.path_j = tracer_path_base_;
        ty_.path_j = tracer_path_base_ + 1;
        tx_.at = ty_.at = tracer_site_;
        bool x_prior = prioritized_is_x();
        tx_.h = x_prior ? Braveness::tracer_priority() : Braveness::tracer_secondary();
        ty_.h = x_prior ? Braveness::tracer_secondary() : Braveness::tracer_priority();
        // canonical initial states: both tracers placed in state A atop xi0 and
        // the site resolved once at time 0
        resolve_vertex(tracer_site_, 0.0);
    }
    if (instr_->time_model() == TimeModel::continuous) {
        for (auto& p : as_)
            if (mobile(p)) p.next_jump = instr_->hold(p.origin, p.j, 1);
        for (TracerSlot* s : {&tx_, &ty_}) {
            if (!s->present) continue;
            s->next_path_epoch = instr_->hold(s->origin, s->path_j, 1);
            if (tracer_mobile(*s)) schedule_tracer(*s, 0.0);
        }
    }
}

bool Engine::prioritized_is_x() const {
    bool x = (mode_ == TracerMode::flipped); // rule (d): Y prioritized in the tracer system
    return opt_.invert_tracer_priority ? !x : x;
}

bool Engine::mobile(const AParticle& p) const {
    if (!p.alive) return false;
    if (graph_->directed_to_root() && graph_->root() && p.at == *graph_->root()) return false;
    return true;
}

bool Engine::tracer_mobile(const TracerSlot& s) const {
    if (!s.present || !s.state_a) return false;
    if (graph_->directed_to_root() && graph_->root() && s.at == *graph_->root()) return false;
    return true;
}

void Engine::schedule_tracer(TracerSlot& s, double t) {
    s.next_jump = t + (s.next_path_epoch - s.life);
}

void Engine::pause_tracer(TracerSlot& s) {
    s.state_a = false;
    s.next_jump = kInf;
}

double Engine::next_event_time() const {
    if (instr_->time_model() == TimeModel::discrete) {
        if (quiescent()) return kNever;
        return std::floor(now_) + 1.0;
    }
    double e = kNever;
    for (const auto& p : as_)
        if (mobile(p)) e = std::min(e, p.next_jump);
    for (const TracerSlot* s : {&tx_, &ty_})
        if (tracer_mobile(*s)) e = std::min(e, s->next_jump);
    return e;
}

bool Engine::quiescent() const {
    if (tracer_mobile(tx_) || tracer_mobile(ty_)) return false;
    for (const auto& p : as_)
        if (mobile(p)) return false;
    return true;
}

void Engine::integrate_to(double t) {
    double dt = t - now_;
    if (dt < 0) throw SimulationError("cannot integrate backwards");
    if (dt > 0) {
        for (auto& acc : accs_) acc.value += acc.rate * dt;
        if (tx_.present && tx_.state_a) tx_.life += dt;
        if (ty_.present && ty_.state_a) ty_.life += dt;
    }
    now_ = t;
}

void Engine::advance_to(double t) {
    if (t < now_) throw SimulationError("advance_to into the past");
    while (true) {
        double e = next_event_time();
        if (e > t) break;
        integrate_to(e);
        process_events_at(e);
        recompute_rates();
    }
    integrate_to(t);
}

void Engine::process_events_at(double t) {
    touched_.clear();
    if (instr_->time_model() == TimeModel::discrete) {
        discrete_round(t);
        std::sort(touched_.begin(), touched_.end());
        touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());
        for (Vertex z : touched_) resolve_vertex(z, t);
    } else {
        continuous_jumps(t); // resolves arrival sites inline, jump by jump
    }
}

void Engine::move_particle(AParticle& p, Vertex dest, double t) {
    if (opt_.log_events) {
        events_.push_back({t, p.at, -1, 'A'});
        events_.push_back({t, dest, +1, 'A'});
    }
    auto& from_ids = a_ids_at_[static_cast<std::size_t>(p.at)];
    int id = static_cast<int>(&p - as_.data());
    from_ids.erase(std::find(from_ids.begin(), from_ids.end(), id));
    --alpha_[static_cast<std::size_t>(p.at)];
    p.at = dest;
    a_ids_at_[static_cast<std::size_t>(dest)].push_back(id);
    ++alpha_[static_cast<std::size_t>(dest)];
    if (graph_->root() && dest == *graph_->root()) ++root_arrivals_;
    touched_.push_back(dest);
}

void Engine::kill_particle(AParticle& p, double t) {
    if (opt_.log_events) events_.push_back({t, p.at, -1, 'A'});
    auto& ids = a_ids_at_[static_cast<std::size_t>(p.at)];
    int id = static_cast<int>(&p - as_.data());
    ids.erase(std::find(ids.begin(), ids.end(), id));
    --alpha_[static_cast<std::size_t>(p.at)];
    p.alive = false;
    --live_a_;
}

void Engine::discrete_round(double t) {
    // All jumps in a round are simultaneous: destinations are computed from
    // the pre-round positions, then applied; collisions resolve pooled.
    std::vector<std::pair<int, Vertex>> moves;
    for (std::size_t i = 0; i < as_.size(); ++i) {
        if (!mobile(as_[i])) continue;
        Vertex dest = instr_->next_position(as_[i].origin, as_[i].j, as_[i].path_pos, as_[i].at);
        moves.emplace_back(static_cast<int>(i), dest);
    }
    struct TracerMove {
        TracerSlot* s;
        Vertex dest;
    };
    std::vector<TracerMove> tmoves;
    for (TracerSlot* s : {&tx_, &ty_}) {
        if (!tracer_mobile(*s)) continue;
        tmoves.push_back({s, instr_->next_position(s->origin, s->path_j, s->path_pos, s->at)});
    }
    for (auto& [i, dest] : moves) {
        as_[static_cast<std::size_t>(i)].path_pos += 1;
        move_particle(as_[static_cast<std::size_t>(i)], dest, t);
    }
    for (auto& tm : tmoves) {
        tm.s->path_pos += 1;
        tm.s->at = tm.dest;
        touched_.push_back(tm.dest);
    }
}

void Engine::continuous_jumps(double t) {
    struct Jumper {
        std::uint64_t label;
        int j;
        int particle_id; // -1 for tracers
        TracerSlot* slot;
    };
    std::vector<Jumper> due;
    for (std::size_t i = 0; i < as_.size(); ++i)
        if (mobile(as_[i]) && as_[i].next_jump == t)
            due.push_back({graph_->stream_label(as_[i].origin), as_[i].j,
                           static_cast<int>(i), nullptr});
    for (TracerSlot* s : {&tx_, &ty_})
        if (tracer_mobile(*s) && s->next_jump == t)
            due.push_back({graph_->stream_label(s->origin), s->path_j, -1, s});
    // simultaneity has probability zero; float collisions break by (x, j)
    std::sort(due.begin(), due.end(), [](const Jumper& a, const Jumper& b) {
        return std::tie(a.label, a.j) < std::tie(b.label, b.j);
    });
    for (auto& jp : due) {
        if (jp.slot) {
            TracerSlot& s = *jp.slot;
            if (!tracer_mobile(s) || s.next_jump != t) continue; // paused meanwhile
            Vertex dest = instr_->next_position(s.origin, s.path_j, s.path_pos, s.at);
            s.path_pos += 1;
            s.at = dest;
            s.next_path_epoch += instr_->hold(s.origin, s.path_j, s.path_pos + 1);
            schedule_tracer(s, t);
            touched_.push_back(dest);
            resolve_vertex(dest, t);
        } else {
            AParticle& p = as_[static_cast<std::size_t>(jp.particle_id)];
            if (!mobile(p) || p.next_jump != t) continue; // killed meanwhile
            Vertex dest = instr_->next_position(p.origin, p.j, p.path_pos, p.at);
            p.path_pos += 1;
            p.next_jump += instr_->hold(p.origin, p.j, p.path_pos + 1);
            move_particle(p, dest, t);
            resolve_vertex(dest, t);
        }
    }
}

Engine::TracerSlot* Engine::tracer_in_state(Vertex z, bool state_a, bool /*prefer_priority*/) {
    TracerSlot* best = nullptr;
    for (TracerSlot* s : {&tx_, &ty_}) {
        if (!s->present || s->state_a != state_a || s->at != z) continue;
        if (!best || s->h > best->h) best = s;
    }
    return best;
}

void Engine::resolve_vertex(Vertex z, double t) {
    auto& bz = b_at_[static_cast<std::size_t>(z)];
    while (true) {
        // bravest A-side occupant
        AParticle* ba = nullptr;
        for (int id : a_ids_at_[static_cast<std::size_t>(z)]) {
            AParticle& p = as_[static_cast<std::size_t>(id)];
            if (!ba || p.h > ba->h) ba = &p;
        }
        TracerSlot* ta = tracer_in_state(z, /*state_a=*/true, true);
        bool a_is_tracer = false;
        if (!ba && !ta) break;
        if (ba && ta)
            a_is_tracer = (ta->h > ba->h); // never true: tracers sit below [0,1]
        else
            a_is_tracer = (ta != nullptr);

        // bravest B-side occupant
        int bi = -1;
        for (int i = 0; i < static_cast<int>(bz.size()); ++i)
            if (bi < 0 || bz[static_cast<std::size_t>(i)] > bz[static_cast<std::size_t>(bi)]) bi = i;
        TracerSlot* tb = tracer_in_state(z, /*state_a=*/false, true);
        bool b_is_tracer = false;
        if (bi < 0 && !tb) break;
        if (bi >= 0 && tb)
            b_is_tracer = (tb->h > bz[static_cast<std::size_t>(bi)]);
        else
            b_is_tracer = (tb != nullptr);

        if (!a_is_tracer && !b_is_tracer) {
            // rule (a): mutual annihilation
            if (opt_.log_events) events_.push_back({t, z, -1, 'B'});
            kill_particle(*ba, t);
            bz.erase(bz.begin() + bi);
        } else if (a_is_tracer && !b_is_tracer) {
            // rule (b): the B-particle annihilates, the tracer pauses
            if (opt_.log_events) events_.push_back({t, z, -1, 'B'});
            bz.erase(bz.begin() + bi);
            pause_tracer(*ta);
        } else if (!a_is_tracer && b_is_tracer) {
            // rule (c): the A-particle annihilates, the tracer resumes
            kill_particle(*ba, t);
            tb->state_a = true;
            if (instr_->time_model() == TimeModel::continuous && tracer_mobile(*tb))
                schedule_tracer(*tb, t);
        } else {
            // rule (d): both tracers; the prioritized one keeps or takes state A
            bool ta_is_prior = (ta->is_x == prioritized_is_x());
            if (ta_is_prior) break; // exempt configuration, no interaction
            pause_tracer(*ta);
            tb->state_a = true;
            if (instr_->time_model() == TimeModel::continuous && tracer_mobile(*tb))
                schedule_tracer(*tb, t);
        }
    }
    if (opt_.asserts >= AssertLevel::invariants) {
        if (alpha_[static_cast<std::size_t>(z)] > 0 && !bz.empty())
            throw SimulationError("site holds both species after resolution");
    }
}

void Engine::recompute_rates() {
    for (auto& acc : accs_) {
        double r = 0.0;
        for (Vertex z : acc.h) {
            long long c = view_count(acc.view, z);
            if (c > 0) r += static_cast<double>(c);
        }
        acc.rate = r;
    }
}

int Engine::add_accumulator(View view, VertexSet h) {
    accs_.push_back({view, std::move(h), 0.0, 0.0});
    recompute_rates();
    return static_cast<int>(accs_.size()) - 1;
}

double Engine::accumulator_value(int idx) const {
    return accs_[static_cast<std::size_t>(idx)].value;
}

long long Engine::view_count(View view, Vertex z) const {
    long long c = alpha(z) - beta(z);
    if (mode_ == TracerMode::none) return c;
    const TracerSlot& solo = (mode_ == TracerMode::tracer) ? tx_ : ty_;
    const TracerSlot& other = (mode_ == TracerMode::tracer) ? ty_ : tx_;
    auto at_z = [z](const TracerSlot& s) { return s.present && s.at == z; };
    switch (view) {
    case View::counts:
        if (at_z(solo) && !solo.state_a) --c;
        if (at_z(other) && !other.state_a) --c;
        return c;
    case View::zeta_solo:
        if (at_z(solo) && solo.state_a) ++c;
        if (at_z(other) && !other.state_a) --c;
        return c;
    case View::zeta_pair:
        if (at_z(solo) && solo.state_a) ++c;
        if (at_z(other) && other.state_a) ++c;
        return c;
    }
    return c;
}

TracerView Engine::tracer_x() const { return {tx_.state_a, tx_.life, tx_.at, tx_.path_pos}; }
TracerView Engine::tracer_y() const { return {ty_.state_a, ty_.life, ty_.at, ty_.path_pos}; }

Trajectory simulate(std::shared_ptr<const Graph> graph, const InitialCondition& xi0,
                    std::shared_ptr<const Instructions> instr, const SimulateOptions& options) {
    if (options.horizon < 0) throw SimulationError("negative horizon");
    EngineOptions eopt;
    eopt.asserts = options.asserts;
    eopt.log_events = options.log_events;
    Engine eng(graph, instr, xi0, TracerMode::none, kNoVertex, eopt);
    int acc_h = eng.add_accumulator(View::counts, options.occupation_set);
    int acc_all = eng.add_accumulator(View::counts, VertexSet::all(graph->vertex_count()));
    Trajectory traj;
    traj.xi0 = xi0;
    traj.horizon = options.horizon;
    std::vector<double> cps = options.checkpoints;
    std::sort(cps.begin(), cps.end());
    for (double cp : cps) {
        if (cp < 0 || cp > options.horizon) throw SimulationError("checkpoint outside horizon");
        eng.advance_to(cp);
        traj.checkpoint_values.emplace_back(cp, eng.accumulator_value(acc_h));
    }
    eng.advance_to(options.horizon);
    traj.v_T = eng.accumulator_value(acc_h);
    traj.motion_T = eng.accumulator_value(acc_all);
    traj.root_arrivals = eng.root_arrivals();
    traj.events = eng.events();
    traj.final_a.resize(static_cast<std::size_t>(graph->vertex_count()));
    traj.final_b.resize(static_cast<std::size_t>(graph->vertex_count()));
    for (Vertex v = 0; v < graph->vertex_count(); ++v) {
        traj.final_a[static_cast<std::size_t>(v)] = eng.alpha(v);
        traj.final_b[static_cast<std::size_t>(v)] = eng.beta(v);
    }
    return traj;
}

double occupation_time(const Trajectory& traj, const VertexSet& h, double T) {
    if (T < 0 || T > traj.horizon) throw SimulationError("T outside simulated horizon");
    int n = traj.xi0.vertex_count();
    std::vector<long long> a(static_cast<std::size_t>(n), 0), b(static_cast<std::size_t>(n), 0);
    for (Vertex v = 0; v < n; ++v) {
        long long c = traj.xi0.count(v);
        if (c > 0) a[static_cast<std::size_t>(v)] = c;
        if (c < 0) b[static_cast<std::size_t>(v)] = -c;
    }
    auto rate = [&] {
        double r = 0.0;
        for (Vertex z : h) {
            long long c = a[static_cast<std::size_t>(z)] - b[static_cast<std::size_t>(z)];
            if (c > 0) r += static_cast<double>(c);
        }
        return r;
    };
    double value = 0.0, prev = 0.0, cur_rate = rate();
    std::size_t i = 0;
    while (i < traj.events.size() && traj.events[i].time <= T) {
        double t = traj.events[i].time;
        value += cur_rate * (t - prev);
        prev = t;
        while (i < traj.events.size() && traj.events[i].time == t) {
            const auto& ev = traj.events[i];
            auto& side = (ev.species == 'A') ? a : b;
            side[static_cast<std::size_t>(ev.vertex)] += ev.delta;
            ++i;
        }
        cur_rate = rate();
    }
    value += cur_rate * (T - prev);
    return value;
}

double aggregate_motion_time(const Trajectory& traj, double T) {
    return occupation_time(traj, VertexSet::all(traj.xi0.vertex_count()), T);
}

} // namespace dlas
