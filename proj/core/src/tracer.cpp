#include "dlas/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dlas {

CoupledRun::CoupledRun(std::shared_ptr<const Graph> graph, const InitialCondition& xi0, Vertex x,
                       std::shared_ptr<const Instructions> instr, CoupledOptions options)
    : graph_(std::move(graph)), instr_(std::move(instr)), opt_(std::move(options)), site_(x) {
    if (!graph_->valid_vertex(x)) throw SimulationError("tracer site not in graph");
    EngineOptions eopt;
    eopt.asserts = opt_.asserts;
    eopt.invert_tracer_priority = opt_.invert_tracer_priority;
    base_ = std::make_unique<Engine>(graph_, instr_, xi0, TracerMode::none, kNoVertex, eopt);
    tracer_ = std::make_unique<Engine>(graph_, instr_, xi0, TracerMode::tracer, x, eopt);
    flipped_ = std::make_unique<Engine>(graph_, instr_, xi0, TracerMode::flipped, x, eopt);
    acc_phi_ = base_->add_accumulator(View::counts, opt_.h);
    acc_phi_x_ = tracer_->add_accumulator(View::zeta_solo, opt_.h);
    acc_phi_xy_ = tracer_->add_accumulator(View::zeta_pair, opt_.h);
    acc_phi_y_ = flipped_->add_accumulator(View::zeta_solo, opt_.h);
    run_checks(0.0);
}

double CoupledRun::tol() const {
    return instr_->time_model() == TimeModel::discrete ? 0.0 : opt_.rel_tol;
}

void CoupledRun::violation(const std::string& what) const {
    std::ostringstream os;
    os << "{\"master_seed\":" << instr_->master_seed() << ",\"site\":" << site_
       << ",\"horizon\":" << opt_.horizon << ",\"time\":" << now_ << ",\"time_model\":\""
       << (instr_->time_model() == TimeModel::discrete ? "discrete" : "continuous")
       << "\",\"vertices\":" << graph_->vertex_count() << "}";
    throw CouplingViolation(what, os.str());
}

void CoupledRun::advance_to(double target) {
    while (true) {
        double e = std::min({base_->next_event_time(), tracer_->next_event_time(),
                             flipped_->next_event_time()});
        if (e > target) break;
        base_->advance_to(e);
        tracer_->advance_to(e);
        flipped_->advance_to(e);
        now_ = e;
        run_checks(e);
    }
    base_->advance_to(target);
    tracer_->advance_to(target);
    flipped_->advance_to(target);
    now_ = target;
    run_checks(target);
}

void CoupledRun::run() { advance_to(opt_.horizon); }

ZetaView CoupledRun::zeta_view() const {
    int n = graph_->vertex_count();
    ZetaView zv;
    auto fill = [n](std::vector<long long>& out, const Engine& e, View v) {
        out.resize(static_cast<std::size_t>(n));
        for (Vertex z = 0; z < n; ++z) out[static_cast<std::size_t>(z)] = e.view_count(v, z);
    };
    fill(zv.zeta, *tracer_, View::counts);
    fill(zv.zeta_x, *tracer_, View::zeta_solo);
    fill(zv.zeta_xy, *tracer_, View::zeta_pair);
    fill(zv.zeta_hat, *flipped_, View::counts);
    fill(zv.zeta_hat_y, *flipped_, View::zeta_solo);
    fill(zv.zeta_hat_yx, *flipped_, View::zeta_pair);
    return zv;
}

void CoupledRun::check_difference_identities() const {
    for (Vertex z = 0; z < graph_->vertex_count(); ++z) {
        auto tx = tracer_->tracer_x();
        auto ty = tracer_->tracer_y();
        long long ind_x = (tx.at == z) ? 1 : 0;
        long long ind_y = (ty.at == z) ? 1 : 0;
        if (tracer_->view_count(View::zeta_solo, z) - tracer_->view_count(View::counts, z) != ind_x)
            violation("difference identity zeta^X - zeta failed");
        if (tracer_->view_count(View::zeta_pair, z) - tracer_->view_count(View::counts, z) !=
            ind_x + ind_y)
            violation("difference identity zeta^{X,Y} - zeta failed");
        auto fx = flipped_->tracer_x();
        auto fy = flipped_->tracer_y();
        long long ind_fx = (fx.at == z) ? 1 : 0;
        long long ind_fy = (fy.at == z) ? 1 : 0;
        if (flipped_->view_count(View::zeta_solo, z) - flipped_->view_count(View::counts, z) !=
            ind_fy)
            violation("difference identity zeta-hat^Y - zeta-hat failed");
        if (flipped_->view_count(View::zeta_pair, z) - flipped_->view_count(View::counts, z) !=
            ind_fy + ind_fx)
            violation("difference identity zeta-hat^{Y,X} - zeta-hat failed");
    }
}

void CoupledRun::check_life_dominance() const {
    double ly = tracer_->tracer_y().life;
    double ly_hat = flipped_->tracer_y().life;
    double eps = tol() * std::max(1.0, now_);
    if (ly < ly_hat - eps) violation("life dominance L^Y >= L-hat^Y failed");
}

void CoupledRun::run_checks(double t) {
    if (t == last_checked_) return;
    last_checked_ = t;
    if (opt_.collect_life_curve)
        out_.life_curve.push_back({t, tracer_->tracer_x().life, tracer_->tracer_y().life,
                                   flipped_->tracer_x().life, flipped_->tracer_y().life});
    double ly = tracer_->tracer_y().life;
    double ly_hat = flipped_->tracer_y().life;
    double strict_eps =
        instr_->time_model() == TimeModel::discrete ? 0.5 : tol() * std::max(1.0, t);
    if (ly > ly_hat + strict_eps) out_.strict_life = true;
    if (opt_.asserts < AssertLevel::full) return;
    ++out_.checks_run;

    // the tracers-as-B views must equal the base counts, exactly
    for (Vertex z = 0; z < graph_->vertex_count(); ++z) {
        long long xi = base_->view_count(View::counts, z);
        if (tracer_->view_count(View::counts, z) != xi)
            violation("zeta != xi at an event time");
        if (flipped_->view_count(View::counts, z) != xi)
            violation("zeta-hat != xi at an event time");
    }
    check_difference_identities();
    check_life_dominance();

    // Stable coexistence: the non-prioritized tracer may not hold state A
    // while the prioritized one is paused at the same site.
    if (opt_.skip_coexistence_check) return;
    auto tx = tracer_->tracer_x();
    auto ty = tracer_->tracer_y();
    if (tx.state_a && !ty.state_a && tx.at == ty.at)
        violation("tracer system rests with X in state A and Y in state B at one site");
    auto fx = flipped_->tracer_x();
    auto fy = flipped_->tracer_y();
    if (fy.state_a && !fx.state_a && fx.at == fy.at)
        violation("flipped system rests with Y in state A and X in state B at one site");
}

double path_time_in(const Instructions& instr, Vertex origin, int j, const VertexSet& h,
                    double life) {
    double total = 0.0;
    Vertex at = origin;
    if (instr.time_model() == TimeModel::discrete) {
        long long steps = static_cast<long long>(std::llround(life));
        for (long long m = 0; m < steps; ++m) {
            if (h.contains(at)) total += 1.0;
            at = instr.next_position(origin, j, static_cast<int>(m), at);
        }
        return total;
    }
    double seg_start = 0.0;
    int m = 0;
    while (seg_start < life) {
        double seg_end = seg_start + instr.hold(origin, j, m + 1);
        double overlap = std::min(seg_end, life) - seg_start;
        if (overlap > 0 && h.contains(at)) total += overlap;
        at = instr.next_position(origin, j, m, at);
        ++m;
        seg_start = seg_end;
    }
    return total;
}

CouplingOutcome CoupledRun::outcome() const {
    CouplingOutcome o = out_;
    o.phi = base_->accumulator_value(acc_phi_);
    o.phi_x = tracer_->accumulator_value(acc_phi_x_);
    o.phi_xy = tracer_->accumulator_value(acc_phi_xy_);
    o.phi_y = flipped_->accumulator_value(acc_phi_y_);
    o.life_x = tracer_->tracer_x().life;
    o.life_y = tracer_->tracer_y().life;
    o.life_x_hat = flipped_->tracer_x().life;
    o.life_y_hat = flipped_->tracer_y().life;

    double scale = std::max({1.0, o.phi, o.phi_x, o.phi_y, o.phi_xy});
    double eps = tol() * scale;
    double strict_eps = instr_->time_model() == TimeModel::discrete ? 0.5 : eps;
    if (o.phi_x < o.phi - eps) violation("Phi^X >= Phi failed");
    if (o.phi_y < o.phi - eps) violation("Phi^Y >= Phi failed");
    if (o.phi_xy - o.phi_x - o.phi_y + o.phi < -eps)
        violation("Phi^{X,Y} - Phi^X - Phi^Y + Phi >= 0 failed");
    o.strict_dx = o.phi_x > o.phi + strict_eps;
    o.strict_dy = o.phi_y > o.phi + strict_eps;
    o.strict_e = o.phi_xy - o.phi_x - o.phi_y + o.phi > strict_eps;

    if (opt_.asserts >= AssertLevel::full) {
        int k = tracer_->tracer_path_base();
        double rhs_x = path_time_in(*instr_, site_, k, opt_.h, o.life_x);
        double rhs_y = path_time_in(*instr_, site_, k + 1, opt_.h, o.life_y_hat);
        double rhs_xy = rhs_x + path_time_in(*instr_, site_, k + 1, opt_.h, o.life_y);
        if (std::abs((o.phi_x - o.phi) - rhs_x) > eps)
            violation("closed form for Phi^X - Phi failed");
        if (std::abs((o.phi_y - o.phi) - rhs_y) > eps)
            violation("closed form for Phi^Y - Phi failed");
        if (std::abs((o.phi_xy - o.phi) - rhs_xy) > eps)
            violation("closed form for Phi^{X,Y} - Phi failed");
    }
    return o;
}

CouplingOutcome run_coupled(std::shared_ptr<const Graph> graph, const InitialCondition& xi0,
                            Vertex x, std::shared_ptr<const Instructions> instr,
                            const CoupledOptions& options) {
    CoupledRun run(graph, xi0, x, instr, options);
    run.run();
    return run.outcome();
}

} // namespace dlas
