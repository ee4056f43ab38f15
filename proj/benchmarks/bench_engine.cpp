#include <benchmark/benchmark.h>

#include "dlas/experiments.hpp"
#include "dlas/oracle.hpp"
#include "dlas/tracer.hpp"

using namespace dlas;

namespace {

std::shared_ptr<const Graph> line_graph() {
    static auto g = std::make_shared<const Graph>(build_interval(-22, 32));
    return g;
}

void BM_KeyHash(benchmark::State& state) {
    std::uint64_t s = 1;
    for (auto _ : state) {
        s = rng::key_hash(s, rng::Tag::step, 3, 5, 7);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_KeyHash);

void BM_ExampleLineReplica(benchmark::State& state) {
    auto g = line_graph();
    InitialCondition xi0(g->vertex_count());
    xi0.set(g->vertex_at(1), -2);
    xi0.set(g->vertex_at(2), 1);
    VertexSet h({g->vertex_at(0)});
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto instr = std::make_shared<const Instructions>(++seed, g, TimeModel::discrete);
        SimulateOptions opt;
        opt.horizon = 20;
        opt.occupation_set = h;
        benchmark::DoNotOptimize(simulate(g, xi0, instr, opt).v_T);
    }
}
BENCHMARK(BM_ExampleLineReplica);

void BM_ContinuousReplica(benchmark::State& state) {
    auto g = line_graph();
    InitialCondition xi0(g->vertex_count());
    xi0.set(g->vertex_at(1), -2);
    xi0.set(g->vertex_at(2), 1);
    VertexSet h({g->vertex_at(0)});
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto instr = std::make_shared<const Instructions>(++seed, g, TimeModel::continuous);
        SimulateOptions opt;
        opt.horizon = 20;
        opt.occupation_set = h;
        benchmark::DoNotOptimize(simulate(g, xi0, instr, opt).v_T);
    }
}
BENCHMARK(BM_ContinuousReplica);

void BM_CoupledRun(benchmark::State& state) {
    auto g = std::make_shared<const Graph>(build_interval(0, 7));
    InitialCondition xi0(g->vertex_count());
    xi0.set(1, -1);
    xi0.set(3, 2);
    xi0.set(5, -2);
    VertexSet h = VertexSet::all(g->vertex_count());
    CoupledOptions copt;
    copt.horizon = 8;
    copt.h = h;
    copt.asserts = static_cast<AssertLevel>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto instr = std::make_shared<const Instructions>(++seed, g, TimeModel::discrete);
        benchmark::DoNotOptimize(run_coupled(g, xi0, 3, instr, copt).phi_xy);
    }
}
BENCHMARK(BM_CoupledRun)->Arg(0)->Arg(2);

void BM_EnumerateExact(benchmark::State& state) {
    Graph g = build_interval(0, 3);
    InitialCondition xi0(g.vertex_count());
    xi0.set(1, -1);
    xi0.set(2, 1);
    VertexSet h({0});
    EnumerationBudget budget;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            enumerate_exact(g, xi0, 3, Statistic::occupation, h, budget).values.size());
    }
}
BENCHMARK(BM_EnumerateExact);

} // namespace

BENCHMARK_MAIN();
