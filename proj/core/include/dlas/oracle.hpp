#pragma once

#include <array>
#include <cstdint>

#include "dlas/exact_dist.hpp"
#include "dlas/instructions.hpp"

namespace dlas {

/// Ground-truth generators, implemented independently of the engine: the
/// dynamics here run on exchangeability-reduced count states (co-located
/// like particles are interchangeable in law), so the enumeration shares no
/// code path with the particle-registry engine it cross-checks.
///
/// Discrete time only; continuous-time exact enumeration is out of scope.

struct EnumerationBudget {
    long long max_states = 2'000'000; // per-level live state bound
    long long max_worlds = 5'000'000; // replay-DFS world bound
    long long step_cap = 128;         // cap for unbounded statistics (overflow bucket)
    long long max_time = 64;
};

enum class Statistic { occupation, motion, root_arrivals };

/// Exact pushforward law of the statistic at integer horizon T.
ExactDistribution enumerate_exact(const Graph& g, const InitialCondition& xi0, long long T,
                                  Statistic stat, const VertexSet& h,
                                  const EnumerationBudget& budget);

/// Law of the aggregate motion time run to A-extinction, values above
/// budget.step_cap pooled into the overflow bucket.
ExactDistribution enumerate_motion_to_extinction(const Graph& g, const InitialCondition& xi0,
                                                 const EnumerationBudget& budget);

enum class TracerStatistic { v_solo, v_pair };

/// Exact law of V_T^X / V_T^{X,Y} from the tracer system (flipped = false)
/// or V_T^Y / V_T^{Y,X} from the flipped system (flipped = true), with the
/// two tracers added at x per the coupling construction.
ExactDistribution enumerate_tracer_exact(const Graph& g, const InitialCondition& xi0, Vertex x,
                                         long long T, TracerStatistic stat, const VertexSet& h,
                                         bool flipped, const EnumerationBudget& budget);

/// Exact joint law of (Phi, Phi^X, Phi^Y, Phi^{X,Y}) across the base, tracer
/// and flipped systems sharing one instruction realization. Particle-level
/// replay enumeration; tiny instances only.
struct QuadrupleAtom {
    std::array<long long, 4> value; // Phi, Phi^X, Phi^Y, Phi^{X,Y}
    Rational prob;
};
std::vector<QuadrupleAtom> enumerate_quadruple(const Graph& g, const InitialCondition& xi0,
                                               Vertex x, long long T, const VertexSet& h,
                                               const EnumerationBudget& budget);

enum class PhiKind { identity, square, stop_loss };

struct HCurveRow {
    long long k;
    Rational h;
    Rational dh;  // h(k+1) - h(k)
    Rational d2h; // h(k+2) - 2h(k+1) + h(k)
};

/// h(k) = E phi(V_T) under xi_{0,k} (xi0 with the count at x replaced by k),
/// with first and second differences. phi = identity, square, or
/// max(v - a, 0).
std::vector<HCurveRow> exact_h_curve(const Graph& g, const InitialCondition& xi0, Vertex x,
                                     long long k_lo, long long k_hi, PhiKind phi, Rational a,
                                     long long T, const VertexSet& h,
                                     const EnumerationBudget& budget);

/// One sequential internal-DLA sample: particles released one at a time from
/// the root walk until the first unoccupied vertex (the root starts
/// unoccupied); returns the combined number of jumps.
long long sequential_idla_sample(const Graph& g, Vertex root, long long n, std::uint64_t seed);

/// Exact law of the combined jump count, overflow bucket beyond step_cap.
ExactDistribution enumerate_idla_exact(const Graph& g, Vertex root, long long n,
                                       const EnumerationBudget& budget);

} // namespace dlas
