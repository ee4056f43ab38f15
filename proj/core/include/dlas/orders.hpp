#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "dlas/exact_dist.hpp"

namespace dlas {

struct EmpiricalSample {
    std::vector<double> values; // kept sorted
    std::uint64_t seed = 0;     // provenance: master seed of the producing run
    long long replicas = 0;

    static EmpiricalSample from(std::vector<double> v, std::uint64_t seed);
    double mean() const;
    double variance() const;
    double stop_loss(double a) const;
    double prob_geq(double a) const;
    double prob_zero() const;
    std::size_t size() const { return values.size(); }
};

using Distribution = std::variant<ExactDistribution, EmpiricalSample>;

enum class Relation { icx, sd };

/// Exact mode decides holds/fails. Statistical mode never claims holds: it
/// reports fails when some simultaneous band lies entirely below zero,
/// not_falsified otherwise, and inconclusive on insufficient data.
enum class Verdict { holds, not_falsified, inconclusive, fails };

const char* verdict_name(Verdict v);

struct ThresholdGap {
    double a;
    double gap; // E(Y-a)+ - E(X-a)+ (icx) or P(Y>=a) - P(X>=a) (sd)
    double lo, hi;
};

struct OrderVerdict {
    Relation relation;
    Verdict verdict;
    bool exact = false;
    double witness_a = 0; // threshold with the most negative gap when failing
    double witness_gap = 0;
    std::vector<ThresholdGap> gaps;
};

struct OrderOptions {
    double significance = 0.01;
    int bootstrap_rounds = 400;
    std::uint64_t bootstrap_seed = 0x5eedULL;
    std::vector<double> thresholds; // empty: merged quantile grid + endpoints
    int quantile_grid = 21;
};

/// E (X - a)+ point estimate (exact value for exact distributions).
double stop_loss(const Distribution& d, double a);

struct StopLossEstimate {
    double value;
    double lo, hi; // bootstrap band; collapses to the value in exact mode
};
StopLossEstimate stop_loss_band(const Distribution& d, double a, const OrderOptions& opt = {});

/// X <=_icx Y via the stop-loss family. Exact mode checks every merged
/// support point plus the mean inequality (sufficient for finite laws).
OrderVerdict icx_dominates(const Distribution& x, const Distribution& y,
                           const OrderOptions& opt = {});

/// X <=_sd Y via pointwise survival dominance.
OrderVerdict sd_dominates(const Distribution& x, const Distribution& y,
                          const OrderOptions& opt = {});

/// The cheap necessary conditions: means, variances under equal means,
/// and P(X = 0) >= P(Y = 0).
struct ConsequencePanel {
    bool exact;
    double mean_x, mean_y;
    double var_x, var_y;
    double p0_x, p0_y;
    double mean_band, p0_band; // half-widths (0 in exact mode)
    bool mean_consistent;
    bool var_consistent;
    bool p0_consistent;
};
ConsequencePanel consequence_panel(const Distribution& x, const Distribution& y,
                                   const OrderOptions& opt = {});

struct TwoSampleResult {
    double ks_stat = 0;
    double critical = 0;
    bool reject = false;
    bool inconclusive = false;
};
/// Two-sample Kolmogorov-Smirnov equality test; inconclusive below 100
/// observations per side. Conservative under ties.
TwoSampleResult two_sample_equal(const EmpiricalSample& x, const EmpiricalSample& y,
                                 double alpha = 0.01);

} // namespace dlas
