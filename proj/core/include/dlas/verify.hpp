#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dlas/experiments.hpp"

namespace dlas {

struct CriterionResult {
    std::string id;
    std::string name;
    bool pass = false;
    bool assertion_violation = false; // pathwise/coupling failure (exit 2)
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 2026;
    int workers = 1;
    bool invert_tracer_priority = false; // mutation hook, criterion 9 path
    // scale knobs; defaults match the reference suite
    long long replicas_large = 100000;
    long long sweep_runs = 10000;
    long long replicas_window = 2000;
    long long ks_experiments = 100;
    long long ks_replicas = 1500;
};

/// Runs the full acceptance suite, printing one line per criterion.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt, std::ostream& log);

/// Runs a single criterion group ("1".."9"); empty selector runs all.
std::vector<CriterionResult> run_acceptance_group(const VerifyOptions& opt, std::ostream& log,
                                                  const std::string& group);

/// 0 = all pass; 2 = pathwise assertion violation; 3 = statistical
/// falsification / criterion failure.
int exit_code_for(const std::vector<CriterionResult>& results);

} // namespace dlas
