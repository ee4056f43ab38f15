// Acceptance suite runner: one pass/fail line per criterion. Exit codes
// follow the CLI contract: 0 all pass, 2 pathwise assertion violation,
// 3 statistical falsification / criterion failure.

#include <cstring>
#include <iostream>
#include <string>

#include "dlas/verify.hpp"

int main(int argc, char** argv) {
    std::string group;
    dlas::VerifyOptions opt;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        auto next = [&]() -> std::string {
            if (i + 1 >= argc) {
                std::cerr << "missing value for " << arg << "\n";
                std::exit(1);
            }
            return argv[++i];
        };
        if (arg == "--criterion") {
            group = next();
        } else if (arg == "--seed") {
            opt.seed = std::stoull(next());
        } else if (arg == "--workers") {
            opt.workers = std::stoi(next());
        } else if (arg == "--replicas") {
            opt.replicas_large = std::stoll(next());
        } else if (arg == "--sweep-runs") {
            opt.sweep_runs = std::stoll(next());
        } else if (arg == "--invert-tracer-priority") {
            opt.invert_tracer_priority = true;
        } else {
            std::cerr << "unknown argument " << arg << "\n";
            return 1;
        }
    }
    auto results = dlas::run_acceptance_group(opt, std::cout, group);
    int code = dlas::exit_code_for(results);
    int passed = 0;
    for (const auto& r : results) passed += r.pass;
    std::cout << passed << "/" << results.size() << " checks passed, exit " << code << "\n";
    return code;
}
