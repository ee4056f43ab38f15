#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dlas {

using Vertex = std::int32_t;

inline constexpr Vertex kNoVertex = -1;

/// Validation failure in user-supplied configuration (graphs, pmfs, specs).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Internal precondition failure during a simulation run.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

/// A pathwise property of the coupling failed. Carries a replayable
/// description of the offending run (seed, site, horizon) as JSON text.
class CouplingViolation : public std::runtime_error {
public:
    CouplingViolation(const std::string& what, std::string replay_json)
        : std::runtime_error(what), replay(std::move(replay_json)) {}
    std::string replay;
};

enum class AssertLevel { off, invariants, full };

enum class TimeModel { discrete, continuous };

} // namespace dlas
