#pragma once

#include <stdexcept>
#include <string>

namespace crowdsim {

// Base class for every error raised by the simulators and the harness.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration: bad file, unknown key, out-of-range value.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Initial placement could not satisfy the non-overlap / free-patch contract.
class PlacementError : public Error {
public:
    explicit PlacementError(const std::string& what) : Error(what) {}
};

// A metric is undefined for the given population (e.g. fairness index with
// an empty group).
class MetricError : public Error {
public:
    explicit MetricError(const std::string& what) : Error(what) {}
};

} // namespace crowdsim
