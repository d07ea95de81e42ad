#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lossagent {

// Base class for every error the framework raises on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mismatched vector / image shapes.
struct DimensionError : Error {
    using Error::Error;
};

// Non-finite values where finite ones are required.
struct NumericError : Error {
    using Error::Error;
};

// Unknown term / expert id.
struct LookupError : Error {
    using Error::Error;
};

// Invalid run configuration or missing required inputs.
struct ConfigError : Error {
    using Error::Error;
};

// The agent reply did not contain a usable weight pattern.
struct ParseError : Error {
    using Error::Error;
};

// Chat backend failure, categorized so callers can tell a timeout from a
// bad HTTP status or a response body we could not interpret.
struct BackendError : Error {
    enum class Category { transport, timeout, http_status, malformed };

    BackendError(Category cat, const std::string& what) : Error(what), category(cat) {}

    Category category;
};

// Training produced a non-finite loss; carries where it happened.
struct TrainingDivergedError : Error {
    TrainingDivergedError(int stage, int step, const std::string& what)
        : Error(what), stage(stage), step(step) {}

    int stage;
    int step;
};

// Trajectory data violates its own ordering guarantees.
struct IntegrityError : Error {
    using Error::Error;
};

// A persisted trajectory file could not be read back; carries the 1-based
// line number of the offending line.
struct LoadError : Error {
    LoadError(std::size_t line, const std::string& what) : Error(what), line_number(line) {}

    std::size_t line_number;
};

// Operation applied to a feedback kind that does not support it.
struct UnsupportedKindError : Error {
    using Error::Error;
};

}  // namespace lossagent
