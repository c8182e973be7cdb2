#pragma once

#include <stdexcept>
#include <string>

namespace occuflow {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Panel ingestion / validation.
struct MissingDayError : Error {
    using Error::Error;
};
struct NegativeOccupancyError : Error {
    using Error::Error;
};
struct DuplicateCellError : Error {
    using Error::Error;
};
struct PanelTooShortError : Error {
    using Error::Error;
};
struct UnknownCovariateError : Error {
    using Error::Error;
};
struct NonPositiveLogInputError : Error {
    using Error::Error;
};
struct UnmappedDistrictError : Error {
    using Error::Error;
};
struct SchemaError : Error {
    using Error::Error;
};

// Basis / GLM fitting.
struct InsufficientKnotsError : Error {
    using Error::Error;
};
struct SingularInformationError : Error {
    using Error::Error;
};
struct NonconvergenceError : Error {
    using Error::Error;
};
struct DimensionMismatchError : Error {
    using Error::Error;
};

// Exit-rate estimation.
struct EmptySupportError : Error {
    using Error::Error;
};
struct ZeroRateError : Error {
    using Error::Error;
};
struct NumericalFailureError : Error {
    using Error::Error;
};

// Inference.
struct WindowTooShortError : Error {
    using Error::Error;
};

// CLI / config.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace occuflow
