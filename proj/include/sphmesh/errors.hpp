#pragma once

#include <stdexcept>
#include <string>

namespace sphmesh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfDomainError : Error {
    using Error::Error;
};

struct DegenerateNormalError : Error {
    using Error::Error;
};

struct ProjectionFailureError : Error {
    ProjectionFailureError(const std::string& msg, double residual_)
        : Error(msg), residual(residual_) {}
    double residual = 0.0;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IntegrationBlowupError : Error {
    using Error::Error;
};

} // namespace sphmesh
