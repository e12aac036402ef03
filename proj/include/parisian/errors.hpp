#pragma once

#include <stdexcept>
#include <string>

namespace parisian {

// Argument outside the documented domain of an operation, or an invalid model.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical method (inversion, quadrature, root bracketing, series) did not
// reach its accuracy contract.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& route, const std::string& what)
        : std::runtime_error(route + ": " + what), route_(route) {}

    const std::string& route() const noexcept { return route_; }

private:
    std::string route_;
};

// Operation requested on a model or configuration it does not support.
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace parisian
