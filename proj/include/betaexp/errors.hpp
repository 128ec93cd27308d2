#pragma once

#include <stdexcept>
#include <string>

namespace betaexp {

// Base of all domain errors. name() is the stable machine-readable tag the
// CLI prints; what() carries the human-readable detail.
class error : public std::runtime_error {
public:
    error(const char* name, const std::string& message)
        : std::runtime_error(message), name_(name) {}

    const char* name() const noexcept { return name_; }

private:
    const char* name_;
};

class out_of_range_error : public error {
public:
    explicit out_of_range_error(const std::string& m) : error("OutOfRange", m) {}
};

class invalid_polynomial_error : public error {
public:
    explicit invalid_polynomial_error(const std::string& m) : error("InvalidPolynomial", m) {}
};

class point_outside_interval_error : public error {
public:
    explicit point_outside_interval_error(const std::string& m) : error("PointOutsideInterval", m) {}
};

class depth_exceeded_error : public error {
public:
    explicit depth_exceeded_error(const std::string& m) : error("DepthExceeded", m) {}
};

class output_too_large_error : public error {
public:
    explicit output_too_large_error(const std::string& m) : error("OutputTooLarge", m) {}
};

class piece_budget_error : public error {
public:
    explicit piece_budget_error(const std::string& m) : error("PieceBudgetExceeded", m) {}
};

class support_violation_error : public error {
public:
    explicit support_violation_error(const std::string& m) : error("SupportViolation", m) {}
};

class omega_exhausted_error : public error {
public:
    explicit omega_exhausted_error(const std::string& m) : error("OmegaExhausted", m) {}
};

class invalid_params_error : public error {
public:
    explicit invalid_params_error(const std::string& m) : error("InvalidParams", m) {}
};

} // namespace betaexp
