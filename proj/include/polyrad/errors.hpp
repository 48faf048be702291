#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace polyrad {

/// Raised when a parameter falls outside the domain of an operation
/// (most often the Sobolev condition alpha - 2m + 1 > 0).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature exhausted its subdivision budget.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double partial, double err)
        : std::runtime_error(what), partial_(partial), err_(err) {}
    double partial_value() const noexcept { return partial_; }
    double error_estimate() const noexcept { return err_; }

private:
    double partial_;
    double err_;
};

/// ODE integration failed: step underflow or solution overflow.
class integration_error : public std::runtime_error {
public:
    enum class kind { step_underflow, overflow };
    integration_error(kind k, double r, const std::string& what)
        : std::runtime_error(what), kind_(k), r_(r) {}
    kind reason() const noexcept { return kind_; }
    double radius() const noexcept { return r_; }

private:
    kind kind_;
    double r_;
};

/// Outer tail integral of the iteration chain cannot converge.
class tail_divergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation needed a symbolic representation or derivative chain that
/// a black-box profile does not carry.
class unsupported_profile_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void require_sobolev(int m, double alpha) {
    if (m < 1) throw domain_error("m must be a positive integer");
    if (alpha - 2.0 * m + 1.0 > 0.0) return;
    std::ostringstream os;
    os << "Sobolev condition alpha - 2m + 1 > 0 violated (alpha - 2m + 1 = " << alpha - 2.0 * m + 1.0 << ")";
    throw domain_error(os.str());
}

}  // namespace polyrad
