#pragma once

#include <Eigen/Core>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace forch {

using Vec2 = Eigen::Vector2d;

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when an iterative procedure fails to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual)
    {
    }
    [[nodiscard]] double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/**
 * Generalized Forchheimer polynomial
 *
 *     g(s) = a_0 + a_1 s^{alpha_1} + ... + a_N s^{alpha_N},   s >= 0,
 *
 * together with the derived mobility K(xi) = 1 / g(s(xi)), where s(xi) >= 0
 * solves s g(s) = xi. The momentum law g(|u|) u = -grad p is then equivalent
 * to u = -K(|grad p|) grad p.
 *
 * An empty exponent list is accepted and describes Darcy's law g = a_0; in
 * that case the degeneracy exponent is 0 and K is constant.
 *
 * Instances are immutable and all member functions are const and reentrant.
 */
class ForchheimerPolynomial {
public:
    /// coefficients = {a_0, ..., a_N}, exponents = {alpha_1, ..., alpha_N}.
    ForchheimerPolynomial(std::vector<double> coefficients, std::vector<double> exponents);

    static ForchheimerPolynomial darcy(double a0);
    /// g(s) = a0 + a1 s
    static ForchheimerPolynomial two_term(double a0, double a1);

    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    [[nodiscard]] const std::vector<double>& exponents() const noexcept { return exps_; }

    /// a = alpha_N / (alpha_N + 1); zero for Darcy.
    [[nodiscard]] double degeneracy() const noexcept { return degeneracy_; }
    /// beta = 2 - a, the Lebesgue exponent natural for gradient and flux errors.
    [[nodiscard]] double beta() const noexcept { return 2.0 - degeneracy_; }
    [[nodiscard]] bool is_darcy() const noexcept { return exps_.empty(); }
    [[nodiscard]] bool is_two_term() const noexcept { return exps_.size() == 1 && exps_[0] == 1.0; }

    [[nodiscard]] double g(double s) const;
    [[nodiscard]] double g_prime(double s) const;

    /// Unique s >= 0 with s g(s) = xi.
    [[nodiscard]] double solve_s(double xi) const;

    /// K(xi) = 1 / g(s(xi)), in (0, 1/a_0], nonincreasing.
    [[nodiscard]] double mobility(double xi) const;
    /// dK/dxi for xi > 0.
    [[nodiscard]] double mobility_derivative(double xi) const;

    /// H(xi) = int_0^{xi^2} K(sqrt(t)) dt.
    [[nodiscard]] double energy_density(double xi) const;

    /// -K(|y|) y
    [[nodiscard]] Vec2 flux_of_gradient(const Vec2& y) const;
    /// -g(|u|) u
    [[nodiscard]] Vec2 gradient_of_flux(const Vec2& u) const;

    /// Human readable form, e.g. "1 + 1 s^1".
    [[nodiscard]] std::string to_string() const;

private:
    std::vector<double> coeffs_;
    std::vector<double> exps_;
    double degeneracy_{0.0};
};

/// Parse the comma-separated coefficient and exponent lists used on the command line.
ForchheimerPolynomial parse_law(const std::string& coefficients, const std::string& exponents);

} // namespace forch
