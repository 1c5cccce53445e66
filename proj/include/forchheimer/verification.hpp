#pragma once

#include "forchheimer/fem_spaces.hpp"
#include "forchheimer/forchheimer_law.hpp"
#include "forchheimer/time_solver.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace forch {

/**
 * Manufactured solution on the unit square,
 *
 *   p(x, t) = t x1 (1 - x1) x2 (1 - x2),   s = grad p,   u = -K(|s|) s,
 *
 * with homogeneous Dirichlet data and zero initial pressure. The forcing
 * f = p_t + div u is evaluated in closed form by the chain rule
 *
 *   div u = -K(|s|) div s - K'(|s|) (s . Hess(p) s) / |s|.
 *
 * The default law is g(s) = 1 + s, for which beta = 3/2.
 */
class ManufacturedSolution {
public:
    explicit ManufacturedSolution(ForchheimerPolynomial law = ForchheimerPolynomial::two_term(1.0, 1.0));

    [[nodiscard]] const ForchheimerPolynomial& law() const noexcept { return law_; }
    [[nodiscard]] double beta() const noexcept { return law_.beta(); }

    [[nodiscard]] double p(const Vec2& x, double t) const;
    [[nodiscard]] double p_t(const Vec2& x, double t) const;
    [[nodiscard]] Vec2 s(const Vec2& x, double t) const;
    [[nodiscard]] Eigen::Matrix2d hessian(const Vec2& x, double t) const;
    [[nodiscard]] Vec2 u(const Vec2& x, double t) const;
    [[nodiscard]] double f(const Vec2& x, double t) const;

    /// Solver input for this solution on [0, t_final].
    [[nodiscard]] ProblemData problem(double t_final = 1.0) const;

private:
    ForchheimerPolynomial law_;
};

/// Forcing of the manufactured solution.
double exact_f(const ManufacturedSolution& solution, const Vec2& x, double t);

/// Which discrete space a vector coefficient array belongs to.
enum class VectorSpace { PiecewiseConstant, RaviartThomas };

/// (sum_T int_T |p_h - p|^2)^{1/2}
double error_p_L2(const StructuredTriMesh& mesh, const Vector& p, const ScalarField& exact, int degree = 4);

/// Max over quadrature points of |p_h - p|.
double error_p_Linf(const StructuredTriMesh& mesh, const Vector& p, const ScalarField& exact, int degree = 4);

/// (sum_T int_T |v_h - v|^beta)^{1/beta}
double error_vec_Lbeta(const StructuredTriMesh& mesh, VectorSpace space, const Vector& coeffs,
                       const VectorField& exact, double beta, int degree = 4);

/// Errors of a state against the manufactured solution at time t.
struct ErrorTriple {
    double p_l2{0.0};
    double s_lbeta{0.0};
    double u_lbeta{0.0};
    double p_linf{0.0};
};

ErrorTriple measure_errors(const StructuredTriMesh& mesh, const DiscreteState& state,
                           const ManufacturedSolution& solution, double t, int degree = 4);

/// Error reduction per doubling of n, e_prev / e_next; nullopt where an error is not positive.
std::vector<std::optional<double>> reduction_factors(const std::vector<std::pair<int, double>>& errors);

/// Observed order log2(e_prev / e_next) per doubling of n; nullopt where an error is not positive.
/// Throws DomainError for fewer than two entries or sizes not growing by powers of two.
std::vector<std::optional<double>> convergence_rates(const std::vector<std::pair<int, double>>& errors);

} // namespace forch
