#include "forchheimer/verification.hpp"

#include <algorithm>
#include <cmath>

namespace forch {

ManufacturedSolution::ManufacturedSolution(ForchheimerPolynomial law) : law_(std::move(law)) {}

double ManufacturedSolution::p(const Vec2& x, double t) const
{
    return t * p_t(x, t);
}

double ManufacturedSolution::p_t(const Vec2& x, double /*t*/) const
{
    return x.x() * (1.0 - x.x()) * x.y() * (1.0 - x.y());
}

Vec2 ManufacturedSolution::s(const Vec2& x, double t) const
{
    const double X = x.x() * (1.0 - x.x());
    const double Y = x.y() * (1.0 - x.y());
    return t * Vec2((1.0 - 2.0 * x.x()) * Y, X * (1.0 - 2.0 * x.y()));
}

Eigen::Matrix2d ManufacturedSolution::hessian(const Vec2& x, double t) const
{
    const double X = x.x() * (1.0 - x.x());
    const double Y = x.y() * (1.0 - x.y());
    const double mixed = (1.0 - 2.0 * x.x()) * (1.0 - 2.0 * x.y());
    Eigen::Matrix2d h;
    h << -2.0 * Y, mixed, mixed, -2.0 * X;
    return t * h;
}

Vec2 ManufacturedSolution::u(const Vec2& x, double t) const
{
    return law_.flux_of_gradient(s(x, t));
}

double ManufacturedSolution::f(const Vec2& x, double t) const
{
    const Vec2 grad = s(x, t);
    const Eigen::Matrix2d hess = hessian(x, t);
    const double norm = grad.norm();
    double div_u = -law_.mobility(norm) * hess.trace();
    if (norm > 0.0) {
        div_u -= law_.mobility_derivative(norm) * grad.dot(hess * grad) / norm;
    }
    return p_t(x, t) + div_u;
}

ProblemData ManufacturedSolution::problem(double t_final) const
{
    ProblemData data;
    data.law = law_;
    data.t_final = t_final;
    data.f = [*this](const Vec2& x, double t) { return f(x, t); };
    // Zero Dirichlet data: Psi = 0, and p(., 0) = 0.
    return data;
}

double exact_f(const ManufacturedSolution& solution, const Vec2& x, double t)
{
    return solution.f(x, t);
}

double error_p_L2(const StructuredTriMesh& mesh, const Vector& p, const ScalarField& exact, int degree)
{
    const QuadratureRule& rule = triangle_quadrature(degree);
    double sum = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double area = mesh.triangles()[static_cast<std::size_t>(t)].area;
        double local = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double diff = p[t] - exact(mesh.map_point(t, rule.points[q]));
            local += rule.weights[q] * diff * diff;
        }
        sum += area * local;
    }
    return std::sqrt(sum);
}

double error_p_Linf(const StructuredTriMesh& mesh, const Vector& p, const ScalarField& exact, int degree)
{
    const QuadratureRule& rule = triangle_quadrature(degree);
    double worst = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        for (const auto& point : rule.points) {
            worst = std::max(worst, std::abs(p[t] - exact(mesh.map_point(t, point))));
        }
    }
    return worst;
}

double error_vec_Lbeta(const StructuredTriMesh& mesh, VectorSpace space, const Vector& coeffs,
                       const VectorField& exact, double beta, int degree)
{
    if (!(beta >= 1.0)) {
        throw DomainError("error_vec_Lbeta: beta must be at least 1");
    }
    const QuadratureRule& rule = triangle_quadrature(degree);
    double sum = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double area = mesh.triangles()[static_cast<std::size_t>(t)].area;
        double local = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const Vec2 x = mesh.map_point(t, rule.points[q]);
            const Vec2 discrete = space == VectorSpace::PiecewiseConstant
                                      ? Vec2(coeffs[2 * t], coeffs[2 * t + 1])
                                      : rt0_field(mesh, coeffs, t, x);
            local += rule.weights[q] * std::pow((discrete - exact(x)).norm(), beta);
        }
        sum += area * local;
    }
    return std::pow(sum, 1.0 / beta);
}

ErrorTriple measure_errors(const StructuredTriMesh& mesh, const DiscreteState& state,
                           const ManufacturedSolution& solution, double t, int degree)
{
    const ScalarField p = [&](const Vec2& x) { return solution.p(x, t); };
    ErrorTriple e;
    e.p_l2 = error_p_L2(mesh, state.p, p, degree);
    e.p_linf = error_p_Linf(mesh, state.p, p, degree);
    e.s_lbeta = error_vec_Lbeta(mesh, VectorSpace::PiecewiseConstant, state.s,
                                [&](const Vec2& x) { return solution.s(x, t); }, solution.beta(), degree);
    e.u_lbeta = error_vec_Lbeta(mesh, VectorSpace::RaviartThomas, state.u,
                                [&](const Vec2& x) { return solution.u(x, t); }, solution.beta(), degree);
    return e;
}

namespace {

// (e_prev / e_next, number of doublings) per consecutive pair.
std::vector<std::pair<std::optional<double>, double>>
error_ratios(const std::vector<std::pair<int, double>>& errors)
{
    if (errors.size() < 2) {
        throw DomainError("convergence_rates: at least two (n, error) pairs are required");
    }
    std::vector<std::pair<std::optional<double>, double>> out;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const int n_prev = errors[i - 1].first;
        const int n_next = errors[i].first;
        if (n_prev < 1 || n_next <= n_prev || n_next % n_prev != 0 ||
            ((n_next / n_prev) & (n_next / n_prev - 1)) != 0) {
            throw DomainError("convergence_rates: mesh sizes must grow by powers of two");
        }
        const double doublings = std::log2(static_cast<double>(n_next / n_prev));
        const double prev = errors[i - 1].second;
        const double next = errors[i].second;
        if (prev > 0.0 && next > 0.0) {
            out.emplace_back(prev / next, doublings);
        } else {
            out.emplace_back(std::nullopt, doublings);
        }
    }
    return out;
}

} // namespace

std::vector<std::optional<double>> reduction_factors(const std::vector<std::pair<int, double>>& errors)
{
    std::vector<std::optional<double>> out;
    for (const auto& [ratio, doublings] : error_ratios(errors)) {
        out.push_back(ratio ? std::optional<double>(doublings == 1.0 ? *ratio : std::pow(*ratio, 1.0 / doublings))
                            : std::nullopt);
    }
    return out;
}

std::vector<std::optional<double>> convergence_rates(const std::vector<std::pair<int, double>>& errors)
{
    std::vector<std::optional<double>> out;
    for (const auto& [ratio, doublings] : error_ratios(errors)) {
        out.push_back(ratio ? std::optional<double>(std::log2(*ratio) / doublings) : std::nullopt);
    }
    return out;
}

} // namespace forch
