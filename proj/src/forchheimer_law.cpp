#include "forchheimer/forchheimer_law.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace forch {

namespace {

constexpr int kMaxRootIterations = 200;
constexpr double kRootRelTol = 1e-12;
constexpr double kQuadratureRelTol = 1e-10;

std::vector<double> split_numbers(const std::string& text, const char* what)
{
    std::vector<double> out;
    if (text.empty()) {
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("malformed ") + what + " entry '" + item + "'");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) {
            ++used;
        }
        if (used != item.size()) {
            throw std::invalid_argument(std::string("malformed ") + what + " entry '" + item + "'");
        }
        out.push_back(value);
    }
    return out;
}

// Adaptive Simpson on [a, b]; fa, fm, fb are the endpoint and midpoint values.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double eps, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

} // namespace

ForchheimerPolynomial::ForchheimerPolynomial(std::vector<double> coefficients,
                                             std::vector<double> exponents)
    : coeffs_(std::move(coefficients)), exps_(std::move(exponents))
{
    if (coeffs_.size() != exps_.size() + 1) {
        throw DomainError("Forchheimer law: expected one more coefficient than exponents");
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c) || c < 0.0) {
            throw DomainError("Forchheimer law: coefficients must be finite and nonnegative");
        }
    }
    if (!(coeffs_.front() > 0.0)) {
        throw DomainError("Forchheimer law: a_0 must be positive");
    }
    if (!exps_.empty() && !(coeffs_.back() > 0.0)) {
        throw DomainError("Forchheimer law: leading coefficient a_N must be positive");
    }
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (!std::isfinite(exps_[i]) || !(exps_[i] > 0.0)) {
            throw DomainError("Forchheimer law: exponents must be positive");
        }
        if (i > 0 && !(exps_[i] > exps_[i - 1])) {
            throw DomainError("Forchheimer law: exponents must be strictly increasing");
        }
    }
    if (!exps_.empty()) {
        degeneracy_ = exps_.back() / (exps_.back() + 1.0);
    }
}

ForchheimerPolynomial ForchheimerPolynomial::darcy(double a0)
{
    return ForchheimerPolynomial({a0}, {});
}

ForchheimerPolynomial ForchheimerPolynomial::two_term(double a0, double a1)
{
    return ForchheimerPolynomial({a0, a1}, {1.0});
}

double ForchheimerPolynomial::g(double s) const
{
    if (!(s >= 0.0)) {
        throw DomainError("g(s): s must be nonnegative");
    }
    double value = coeffs_[0];
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        value += coeffs_[i + 1] * std::pow(s, exps_[i]);
    }
    return value;
}

double ForchheimerPolynomial::g_prime(double s) const
{
    if (!(s >= 0.0)) {
        throw DomainError("g'(s): s must be nonnegative");
    }
    double value = 0.0;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        value += coeffs_[i + 1] * exps_[i] * std::pow(s, exps_[i] - 1.0);
    }
    return value;
}

double ForchheimerPolynomial::solve_s(double xi) const
{
    if (!(xi >= 0.0)) {
        throw DomainError("s(xi): xi must be nonnegative");
    }
    if (xi == 0.0) {
        return 0.0;
    }
    const double a0 = coeffs_[0];
    if (is_darcy()) {
        return xi / a0;
    }
    if (is_two_term()) {
        // s = (-a0 + sqrt(a0^2 + 4 a1 xi)) / (2 a1), rationalized.
        const double a1 = coeffs_[1];
        return 2.0 * xi / (a0 + std::sqrt(a0 * a0 + 4.0 * a1 * xi));
    }

    // s g(s) >= a_0 s and s g(s) >= a_N s^{alpha_N + 1} give two upper bounds.
    double lo = 0.0;
    double hi = std::min(xi / a0, std::pow(xi / coeffs_.back(), 1.0 / (exps_.back() + 1.0)));
    double s = hi;
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kMaxRootIterations; ++it) {
        const double gs = g(s);
        residual = s * gs - xi;
        if (std::abs(residual) <= 0.25 * kRootRelTol * xi) {
            return s;
        }
        if (residual > 0.0) {
            hi = s;
        } else {
            lo = s;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            break;
        }
        const double slope = gs + s * g_prime(s);
        double next = s - residual / slope;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        s = next;
    }
    residual = s * g(s) - xi;
    if (std::abs(residual) <= kRootRelTol * xi) {
        return s;
    }
    throw ConvergenceError("s(xi): root finder did not converge", residual / xi);
}

double ForchheimerPolynomial::mobility(double xi) const
{
    if (is_darcy()) {
        if (!(xi >= 0.0)) {
            throw DomainError("K(xi): xi must be nonnegative");
        }
        return 1.0 / coeffs_[0];
    }
    return 1.0 / g(solve_s(xi));
}

double ForchheimerPolynomial::mobility_derivative(double xi) const
{
    if (!(xi > 0.0)) {
        throw DomainError("K'(xi): xi must be positive");
    }
    if (is_darcy()) {
        return 0.0;
    }
    const double s = solve_s(xi);
    const double gs = g(s);
    const double gp = g_prime(s);
    const double ds = 1.0 / (gs + s * gp);
    return -gp * ds / (gs * gs);
}

double ForchheimerPolynomial::energy_density(double xi) const
{
    if (!(xi >= 0.0)) {
        throw DomainError("H(xi): xi must be nonnegative");
    }
    if (xi == 0.0) {
        return 0.0;
    }
    // t = r^2 turns int_0^{xi^2} K(sqrt t) dt into int_0^xi 2 r K(r) dr.
    const std::function<double(double)> integrand = [this](double r) { return 2.0 * r * mobility(r); };
    const double fa = integrand(0.0);
    const double fm = integrand(0.5 * xi);
    const double fb = integrand(xi);
    const double whole = xi / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(integrand, 0.0, xi, fa, fm, fb, whole, kQuadratureRelTol * std::abs(whole),
                            48);
}

Vec2 ForchheimerPolynomial::flux_of_gradient(const Vec2& y) const
{
    return -mobility(y.norm()) * y;
}

Vec2 ForchheimerPolynomial::gradient_of_flux(const Vec2& u) const
{
    return -g(u.norm()) * u;
}

std::string ForchheimerPolynomial::to_string() const
{
    std::ostringstream os;
    os << coeffs_[0];
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        os << " + " << coeffs_[i + 1] << " s^" << exps_[i];
    }
    return os.str();
}

ForchheimerPolynomial parse_law(const std::string& coefficients, const std::string& exponents)
{
    return ForchheimerPolynomial(split_numbers(coefficients, "coefficient"),
                                 split_numbers(exponents, "exponent"));
}

} // namespace forch
