#include "forchheimer/time_solver.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <ostream>
#include <string>

namespace forch {

struct TimeStepper::Factorization {
    Eigen::SimplicialLLT<SparseMatrix> solver;
    bool analysed{false};
};

namespace {

constexpr int kLoadQuadratureDegree = 6;

} // namespace

Vector elementwise_mobility(const ForchheimerPolynomial& law, const Vector& s)
{
    Vector k(s.size() / 2);
    for (Eigen::Index t = 0; t < k.size(); ++t) {
        k[t] = law.mobility(std::hypot(s[2 * t], s[2 * t + 1]));
    }
    return k;
}

double l2_norm_vector(const StructuredTriMesh& mesh, const Vector& s)
{
    double sum = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double area = mesh.triangles()[static_cast<std::size_t>(t)].area;
        sum += area * (s[2 * t] * s[2 * t] + s[2 * t + 1] * s[2 * t + 1]);
    }
    return std::sqrt(sum);
}

double l2_norm_scalar(const StructuredTriMesh& mesh, const Vector& p)
{
    double sum = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        sum += mesh.triangles()[static_cast<std::size_t>(t)].area * p[t] * p[t];
    }
    return std::sqrt(sum);
}

TimeStepper::TimeStepper(const StructuredTriMesh& mesh, ProblemData data, SolverConfig config)
    : mesh_(mesh),
      data_(std::move(data)),
      config_(config),
      system_(assemble(mesh)),
      factor_(std::make_unique<Factorization>())
{
    if (!(config_.nonlinear_tol > 0.0)) {
        throw DomainError("solver config: nonlinear tolerance must be positive");
    }
    if (config_.max_picard < 1) {
        throw DomainError("solver config: max_picard must be positive");
    }
    const Vector inv_mp = system_.mass_p.cwiseInverse();
    div_penalty_ = SparseMatrix(system_.divergence.transpose() * inv_mp.asDiagonal() * system_.divergence);
}

TimeStepper::~TimeStepper() = default;

DiscreteState TimeStepper::initialize() const
{
    return forch::initialize(mesh_, data_);
}

Vector TimeStepper::pressure_load(double t) const
{
    Vector load = Vector::Zero(mesh_.num_triangles());
    if (!data_.f && !data_.psi_t) {
        return load;
    }
    const QuadratureRule& rule = triangle_quadrature(kLoadQuadratureDegree);
    for (int tri = 0; tri < mesh_.num_triangles(); ++tri) {
        const double area = mesh_.triangles()[static_cast<std::size_t>(tri)].area;
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const Vec2 x = mesh_.map_point(tri, rule.points[q]);
            double value = data_.f ? data_.f(x, t) : 0.0;
            if (data_.psi_t) {
                value -= data_.psi_t(x, t);
            }
            sum += rule.weights[q] * value;
        }
        load[tri] = area * sum;
    }
    return load;
}

Vector TimeStepper::flux_load(double t) const
{
    Vector load = Vector::Zero(mesh_.num_edges());
    if (!data_.grad_psi) {
        return load;
    }
    const QuadratureRule& rule = triangle_quadrature(kLoadQuadratureDegree);
    for (int tri = 0; tri < mesh_.num_triangles(); ++tri) {
        const Triangle& element = mesh_.triangles()[static_cast<std::size_t>(tri)];
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const Vec2 x = mesh_.map_point(tri, rule.points[q]);
            const Vec2 g = data_.grad_psi(x, t);
            for (int k = 0; k < 3; ++k) {
                load[element.edges[static_cast<std::size_t>(k)]] +=
                    element.area * rule.weights[q] * g.dot(rt0_basis(mesh_, tri, k, x));
            }
        }
    }
    return load;
}

StepResult TimeStepper::step(const DiscreteState& previous, double t_n)
{
    const double dt = config_.dt;
    if (!(dt > 0.0)) {
        throw DomainError("solver config: dt must be positive");
    }
    const auto& B = system_.divergence;
    const auto& C = system_.projection;
    const Vector& mass_p = system_.mass_p;

    // R = F + M_p pbar^{n-1} / dt; the u-system right-hand side does not change across sweeps.
    const Vector rhs_p = pressure_load(t_n) + mass_p.cwiseProduct(previous.p) / dt;
    const Vector rhs_u = -flux_load(t_n) + dt * (B.transpose() * rhs_p.cwiseQuotient(mass_p));

    StepResult result;
    Vector s_iter = previous.s;
    Vector weights(system_.layout.n_s);
    for (int it = 1; it <= config_.max_picard; ++it) {
        const Vector k_bar = elementwise_mobility(data_.law, s_iter);
        for (Eigen::Index t = 0; t < k_bar.size(); ++t) {
            const double w = 1.0 / (k_bar[t] * mass_p[t]);
            weights[2 * t] = w;
            weights[2 * t + 1] = w;
        }
        const SparseMatrix lhs =
            SparseMatrix(C.transpose() * weights.asDiagonal() * C) + dt * div_penalty_;
        if (!factor_->analysed) {
            factor_->solver.analyzePattern(lhs);
            factor_->analysed = true;
        }
        factor_->solver.factorize(lhs);
        if (factor_->solver.info() != Eigen::Success) {
            throw FactorizationError("Picard sweep: sparse Cholesky factorization failed at t = " +
                                     std::to_string(t_n));
        }
        Vector u = factor_->solver.solve(rhs_u);
        Vector p = dt * (rhs_p - B * u).cwiseQuotient(mass_p);
        Vector s = -(C * u).cwiseProduct(weights);

        const double increment = l2_norm_vector(mesh_, s - s_iter);
        result.increments.push_back(increment);
        result.iterations = it;
        s_iter = s;
        // A frozen-K solve of Darcy's law is already the exact solution.
        if (increment <= config_.nonlinear_tol || data_.law.is_darcy()) {
            result.state = DiscreteState{std::move(p), std::move(s), std::move(u), t_n};
            return result;
        }
    }
    throw ConvergenceError("Picard iteration did not converge within " +
                               std::to_string(config_.max_picard) + " sweeps at t = " +
                               std::to_string(t_n),
                           result.increments.empty() ? 0.0 : result.increments.back());
}

double TimeStepper::mass_balance_residual(const DiscreteState& previous,
                                          const DiscreteState& current) const
{
    const Vector rows = system_.mass_p.cwiseProduct(current.p - previous.p) / config_.dt +
                        system_.divergence * current.u - pressure_load(current.t);
    return rows.sum();
}

StepDiagnostics TimeStepper::diagnose(const DiscreteState& previous, const DiscreteState& current,
                                      int step, int iterations) const
{
    StepDiagnostics d;
    d.step = step;
    d.t = current.t;
    d.picard_iters = iterations;
    d.l2_pbar = l2_norm_scalar(mesh_, current.p);
    d.linf_p = current.p.size() > 0 ? current.p.cwiseAbs().maxCoeff() : 0.0;

    const Vector k = elementwise_mobility(data_.law, current.s);
    const Vector cu = system_.projection * current.u;
    double weighted = 0.0;
    double mismatch = 0.0;
    for (int t = 0; t < mesh_.num_triangles(); ++t) {
        const double area = system_.mass_p[t];
        const Vec2 s(current.s[2 * t], current.s[2 * t + 1]);
        weighted += area * k[t] * s.squaredNorm();
        const Vec2 avg_u(cu[2 * t] / area, cu[2 * t + 1] / area);
        mismatch = std::max(mismatch, (avg_u + k[t] * s).norm());
    }
    d.l2_weighted_s = std::sqrt(weighted);
    d.max_flux_mismatch = mismatch;
    d.mass_balance_residual = mass_balance_residual(previous, current);
    return d;
}

DiscreteState initialize(const StructuredTriMesh& mesh, const ProblemData& data)
{
    DiscreteState state;
    state.t = 0.0;
    const ScalarField p0 = data.p0;
    const ScalarField psi0 = data.psi_initial;
    state.p = l2_project_scalar(mesh, [&](const Vec2& x) {
        return (p0 ? p0(x) : 0.0) - (psi0 ? psi0(x) : 0.0);
    });
    state.s = l2_project_vector(mesh, [&](const Vec2& x) {
        return Vec2(data.grad_p0_x ? data.grad_p0_x(x) : 0.0, data.grad_p0_y ? data.grad_p0_y(x) : 0.0);
    });

    // u_h^0 is the L2 projection onto RT0 of the piecewise constant -K(|s_T|) s_T.
    const AssembledSystem sys = assemble(mesh);
    const Vector k = elementwise_mobility(data.law, state.s);
    Vector target(state.s.size());
    for (Eigen::Index t = 0; t < k.size(); ++t) {
        target[2 * t] = -k[t] * state.s[2 * t];
        target[2 * t + 1] = -k[t] * state.s[2 * t + 1];
    }
    const Vector rhs = sys.projection.transpose() * target;
    if (rhs.isZero(0.0)) {
        state.u = Vector::Zero(sys.layout.n_u);
        return state;
    }
    Eigen::SimplicialLLT<SparseMatrix> mass(sys.mass_u);
    if (mass.info() != Eigen::Success) {
        throw FactorizationError("initialize: RT0 mass matrix factorization failed");
    }
    state.u = mass.solve(rhs);
    return state;
}

StepResult picard_iterate(const StructuredTriMesh& mesh, const DiscreteState& previous, double t_n,
                          const SolverConfig& config, const ProblemData& data)
{
    TimeStepper stepper(mesh, data, config);
    return stepper.step(previous, t_n);
}

RunResult run(const StructuredTriMesh& mesh, const ProblemData& data, const SolverConfig& config)
{
    if (!(data.t_final > 0.0)) {
        throw DomainError("run: t_final must be positive");
    }
    if (!(config.dt > 0.0) || config.dt > data.t_final * (1.0 + 1e-12)) {
        throw DomainError("run: dt must lie in (0, t_final]");
    }
    const double ratio = data.t_final / config.dt;
    const long steps = std::lround(ratio);
    if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-12 * ratio) {
        throw DomainError("run: t_final / dt must be a positive integer");
    }

    TimeStepper stepper(mesh, data, config);
    RunResult out;
    DiscreteState state = stepper.initialize();
    out.diagnostics.reserve(static_cast<std::size_t>(steps));
    for (long n = 1; n <= steps; ++n) {
        const double t_n = data.t_final * static_cast<double>(n) / static_cast<double>(steps);
        StepResult next;
        try {
            next = stepper.step(state, t_n);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("time step " + std::to_string(n) + ": " + e.what(), e.last_residual());
        } catch (const FactorizationError& e) {
            throw FactorizationError("time step " + std::to_string(n) + ": " + e.what());
        }
        out.diagnostics.push_back(stepper.diagnose(state, next.state, static_cast<int>(n), next.iterations));
        state = std::move(next.state);
    }
    out.final_state = std::move(state);
    return out;
}

void write_diagnostics_csv(std::ostream& os, const std::vector<StepDiagnostics>& rows)
{
    const auto prec = os.precision(12);
    os << "step,t,picard_iters,l2_pbar,l2_weighted_s,linf_p\n";
    for (const auto& r : rows) {
        os << r.step << ',' << r.t << ',' << r.picard_iters << ',' << r.l2_pbar << ',' << r.l2_weighted_s
           << ',' << r.linf_p << '\n';
    }
    os.precision(prec);
}

} // namespace forch
