#pragma once

#include "forchheimer/fem_spaces.hpp"
#include "forchheimer/forchheimer_law.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <vector>

namespace forch {

using SpaceTimeScalar = std::function<double(const Vec2&, double)>;
using SpaceTimeVector = std::function<Vec2(const Vec2&, double)>;

/// Raised when the sparse factorization of a linearized system fails.
class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Data of the shifted problem for pbar = p - Psi, where Psi extends the
 * Dirichlet data into the domain:
 *
 *   pbar_t + div u = f - Psi_t,   u = -K(|s|) s,   s - grad pbar = grad Psi.
 *
 * Empty callables are treated as identically zero.
 */
struct ProblemData {
    ForchheimerPolynomial law = ForchheimerPolynomial::two_term(1.0, 1.0);
    SpaceTimeScalar f;
    SpaceTimeVector grad_psi;
    SpaceTimeScalar psi_t;
    ScalarField p0;
    ScalarField grad_p0_x;  // components of grad p0
    ScalarField grad_p0_y;
    ScalarField psi_initial;  // Psi(., 0)
    double t_final{1.0};
};

struct DiscreteState {
    Vector p;  // pbar_h, one value per triangle
    Vector s;  // (s_x, s_y) per triangle
    Vector u;  // RT0 edge coefficients
    double t{0.0};
};

struct SolverConfig {
    double dt{0.0};
    double nonlinear_tol{1e-6};
    int max_picard{100};
};

struct StepResult {
    DiscreteState state;
    int iterations{0};
    std::vector<double> increments;  // ||s^{k+1} - s^k||_{L2} per Picard sweep
};

struct StepDiagnostics {
    int step{0};
    double t{0.0};
    int picard_iters{0};
    double l2_pbar{0.0};
    double l2_weighted_s{0.0};  // || K^{1/2}(|s_h|) s_h ||
    double linf_p{0.0};
    double mass_balance_residual{0.0};
    double max_flux_mismatch{0.0};  // max_T |avg_T(u_h) + K(|s_T|) s_T|
};

struct RunResult {
    DiscreteState final_state;
    std::vector<StepDiagnostics> diagnostics;
};

/**
 * Backward Euler with Picard linearization for the expanded mixed RT0 scheme.
 *
 * With K frozen elementwise the gradient is eliminated locally,
 * s_T = -avg_T(u) / K_T, and since the pressure block is diagonal it is
 * eliminated as well, leaving an SPD system in the flux coefficients:
 *
 *   (C^T D^{-1} C + dt B^T M_p^{-1} B) u = -G + dt B^T M_p^{-1} R,
 *   D = diag(K_T |T|),  R = F + M_p pbar^{n-1} / dt.
 *
 * The sparsity pattern is analysed once; each sweep refactorizes.
 */
class TimeStepper {
public:
    TimeStepper(const StructuredTriMesh& mesh, ProblemData data, SolverConfig config);
    ~TimeStepper();
    TimeStepper(const TimeStepper&) = delete;
    TimeStepper& operator=(const TimeStepper&) = delete;

    [[nodiscard]] const AssembledSystem& system() const noexcept { return system_; }
    [[nodiscard]] const ProblemData& data() const noexcept { return data_; }
    [[nodiscard]] const SolverConfig& config() const noexcept { return config_; }

    [[nodiscard]] DiscreteState initialize() const;

    /// Solve the nonlinear system at time t_n given the state at t_n - dt.
    [[nodiscard]] StepResult step(const DiscreteState& previous, double t_n);

    /// Load vectors at time t: F_T = int_T (f - Psi_t), G_e = int grad Psi . phi_e.
    [[nodiscard]] Vector pressure_load(double t) const;
    [[nodiscard]] Vector flux_load(double t) const;

    /// Residual of the pressure rows summed over all triangles.
    [[nodiscard]] double mass_balance_residual(const DiscreteState& previous,
                                               const DiscreteState& current) const;

    [[nodiscard]] StepDiagnostics diagnose(const DiscreteState& previous, const DiscreteState& current,
                                           int step, int iterations) const;

private:
    struct Factorization;

    const StructuredTriMesh& mesh_;
    ProblemData data_;
    SolverConfig config_;
    AssembledSystem system_;
    SparseMatrix div_penalty_;  // B^T M_p^{-1} B
    std::unique_ptr<Factorization> factor_;
};

/// Elementwise K(|s_T|).
Vector elementwise_mobility(const ForchheimerPolynomial& law, const Vector& s);

/// ||s||_{L2} for piecewise constant vector coefficients.
double l2_norm_vector(const StructuredTriMesh& mesh, const Vector& s);
double l2_norm_scalar(const StructuredTriMesh& mesh, const Vector& p);

/// Initial state from the projected initial data.
DiscreteState initialize(const StructuredTriMesh& mesh, const ProblemData& data);

/// One nonlinear time step; convenience wrapper around TimeStepper.
StepResult picard_iterate(const StructuredTriMesh& mesh, const DiscreteState& previous, double t_n,
                          const SolverConfig& config, const ProblemData& data);

/// Full run from t = 0 to data.t_final.
RunResult run(const StructuredTriMesh& mesh, const ProblemData& data, const SolverConfig& config);

/// CSV: step,t,picard_iters,l2_pbar,l2_weighted_s,linf_p
void write_diagnostics_csv(std::ostream& os, const std::vector<StepDiagnostics>& rows);

} // namespace forch
