#include "forchheimer/fem_spaces.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <sstream>

namespace forch {
namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

Vec2 edge_midpoint(const StructuredTriMesh& mesh, int e)
{
    const auto& edge = mesh.edges()[idx(e)];
    return 0.5 * (mesh.vertices()[idx(edge.vertices[0])] + mesh.vertices()[idx(edge.vertices[1])]);
}

TEST(Rt0, UnitNormalComponentOnOwnEdge)
{
    const StructuredTriMesh mesh(3);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles()[idx(t)];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const int e = tri.edges[idx(j)];
                // Two points on edge j.
                const auto& edge = mesh.edges()[idx(e)];
                const Vec2 a = mesh.vertices()[idx(edge.vertices[0])];
                const Vec2 b = mesh.vertices()[idx(edge.vertices[1])];
                for (double lam : {0.1, 0.5, 0.8}) {
                    const Vec2 x = a + lam * (b - a);
                    const double flux = rt0_eval(mesh, t, i, x).dot(edge.normal);
                    EXPECT_NEAR(flux, i == j ? 1.0 : 0.0, 1e-13);
                }
            }
        }
    }
}

TEST(Rt0, EvalRejectsBadInput)
{
    const StructuredTriMesh mesh(2);
    EXPECT_THROW((void)rt0_eval(mesh, 0, 3, mesh.centroid(0)), DomainError);
    EXPECT_THROW((void)rt0_eval(mesh, 99, 0, mesh.centroid(0)), DomainError);
    EXPECT_THROW((void)rt0_eval(mesh, 0, 0, Vec2(0.9, 0.9)), DomainError);
    EXPECT_EQ(rt0_eval(mesh, 0, 1, mesh.centroid(0)), rt0_basis(mesh, 0, 1, mesh.centroid(0)));
}

TEST(Rt0, InterpolationReproducesLinearFields)
{
    const StructuredTriMesh mesh(4);
    const VectorField f = [](const Vec2& x) { return Vec2(0.3 + 2.0 * x.x(), -1.0 + 2.0 * x.y()); };
    const Vector u = rt0_interpolate(mesh, f);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        double l1 = d(rng);
        double l2 = d(rng) * (1.0 - l1);
        const Vec2 x = mesh.map_point(t, {l1, l2, 1.0 - l1 - l2});
        EXPECT_LT((rt0_field(mesh, u, t, x) - f(x)).norm(), 1e-13);
    }
    for (int e = 0; e < mesh.num_edges(); ++e) {
        EXPECT_NEAR(u[e], f(edge_midpoint(mesh, e)).dot(mesh.edges()[idx(e)].normal), 1e-14);
    }
}

TEST(Assembly, SingleSquareDivergence)
{
    const StructuredTriMesh mesh(1);
    const AssembledSystem sys = assemble(mesh);
    EXPECT_EQ(sys.layout.n_p, 2);
    EXPECT_EQ(sys.layout.n_s, 4);
    EXPECT_EQ(sys.layout.n_u, 5);
    const Eigen::MatrixXd B(sys.divergence);
    EXPECT_EQ(B.rows(), 2);
    EXPECT_EQ(B.cols(), 5);
    for (int c = 0; c < 5; ++c) {
        int nonzero = 0;
        for (int r = 0; r < 2; ++r) {
            nonzero += B(r, c) != 0.0 ? 1 : 0;
        }
        EXPECT_EQ(nonzero, mesh.edges()[idx(c)].boundary ? 1 : 2);
    }
    // The diagonal is shared with opposite signs.
    const int diag = 4;
    EXPECT_NEAR(B(0, diag), -B(1, diag), 0.0);
    EXPECT_NEAR(std::abs(B(0, diag)), std::sqrt(2.0), 1e-15);
}

TEST(Assembly, DivergenceEntriesAreSignedLengths)
{
    const StructuredTriMesh mesh(8);
    const AssembledSystem sys = assemble(mesh);
    const Eigen::MatrixXd B(sys.divergence);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles()[idx(t)];
        for (int i = 0; i < 3; ++i) {
            const int e = tri.edges[idx(i)];
            EXPECT_NEAR(B(t, e), tri.signs[idx(i)] * mesh.edges()[idx(e)].length, 1e-14);
        }
        EXPECT_EQ((B.row(t).array() != 0.0).count(), 3);
    }
    EXPECT_NEAR(sys.mass_p.sum(), 1.0, 1e-14);
    EXPECT_NEAR(sys.mass_s.sum(), 2.0, 1e-14);
}

TEST(Assembly, DivergenceOfConstantFieldVanishes)
{
    const StructuredTriMesh mesh(6);
    const AssembledSystem sys = assemble(mesh);
    for (const Vec2 c : {Vec2(1.0, 0.0), Vec2(0.0, 1.0), Vec2(-0.4, 2.5)}) {
        const Vector u = rt0_interpolate(mesh, [c](const Vec2&) { return c; });
        EXPECT_LT((sys.divergence * u).cwiseAbs().maxCoeff(), 1e-14);
    }
    // div (x, y) = 2.
    const Vector u = rt0_interpolate(mesh, [](const Vec2& x) { return x; });
    const Vector div = sys.divergence * u;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        EXPECT_NEAR(div[t], 2.0 * sys.mass_p[t], 1e-14);
    }
}

TEST(Assembly, FluxMassSymmetricPositiveDefinite)
{
    const StructuredTriMesh mesh(3);
    const AssembledSystem sys = assemble(mesh);
    const Eigen::MatrixXd M(sys.mass_u);
    EXPECT_LT((M - M.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);

    // (u, u) for u = (x, y) is int |x|^2 = 2/3.
    const Vector u = rt0_interpolate(mesh, [](const Vec2& x) { return x; });
    EXPECT_NEAR(u.dot(M * u), 2.0 / 3.0, 1e-13);
}

TEST(Assembly, ProjectionGivesElementAverages)
{
    const StructuredTriMesh mesh(5);
    const AssembledSystem sys = assemble(mesh);
    const VectorField f = [](const Vec2& x) { return Vec2(0.5 + 3.0 * x.x(), -2.0 + 3.0 * x.y()); };
    const Vector u = rt0_interpolate(mesh, f);
    const Vector cu = sys.projection * u;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Vec2 avg = f(mesh.centroid(t));  // linear: average equals centroid value
        EXPECT_NEAR(cu[2 * t] / sys.mass_s[2 * t], avg.x(), 1e-13);
        EXPECT_NEAR(cu[2 * t + 1] / sys.mass_s[2 * t + 1], avg.y(), 1e-13);
    }
}

TEST(Assembly, Deterministic)
{
    const StructuredTriMesh mesh(4);
    const AssembledSystem a = assemble(mesh);
    const AssembledSystem b = assemble(mesh);
    EXPECT_EQ(Eigen::MatrixXd(a.mass_u), Eigen::MatrixXd(b.mass_u));
    EXPECT_EQ(Eigen::MatrixXd(a.divergence), Eigen::MatrixXd(b.divergence));
    EXPECT_EQ(Eigen::MatrixXd(a.projection), Eigen::MatrixXd(b.projection));
}

TEST(Projection, ConstantsAndAffine)
{
    const StructuredTriMesh mesh(4);
    const Vector c = l2_project_scalar(mesh, [](const Vec2&) { return 2.5; });
    EXPECT_LT((c.array() - 2.5).abs().maxCoeff(), 1e-14);
    const Vector a = l2_project_scalar(mesh, [](const Vec2& x) { return 1.0 + 2.0 * x.x() - x.y(); });
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Vec2 g = mesh.centroid(t);
        EXPECT_NEAR(a[t], 1.0 + 2.0 * g.x() - g.y(), 1e-14);
    }
    const Vector v = l2_project_vector(mesh, [](const Vec2& x) { return Vec2(x.y(), -x.x()); });
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Vec2 g = mesh.centroid(t);
        EXPECT_NEAR(v[2 * t], g.y(), 1e-14);
        EXPECT_NEAR(v[2 * t + 1], -g.x(), 1e-14);
    }
}

double projection_error(int n)
{
    const StructuredTriMesh mesh(n);
    const ScalarField w = [](const Vec2& x) { return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()); };
    const Vector p = l2_project_scalar(mesh, w, 6);
    const auto& rule = triangle_quadrature(6);
    double err = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double area = mesh.triangles()[idx(t)].area;
        for (std::size_t k = 0; k < rule.points.size(); ++k) {
            const double d = w(mesh.map_point(t, rule.points[k])) - p[t];
            err += rule.weights[k] * area * d * d;
        }
    }
    return std::sqrt(err);
}

TEST(Projection, FirstOrderOnSmoothFunction)
{
    const double e8 = projection_error(8);
    const double e16 = projection_error(16);
    const double e32 = projection_error(32);
    EXPECT_NEAR(e8 / e16, 2.0, 0.1);
    EXPECT_NEAR(e16 / e32, 2.0, 0.05);
}

TEST(Projection, StableInL2)
{
    const StructuredTriMesh mesh(6);
    const ScalarField w = [](const Vec2& x) { return std::exp(x.x()) * std::cos(3.0 * x.y()); };
    const Vector p = l2_project_scalar(mesh, w, 6);
    const AssembledSystem sys = assemble(mesh);
    const double proj_norm = std::sqrt(p.cwiseProduct(p).dot(sys.mass_p));
    // ||w||^2 = int e^{2x} cos^2(3y)
    const double exact = std::sqrt(0.5 * (std::exp(2.0) - 1.0) * (0.5 + std::sin(6.0) / 12.0));
    EXPECT_LE(proj_norm, exact + 1e-12);
}

TEST(Assembly, CoordinateDump)
{
    SparseMatrix m(2, 2);
    m.insert(1, 0) = 2.5;
    m.makeCompressed();
    std::ostringstream os;
    write_coordinate(os, m);
    EXPECT_NE(os.str().find("1 0 2.5"), std::string::npos);
}

} // namespace
} // namespace forch
