#include "forchheimer/fem_spaces.hpp"

#include <cmath>
#include <ostream>

namespace forch {

DofLayout DofLayout::of(const StructuredTriMesh& mesh)
{
    return {mesh.num_triangles(), 2 * mesh.num_triangles(), mesh.num_edges()};
}

Vec2 rt0_basis(const StructuredTriMesh& mesh, int triangle, int local_edge, const Vec2& x)
{
    const Triangle& tri = mesh.triangles()[static_cast<std::size_t>(triangle)];
    const auto k = static_cast<std::size_t>(local_edge);
    const Edge& e = mesh.edges()[static_cast<std::size_t>(tri.edges[k])];
    const Vec2& opposite = mesh.vertex(triangle, local_edge);
    return (tri.signs[k] * e.length / (2.0 * tri.area)) * (x - opposite);
}

Vec2 rt0_eval(const StructuredTriMesh& mesh, int triangle, int local_edge, const Vec2& x)
{
    if (triangle < 0 || triangle >= mesh.num_triangles() || local_edge < 0 || local_edge > 2) {
        throw DomainError("rt0_eval: triangle or local edge index out of range");
    }
    if (!mesh.contains(triangle, x)) {
        throw DomainError("rt0_eval: point lies outside the triangle");
    }
    return rt0_basis(mesh, triangle, local_edge, x);
}

Vec2 rt0_field(const StructuredTriMesh& mesh, const Vector& u, int triangle, const Vec2& x)
{
    const Triangle& tri = mesh.triangles()[static_cast<std::size_t>(triangle)];
    Vec2 v = Vec2::Zero();
    for (int k = 0; k < 3; ++k) {
        v += u[tri.edges[static_cast<std::size_t>(k)]] * rt0_basis(mesh, triangle, k, x);
    }
    return v;
}

Vector rt0_interpolate(const StructuredTriMesh& mesh, const VectorField& field)
{
    // 3-point Gauss-Legendre on [0, 1]
    const double r = std::sqrt(0.6);
    const std::array<double, 3> nodes = {0.5 * (1.0 - r), 0.5, 0.5 * (1.0 + r)};
    const std::array<double, 3> weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    Vector u(mesh.num_edges());
    for (int i = 0; i < mesh.num_edges(); ++i) {
        const Edge& e = mesh.edges()[static_cast<std::size_t>(i)];
        const Vec2& a = mesh.vertices()[static_cast<std::size_t>(e.vertices[0])];
        const Vec2& b = mesh.vertices()[static_cast<std::size_t>(e.vertices[1])];
        double mean = 0.0;
        for (std::size_t q = 0; q < 3; ++q) {
            mean += weights[q] * field(a + nodes[q] * (b - a)).dot(e.normal);
        }
        u[i] = mean;
    }
    return u;
}

AssembledSystem assemble(const StructuredTriMesh& mesh)
{
    AssembledSystem sys;
    sys.layout = DofLayout::of(mesh);
    const auto& layout = sys.layout;
    sys.mass_s.resize(layout.n_s);
    sys.mass_p.resize(layout.n_p);

    std::vector<Eigen::Triplet<double>> mass_u;
    std::vector<Eigen::Triplet<double>> div;
    std::vector<Eigen::Triplet<double>> proj;
    mass_u.reserve(static_cast<std::size_t>(9 * layout.n_p));
    div.reserve(static_cast<std::size_t>(3 * layout.n_p));
    proj.reserve(static_cast<std::size_t>(6 * layout.n_p));

    const QuadratureRule& rule = triangle_quadrature(2);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle& tri = mesh.triangles()[static_cast<std::size_t>(t)];
        sys.mass_p[t] = tri.area;
        sys.mass_s[2 * t] = tri.area;
        sys.mass_s[2 * t + 1] = tri.area;

        std::array<std::array<double, 3>, 3> local{};
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const Vec2 x = mesh.map_point(t, rule.points[q]);
            std::array<Vec2, 3> phi;
            for (int k = 0; k < 3; ++k) {
                phi[static_cast<std::size_t>(k)] = rt0_basis(mesh, t, k, x);
            }
            for (std::size_t i = 0; i < 3; ++i) {
                for (std::size_t j = 0; j < 3; ++j) {
                    local[i][j] += rule.weights[q] * tri.area * phi[i].dot(phi[j]);
                }
            }
        }

        const Vec2 center = mesh.centroid(t);
        for (std::size_t i = 0; i < 3; ++i) {
            const int ei = tri.edges[i];
            for (std::size_t j = 0; j < 3; ++j) {
                mass_u.emplace_back(ei, tri.edges[j], local[i][j]);
            }
            const double len = mesh.edges()[static_cast<std::size_t>(ei)].length;
            div.emplace_back(t, ei, tri.signs[i] * len);
            // phi_e is affine, so its integral is |T| phi_e(centroid).
            const Vec2 integral = tri.area * rt0_basis(mesh, t, static_cast<int>(i), center);
            proj.emplace_back(2 * t, ei, integral.x());
            proj.emplace_back(2 * t + 1, ei, integral.y());
        }
    }

    sys.mass_u.resize(layout.n_u, layout.n_u);
    sys.mass_u.setFromTriplets(mass_u.begin(), mass_u.end());
    sys.divergence.resize(layout.n_p, layout.n_u);
    sys.divergence.setFromTriplets(div.begin(), div.end());
    sys.projection.resize(layout.n_s, layout.n_u);
    sys.projection.setFromTriplets(proj.begin(), proj.end());
    return sys;
}

Vector l2_project_scalar(const StructuredTriMesh& mesh, const ScalarField& f, int degree)
{
    const QuadratureRule& rule = triangle_quadrature(degree);
    Vector out(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        double mean = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            mean += rule.weights[q] * f(mesh.map_point(t, rule.points[q]));
        }
        out[t] = mean;
    }
    return out;
}

Vector l2_project_vector(const StructuredTriMesh& mesh, const VectorField& f, int degree)
{
    const QuadratureRule& rule = triangle_quadrature(degree);
    Vector out(2 * mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        Vec2 mean = Vec2::Zero();
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            mean += rule.weights[q] * f(mesh.map_point(t, rule.points[q]));
        }
        out[2 * t] = mean.x();
        out[2 * t + 1] = mean.y();
    }
    return out;
}

void write_coordinate(std::ostream& os, const SparseMatrix& matrix)
{
    const auto prec = os.precision(17);
    for (int k = 0; k < matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) {
            os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
        }
    }
    os.precision(prec);
}

} // namespace forch
