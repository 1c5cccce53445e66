#include "forchheimer/mesh.hpp"

#include <cmath>
#include <ostream>

namespace forch {

StructuredTriMesh::StructuredTriMesh(int n) : n_(n)
{
    if (n < 1) {
        throw DomainError("build_mesh: n must be at least 1");
    }
    const int nv = n + 1;
    vertices_.reserve(static_cast<std::size_t>(nv * nv));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            vertices_.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
        }
    }
    auto vid = [nv](int i, int j) { return j * nv + i; };

    const int num_horizontal = n * (n + 1);
    const int num_vertical = n * (n + 1);
    edges_.resize(static_cast<std::size_t>(num_horizontal + num_vertical + n * n));
    auto horizontal = [n](int i, int j) { return j * n + i; };
    auto vertical = [=](int i, int j) { return num_horizontal + j * (n + 1) + i; };
    auto diagonal = [=](int i, int j) { return num_horizontal + num_vertical + j * n + i; };

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i < n; ++i) {
            Edge& e = edges_[static_cast<std::size_t>(horizontal(i, j))];
            e.vertices = {vid(i, j), vid(i + 1, j)};
            e.normal = Vec2(0.0, 1.0);
            e.boundary = (j == 0 || j == n);
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i <= n; ++i) {
            Edge& e = edges_[static_cast<std::size_t>(vertical(i, j))];
            e.vertices = {vid(i, j), vid(i, j + 1)};
            e.normal = Vec2(1.0, 0.0);
            e.boundary = (i == 0 || i == n);
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            Edge& e = edges_[static_cast<std::size_t>(diagonal(i, j))];
            e.vertices = {vid(i, j), vid(i + 1, j + 1)};
            e.normal = Vec2(inv_sqrt2, -inv_sqrt2);
            e.boundary = false;
        }
    }
    for (Edge& e : edges_) {
        e.length = (vertices_[static_cast<std::size_t>(e.vertices[1])] -
                    vertices_[static_cast<std::size_t>(e.vertices[0])])
                       .norm();
    }

    triangles_.resize(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int sq = j * n + i;
            // Below the diagonal: (i,j) (i+1,j) (i+1,j+1).
            Triangle& lower = triangles_[static_cast<std::size_t>(2 * sq)];
            lower.vertices = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)};
            lower.edges = {vertical(i + 1, j), diagonal(i, j), horizontal(i, j)};
            // Above the diagonal: (i,j) (i+1,j+1) (i,j+1).
            Triangle& upper = triangles_[static_cast<std::size_t>(2 * sq + 1)];
            upper.vertices = {vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)};
            upper.edges = {horizontal(i, j + 1), vertical(i, j), diagonal(i, j)};
        }
    }
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        Triangle& tri = triangles_[t];
        const Vec2& a = vertices_[static_cast<std::size_t>(tri.vertices[0])];
        const Vec2& b = vertices_[static_cast<std::size_t>(tri.vertices[1])];
        const Vec2& c = vertices_[static_cast<std::size_t>(tri.vertices[2])];
        tri.area = 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
        const Vec2 center = (a + b + c) / 3.0;
        for (int k = 0; k < 3; ++k) {
            const Edge& e = edges_[static_cast<std::size_t>(tri.edges[static_cast<std::size_t>(k)])];
            const Vec2 mid = 0.5 * (vertices_[static_cast<std::size_t>(e.vertices[0])] +
                                    vertices_[static_cast<std::size_t>(e.vertices[1])]);
            tri.signs[static_cast<std::size_t>(k)] = e.normal.dot(mid - center) > 0.0 ? 1 : -1;
        }
    }
}

double StructuredTriMesh::h() const noexcept
{
    return std::sqrt(2.0) / n_;
}

Vec2 StructuredTriMesh::centroid(int triangle) const
{
    return (vertex(triangle, 0) + vertex(triangle, 1) + vertex(triangle, 2)) / 3.0;
}

Vec2 StructuredTriMesh::map_point(int triangle, const std::array<double, 3>& bary) const
{
    return bary[0] * vertex(triangle, 0) + bary[1] * vertex(triangle, 1) + bary[2] * vertex(triangle, 2);
}

std::array<double, 3> StructuredTriMesh::barycentric(int triangle, const Vec2& x) const
{
    const Vec2& a = vertex(triangle, 0);
    const Vec2& b = vertex(triangle, 1);
    const Vec2& c = vertex(triangle, 2);
    const double twice_area = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    auto cross = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return (q - p).x() * (r - p).y() - (q - p).y() * (r - p).x();
    };
    return {cross(x, b, c) / twice_area, cross(a, x, c) / twice_area, cross(a, b, x) / twice_area};
}

bool StructuredTriMesh::contains(int triangle, const Vec2& x, double tol) const
{
    for (double l : barycentric(triangle, x)) {
        if (l < -tol) {
            return false;
        }
    }
    return true;
}

void StructuredTriMesh::write(std::ostream& os) const
{
    const auto prec = os.precision(17);
    os << "vertices " << vertices_.size() << '\n';
    for (const Vec2& v : vertices_) {
        os << v.x() << ' ' << v.y() << '\n';
    }
    os << "triangles " << triangles_.size() << '\n';
    for (const Triangle& t : triangles_) {
        os << t.vertices[0] << ' ' << t.vertices[1] << ' ' << t.vertices[2] << '\n';
    }
    os << "edges " << edges_.size() << '\n';
    for (const Edge& e : edges_) {
        os << e.vertices[0] << ' ' << e.vertices[1] << ' ' << (e.boundary ? 1 : 0) << '\n';
    }
    os.precision(prec);
}

namespace {

std::vector<std::array<double, 3>> orbit21(double a)
{
    const double b = 1.0 - 2.0 * a;
    return {{a, a, b}, {a, b, a}, {b, a, a}};
}

std::vector<std::array<double, 3>> orbit111(double a, double b)
{
    const double c = 1.0 - a - b;
    return {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
}

void append(QuadratureRule& rule, const std::vector<std::array<double, 3>>& pts, double w)
{
    for (const auto& p : pts) {
        rule.points.push_back(p);
        rule.weights.push_back(w);
    }
}

QuadratureRule make_rule(int degree)
{
    QuadratureRule rule;
    rule.degree = degree;
    switch (degree) {
    case 1:
        append(rule, {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}}, 1.0);
        break;
    case 2:
        // edge midpoints
        append(rule, orbit21(0.5), 1.0 / 3.0);
        break;
    case 3:
    case 4:
        append(rule, orbit21(0.44594849091596488632), 0.2233815896780114657);
        append(rule, orbit21(0.09157621350977074346), 0.10995174365532186764);
        break;
    case 5: {
        const double r15 = std::sqrt(15.0);
        append(rule, {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}}, 9.0 / 40.0);
        append(rule, orbit21((6.0 - r15) / 21.0), (155.0 - r15) / 1200.0);
        append(rule, orbit21((6.0 + r15) / 21.0), (155.0 + r15) / 1200.0);
        break;
    }
    case 6:
        append(rule, orbit21(0.24928674517091042129), 0.11678627572637936603);
        append(rule, orbit21(0.06308901449150222834), 0.050844906370206816921);
        append(rule, orbit111(0.053145049844816947353, 0.31035245103378440542), 0.082851075618373575194);
        break;
    default:
        throw DomainError("triangle_quadrature: supported degrees are 1..6");
    }
    return rule;
}

} // namespace

const QuadratureRule& triangle_quadrature(int degree)
{
    if (degree < 1 || degree > 6) {
        throw DomainError("triangle_quadrature: supported degrees are 1..6");
    }
    static const std::array<QuadratureRule, 6> rules = {make_rule(1), make_rule(2), make_rule(3),
                                                        make_rule(4), make_rule(5), make_rule(6)};
    return rules[static_cast<std::size_t>(degree - 1)];
}

} // namespace forch
