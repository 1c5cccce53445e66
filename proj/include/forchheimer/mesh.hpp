#pragma once

#include "forchheimer/forchheimer_law.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace forch {

struct Triangle {
    std::array<int, 3> vertices{};   // counter-clockwise
    std::array<int, 3> edges{};      // local edge i is opposite local vertex i
    std::array<int, 3> signs{};      // +1 when the global edge normal points out of this triangle
    double area{0.0};
};

struct Edge {
    std::array<int, 2> vertices{};
    Vec2 normal{Vec2::Zero()};       // unit, globally fixed orientation
    double length{0.0};
    bool boundary{false};
};

/**
 * Uniform triangulation of the unit square: n x n squares, each cut along the
 * diagonal from its bottom-left to its top-right corner.
 *
 * Numbering: vertex (i, j) -> j (n + 1) + i; square (i, j) owns triangles
 * 2 (j n + i) (below the diagonal) and 2 (j n + i) + 1 (above it). Edges are
 * horizontal first, then vertical, then diagonal. Horizontal edges carry the
 * normal (0, 1), vertical edges (1, 0), diagonals (1, -1) / sqrt 2.
 */
class StructuredTriMesh {
public:
    explicit StructuredTriMesh(int n);

    [[nodiscard]] int n() const noexcept { return n_; }
    /// Largest element diameter, sqrt(2) / n.
    [[nodiscard]] double h() const noexcept;

    [[nodiscard]] const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }

    [[nodiscard]] int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
    [[nodiscard]] int num_triangles() const noexcept { return static_cast<int>(triangles_.size()); }
    [[nodiscard]] int num_edges() const noexcept { return static_cast<int>(edges_.size()); }

    [[nodiscard]] const Vec2& vertex(int triangle, int local) const
    {
        return vertices_[static_cast<std::size_t>(triangles_[static_cast<std::size_t>(triangle)].vertices[static_cast<std::size_t>(local)])];
    }
    [[nodiscard]] Vec2 centroid(int triangle) const;

    /// Map barycentric coordinates on a triangle to a physical point.
    [[nodiscard]] Vec2 map_point(int triangle, const std::array<double, 3>& bary) const;

    /// Barycentric coordinates of a point with respect to a triangle.
    [[nodiscard]] std::array<double, 3> barycentric(int triangle, const Vec2& x) const;
    [[nodiscard]] bool contains(int triangle, const Vec2& x, double tol = 1e-12) const;

    /// Plain-text dump: vertices, triangles and edges sections.
    void write(std::ostream& os) const;

private:
    int n_;
    std::vector<Vec2> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<Edge> edges_;
};

inline StructuredTriMesh build_mesh(int n) { return StructuredTriMesh(n); }

/// Symmetric rule on a triangle in barycentric coordinates; weights sum to 1.
struct QuadratureRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    int degree{0};
};

/// Gaussian rule exact for polynomials up to `degree` (1..6).
const QuadratureRule& triangle_quadrature(int degree);

} // namespace forch
