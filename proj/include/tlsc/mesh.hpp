#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace tlsc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
    double x0 = -1.0;
    double y0 = -1.0;
    double x1 = 1.0;
    double y1 = 1.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
};

struct TriangleLocation {
    int triangle = -1;
    std::array<double, 3> barycentric{};
};

/// Uniform criss-cross triangulation of a rectangle with P1 connectivity.
///
/// Vertices are laid out row-major, (n+1) per side; every cell is split along
/// its SW-NE diagonal into two counterclockwise triangles. Refining n -> 2n
/// keeps the coarse vertex coordinates bitwise (coordinates are computed as
/// x0 + width * (i/n)). Immutable after construction.
class Mesh {
public:
    Mesh(const Rect& domain, int subdivisions);

    const Rect& domain() const { return domain_; }
    int subdivisions() const { return n_; }

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    const std::vector<std::uint8_t>& boundary_mask() const { return boundary_; }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int triangle_count() const { return static_cast<int>(triangles_.size()); }
    int interior_count() const { return interior_count_; }

    /// Longest edge in the triangulation (the cell diagonal).
    double h() const { return h_; }

    double triangle_area(int t) const;

    /// Locate by direct index arithmetic; throws on points outside the
    /// closed rectangle (tolerance 1e-12 relative to the domain extent).
    TriangleLocation locate(Vec2 p) const;

private:
    Rect domain_;
    int n_ = 0;
    double dx_ = 0.0, dy_ = 0.0;
    double h_ = 0.0;
    int interior_count_ = 0;
    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<std::uint8_t> boundary_;
};

Mesh build_uniform_mesh(const Rect& domain, int subdivisions);

/// Piecewise-linear interpolant of per-vertex values at x.
double evaluate_p1(const Mesh& mesh, std::span<const double> nodal, Vec2 x);

/// Gradient of the P1 interpolant at x (constant on the containing triangle).
Vec2 evaluate_p1_gradient(const Mesh& mesh, std::span<const double> nodal, Vec2 x);

/// Gradient of the P1 interpolant restricted to triangle t.
Vec2 p1_triangle_gradient(const Mesh& mesh, int t, std::span<const double> nodal);

/// Plain-text dump: `vertices <V> triangles <T>`, vertex lines `x y flag`,
/// then triangle lines `i j k`.
void write_mesh(const Mesh& mesh, std::ostream& out);

}  // namespace tlsc
