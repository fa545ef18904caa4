#include "tlsc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "tlsc/errors.hpp"

namespace tlsc {

Mesh::Mesh(const Rect& domain, int n) : domain_(domain), n_(n) {
    if (n < 1) throw Error("Mesh: subdivisions must be >= 1");
    if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0))
        throw Error("Mesh: degenerate rectangle");

    dx_ = domain.width() / n;
    dy_ = domain.height() / n;
    h_ = std::hypot(dx_, dy_);

    const int m = n + 1;
    vertices_.resize(static_cast<std::size_t>(m) * m);
    boundary_.resize(vertices_.size());
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            const std::size_t v = static_cast<std::size_t>(j) * m + i;
            // i/n then scale: keeps vertex coordinates bitwise identical
            // across n -> 2n refinement (i/n == 2i/2n in IEEE).
            vertices_[v] = {domain.x0 + domain.width() * (double(i) / n),
                            domain.y0 + domain.height() * (double(j) / n)};
            boundary_[v] = (i == 0 || i == n || j == 0 || j == n) ? 1 : 0;
        }
    }
    interior_count_ = (n - 1) * (n - 1);

    triangles_.resize(static_cast<std::size_t>(2) * n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = j * m + i;
            const int v10 = j * m + i + 1;
            const int v01 = (j + 1) * m + i;
            const int v11 = (j + 1) * m + i + 1;
            const std::size_t cell = static_cast<std::size_t>(j) * n + i;
            triangles_[2 * cell] = {v00, v10, v11};      // below the diagonal
            triangles_[2 * cell + 1] = {v00, v11, v01};  // above
        }
    }
}

Mesh build_uniform_mesh(const Rect& domain, int subdivisions) {
    return Mesh(domain, subdivisions);
}

double Mesh::triangle_area(int t) const {
    const auto& tri = triangles_[static_cast<std::size_t>(t)];
    const Vec2 a = vertices_[static_cast<std::size_t>(tri[0])];
    const Vec2 b = vertices_[static_cast<std::size_t>(tri[1])];
    const Vec2 c = vertices_[static_cast<std::size_t>(tri[2])];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

TriangleLocation Mesh::locate(Vec2 p) const {
    const double tol = 1e-12 * std::max({1.0, domain_.width(), domain_.height()});
    if (p.x < domain_.x0 - tol || p.x > domain_.x1 + tol ||
        p.y < domain_.y0 - tol || p.y > domain_.y1 + tol) {
        std::ostringstream os;
        os << "locate: point (" << p.x << ", " << p.y << ") outside domain";
        throw Error(os.str());
    }
    const double sx = std::clamp((p.x - domain_.x0) / dx_, 0.0, double(n_));
    const double sy = std::clamp((p.y - domain_.y0) / dy_, 0.0, double(n_));
    const int i = std::min(static_cast<int>(sx), n_ - 1);
    const int j = std::min(static_cast<int>(sy), n_ - 1);
    const double fx = sx - i;
    const double fy = sy - j;

    TriangleLocation loc;
    const int cell = j * n_ + i;
    if (fy <= fx) {
        // triangle (v00, v10, v11)
        loc.triangle = 2 * cell;
        loc.barycentric = {1.0 - fx, fx - fy, fy};
    } else {
        // triangle (v00, v11, v01)
        loc.triangle = 2 * cell + 1;
        loc.barycentric = {1.0 - fy, fx, fy - fx};
    }
    return loc;
}

double evaluate_p1(const Mesh& mesh, std::span<const double> nodal, Vec2 x) {
    if (nodal.size() != static_cast<std::size_t>(mesh.vertex_count()))
        throw Error("evaluate_p1: nodal length != vertex count");
    const TriangleLocation loc = mesh.locate(x);
    const auto& tri = mesh.triangles()[static_cast<std::size_t>(loc.triangle)];
    double v = 0.0;
    for (int k = 0; k < 3; ++k)
        v += loc.barycentric[static_cast<std::size_t>(k)] * nodal[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
    return v;
}

Vec2 p1_triangle_gradient(const Mesh& mesh, int t, std::span<const double> nodal) {
    const auto& tri = mesh.triangles()[static_cast<std::size_t>(t)];
    const Vec2 a = mesh.vertices()[static_cast<std::size_t>(tri[0])];
    const Vec2 b = mesh.vertices()[static_cast<std::size_t>(tri[1])];
    const Vec2 c = mesh.vertices()[static_cast<std::size_t>(tri[2])];
    const double ua = nodal[static_cast<std::size_t>(tri[0])];
    const double ub = nodal[static_cast<std::size_t>(tri[1])];
    const double uc = nodal[static_cast<std::size_t>(tri[2])];
    const double two_area = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    // grad phi_a = perp(c-b)/2A etc., with perp(v) = (v.y, -v.x)
    const double gx = (ua * (b.y - c.y) + ub * (c.y - a.y) + uc * (a.y - b.y)) / two_area;
    const double gy = (ua * (c.x - b.x) + ub * (a.x - c.x) + uc * (b.x - a.x)) / two_area;
    return {gx, gy};
}

Vec2 evaluate_p1_gradient(const Mesh& mesh, std::span<const double> nodal, Vec2 x) {
    if (nodal.size() != static_cast<std::size_t>(mesh.vertex_count()))
        throw Error("evaluate_p1_gradient: nodal length != vertex count");
    const TriangleLocation loc = mesh.locate(x);
    return p1_triangle_gradient(mesh, loc.triangle, nodal);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
    out << "vertices " << mesh.vertex_count() << " triangles " << mesh.triangle_count() << "\n";
    out.precision(17);
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const Vec2 p = mesh.vertices()[static_cast<std::size_t>(v)];
        out << p.x << " " << p.y << " " << int(mesh.boundary_mask()[static_cast<std::size_t>(v)]) << "\n";
    }
    for (const auto& t : mesh.triangles())
        out << t[0] << " " << t[1] << " " << t[2] << "\n";
}

}  // namespace tlsc
