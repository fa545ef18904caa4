#include "tlsc/assembly.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "tlsc/errors.hpp"
#include "tlsc/quadrature.hpp"

namespace tlsc {

namespace {

struct TriangleGeometry {
    std::array<int, 3> verts;
    std::array<Vec2, 3> coords;
    std::array<Vec2, 3> basis_gradients;
    double area;
};

TriangleGeometry triangle_geometry(const Mesh& mesh, int t) {
    TriangleGeometry g;
    g.verts = mesh.triangles()[static_cast<std::size_t>(t)];
    for (int k = 0; k < 3; ++k)
        g.coords[static_cast<std::size_t>(k)] = mesh.vertices()[static_cast<std::size_t>(g.verts[static_cast<std::size_t>(k)])];
    const Vec2 a = g.coords[0], b = g.coords[1], c = g.coords[2];
    const double two_area = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    g.area = 0.5 * two_area;
    g.basis_gradients[0] = {(b.y - c.y) / two_area, (c.x - b.x) / two_area};
    g.basis_gradients[1] = {(c.y - a.y) / two_area, (a.x - c.x) / two_area};
    g.basis_gradients[2] = {(a.y - b.y) / two_area, (b.x - a.x) / two_area};
    return g;
}

Vec2 quad_point(const TriangleGeometry& g, const TriangleRule::Node& node) {
    Vec2 p{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        p.x += node.barycentric[static_cast<std::size_t>(k)] * g.coords[static_cast<std::size_t>(k)].x;
        p.y += node.barycentric[static_cast<std::size_t>(k)] * g.coords[static_cast<std::size_t>(k)].y;
    }
    return p;
}

}  // namespace

CsrMatrix assemble_stiffness(const Mesh& mesh, const ScalarField& a) {
    const TriangleRule& rule = triangle_rule_degree4();
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 9);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const TriangleGeometry g = triangle_geometry(mesh, t);
        double coeff_integral = 0.0;
        for (const auto& node : rule.nodes) {
            const Vec2 x = quad_point(g, node);
            const double av = a(x);
            if (!(av > 0.0)) {
                std::ostringstream os;
                os << "assemble_stiffness: coefficient " << av << " <= 0 at ("
                   << x.x << ", " << x.y << "), coercivity violated";
                throw CoercivityError(os.str());
            }
            coeff_integral += node.weight * av;
        }
        coeff_integral *= g.area;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const double v = coeff_integral *
                                 dot(g.basis_gradients[static_cast<std::size_t>(i)], g.basis_gradients[static_cast<std::size_t>(j)]);
                triplets.push_back({g.verts[static_cast<std::size_t>(i)], g.verts[static_cast<std::size_t>(j)], v});
            }
        }
    }
    return CsrMatrix::from_triplets(mesh.vertex_count(), mesh.vertex_count(), std::move(triplets));
}

CsrMatrix assemble_weighted_mass(const Mesh& mesh, const ScalarField& w) {
    const TriangleRule& rule = triangle_rule_degree4();
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 9);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const TriangleGeometry g = triangle_geometry(mesh, t);
        std::array<std::array<double, 3>, 3> local{};
        for (const auto& node : rule.nodes) {
            const double wv = node.weight * g.area * w(quad_point(g, node));
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    local[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                        wv * node.barycentric[static_cast<std::size_t>(i)] * node.barycentric[static_cast<std::size_t>(j)];
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                triplets.push_back({g.verts[static_cast<std::size_t>(i)], g.verts[static_cast<std::size_t>(j)],
                                    local[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]});
    }
    return CsrMatrix::from_triplets(mesh.vertex_count(), mesh.vertex_count(), std::move(triplets));
}

std::vector<double> assemble_load(const Mesh& mesh, const ScalarField& s) {
    const TriangleRule& rule = triangle_rule_degree4();
    std::vector<double> load(static_cast<std::size_t>(mesh.vertex_count()), 0.0);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const TriangleGeometry g = triangle_geometry(mesh, t);
        for (const auto& node : rule.nodes) {
            const double sv = node.weight * g.area * s(quad_point(g, node));
            for (int i = 0; i < 3; ++i)
                load[static_cast<std::size_t>(g.verts[static_cast<std::size_t>(i)])] += sv * node.barycentric[static_cast<std::size_t>(i)];
        }
    }
    return load;
}

std::vector<double> ReducedSystem::expand(std::span<const double> reduced) const {
    std::vector<double> full(static_cast<std::size_t>(full_size), 0.0);
    for (std::size_t i = 0; i < interior.size(); ++i)
        full[static_cast<std::size_t>(interior[i])] = reduced[i];
    return full;
}

std::vector<double> ReducedSystem::restrict_vector(std::span<const double> full) const {
    std::vector<double> reduced(interior.size());
    for (std::size_t i = 0; i < interior.size(); ++i)
        reduced[i] = full[static_cast<std::size_t>(interior[i])];
    return reduced;
}

ReducedSystem apply_dirichlet(const CsrMatrix& A, std::span<const double> b, const Mesh& mesh) {
    if (A.rows() != mesh.vertex_count() || b.size() != static_cast<std::size_t>(mesh.vertex_count()))
        throw Error("apply_dirichlet: system/mesh size mismatch");
    ReducedSystem sys;
    sys.full_size = mesh.vertex_count();
    sys.interior.reserve(static_cast<std::size_t>(mesh.interior_count()));
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (!mesh.boundary_mask()[static_cast<std::size_t>(v)]) sys.interior.push_back(v);
    sys.matrix = A.restrict_to(sys.interior);
    sys.rhs = sys.restrict_vector(b);
    return sys;
}

std::vector<double> p1_vertex_weights(const Mesh& mesh) {
    std::vector<double> w(static_cast<std::size_t>(mesh.vertex_count()), 0.0);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const double third = mesh.triangle_area(t) / 3.0;
        for (int v : mesh.triangles()[static_cast<std::size_t>(t)]) w[static_cast<std::size_t>(v)] += third;
    }
    return w;
}

}  // namespace tlsc
