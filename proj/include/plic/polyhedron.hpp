#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "plic/error.hpp"
#include "plic/vec3.hpp"

namespace plic {

// Per-face frame: unit outward normal (Newell) and one unit co-normal per
// boundary edge. The co-normal of edge m lies in the face plane, is orthogonal
// to the edge, and points out of the face (edge_dir x normal for a loop that
// is counter-clockwise about the outward normal).
struct FaceGeometry {
    Vec3 normal;
    std::vector<Vec3> edge_conormals;
};

// Closed polygonal surface: shared vertex list + per-face index loops, each
// loop counter-clockwise about its outward normal. Faces must be planar;
// convexity is NOT required, and coplanar faces with opposite orientation are
// legal (that is how prisms with holes are encoded).
class Polyhedron {
  public:
    // Planarity tolerance, relative to the bounding-box diagonal.
    static constexpr double planar_rel_tol = 1e-9;
    // Vector-area closure tolerance, relative to the squared diagonal.
    static constexpr double closure_rel_tol = 1e-12;

    static Polyhedron build(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces);
    // Same validation with a caller-chosen planarity tolerance (relative to
    // the bounding-box diagonal), for deliberately warped faces.
    static Polyhedron build_relaxed(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces,
                                    double planar_rel);

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<std::vector<int>>& faces() const { return faces_; }
    const FaceGeometry& face_geometry(std::size_t k) const { return geometry_[k]; }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t face_count() const { return faces_.size(); }
    // Each geometric edge of a closed surface appears in exactly two loops.
    std::size_t edge_count() const { return loop_entries_ / 2; }

    std::pair<Vec3, Vec3> bounding_box() const { return {bbox_lo_, bbox_hi_}; }
    double bbox_diagonal() const { return norm(bbox_hi_ - bbox_lo_); }
    Vec3 vertex_centroid() const { return centroid_; }

  private:
    Polyhedron() = default;

    std::vector<Vec3> vertices_;
    std::vector<std::vector<int>> faces_;
    std::vector<FaceGeometry> geometry_;
    std::size_t loop_entries_ = 0;
    Vec3 bbox_lo_, bbox_hi_, centroid_;
};

// Newell vector area: (1/2) sum x_m cross x_{m+1}. Equals area * outward unit
// normal for a planar CCW loop, and is exact regardless of the loop's shape.
inline Vec3 face_vector_area(const std::vector<Vec3>& verts, const std::vector<int>& loop) {
    Vec3 s{};
    for (std::size_t m = 0; m < loop.size(); ++m) {
        const Vec3& a = verts[loop[m]];
        const Vec3& b = verts[loop[(m + 1) % loop.size()]];
        s = s + cross(a, b);
    }
    return 0.5 * s;
}

inline Polyhedron Polyhedron::build(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces) {
    return build_relaxed(std::move(vertices), std::move(faces), planar_rel_tol);
}

inline Polyhedron Polyhedron::build_relaxed(std::vector<Vec3> vertices,
                                            std::vector<std::vector<int>> faces, double planar_rel) {
    if (vertices.size() < 4 || faces.size() < 4) {
        throw DegenerateFace("polyhedron needs at least 4 vertices and 4 faces");
    }
    const int nv = static_cast<int>(vertices.size());
    for (std::size_t k = 0; k < faces.size(); ++k) {
        if (faces[k].size() < 3) {
            throw DegenerateFace("face " + std::to_string(k) + " has fewer than 3 vertices");
        }
        for (int idx : faces[k]) {
            if (idx < 0 || idx >= nv) {
                throw IndexOutOfRange("face " + std::to_string(k) + " references vertex " +
                                      std::to_string(idx) + " outside [0," + std::to_string(nv) + ")");
            }
        }
    }

    Polyhedron p;
    p.bbox_lo_ = p.bbox_hi_ = vertices[0];
    Vec3 csum{};
    for (const Vec3& v : vertices) {
        p.bbox_lo_ = {std::min(p.bbox_lo_.x, v.x), std::min(p.bbox_lo_.y, v.y), std::min(p.bbox_lo_.z, v.z)};
        p.bbox_hi_ = {std::max(p.bbox_hi_.x, v.x), std::max(p.bbox_hi_.y, v.y), std::max(p.bbox_hi_.z, v.z)};
        csum = csum + v;
    }
    p.centroid_ = csum / static_cast<double>(vertices.size());
    const double h = norm(p.bbox_hi_ - p.bbox_lo_);
    if (h <= 0.0) throw DegenerateFace("all vertices coincide");

    Vec3 closure{};
    double volume6 = 0.0; // 6 * signed volume about the centroid
    p.geometry_.resize(faces.size());
    for (std::size_t k = 0; k < faces.size(); ++k) {
        const auto& loop = faces[k];
        const Vec3 va = face_vector_area(vertices, loop);
        const double area = norm(va);
        if (area <= 1e-12 * h * h) {
            throw DegenerateFace("face " + std::to_string(k) + " has (near) zero area");
        }
        const Vec3 n = va / area;

        // Planarity: every loop vertex within planar_rel_tol*h of the plane
        // through the loop centroid.
        Vec3 fc{};
        for (int idx : loop) fc = fc + vertices[idx];
        fc = fc / static_cast<double>(loop.size());
        for (int idx : loop) {
            if (std::abs(dot(vertices[idx] - fc, n)) > planar_rel * h) {
                throw NonPlanarFace("face " + std::to_string(k) + " deviates from its plane by more than " +
                                    std::to_string(planar_rel) + " * diagonal");
            }
        }

        FaceGeometry& g = p.geometry_[k];
        g.normal = n;
        g.edge_conormals.resize(loop.size());
        for (std::size_t m = 0; m < loop.size(); ++m) {
            const Vec3 e = vertices[loop[(m + 1) % loop.size()]] - vertices[loop[m]];
            g.edge_conormals[m] = normalized(cross(e, n));
        }

        closure = closure + va;
        volume6 = volume6 + 2.0 * dot(vertices[loop[0]] - p.centroid_, va);
        p.loop_entries_ += loop.size();
    }

    if (norm(closure) > closure_rel_tol * h * h) {
        throw OpenSurface("vector areas do not close (surface is open or inconsistently oriented)");
    }
    if (volume6 <= 0.0) {
        throw OpenSurface("non-positive enclosed volume (loops are clockwise about their outward normals?)");
    }

    p.vertices_ = std::move(vertices);
    p.faces_ = std::move(faces);
    return p;
}

// Divergence theorem with the reference point at the vertex centroid; exact
// for planar faces.
inline double total_volume(const Polyhedron& p) {
    const Vec3 c = p.vertex_centroid();
    double v = 0.0;
    for (std::size_t k = 0; k < p.face_count(); ++k) {
        const Vec3 va = face_vector_area(p.vertices(), p.faces()[k]);
        v += dot(p.vertices()[p.faces()[k][0]] - c, va);
    }
    return v / 3.0;
}

} // namespace plic
