#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "plic/polyhedron.hpp"
#include "plic/vec3.hpp"

namespace plic {

// Width of the +/- tube around the plane inside which a vertex counts as
// lying ON the plane, and generic "treat as zero" tolerance of the solver.
inline constexpr double zero_tol = 1e-14;
// |<n_F, n_G>| >= 1 - parallel_tol flags a face as parallel to the plane.
inline constexpr double parallel_tol = 1e-12;

// Oriented plane at signed distance s from the base point:
//   lambda(x) = <x - base, normal> - s,
// negative side = kept volume.
struct PlaneFrame {
    Vec3 normal;   // unit
    Vec3 base;
    double s = 0.0;

    double lambda(const Vec3& x) const { return dot(x - base, normal) - s; }
};

// -1 strictly below the plane (kept side), +1 strictly above, 0 inside the
// tube |lambda| < zero_tol.
inline int classify_vertex(double lambda) {
    if (std::abs(lambda) < zero_tol) return 0;
    return lambda > 0.0 ? 1 : -1;
}
inline int classify_vertex(const Vec3& x, const PlaneFrame& f) { return classify_vertex(f.lambda(x)); }

// Edge status from its two vertex statuses:
//   +1 exterior, -1 interior, 0 intersected,
//   +2 degenerate exterior (one vertex on the plane, other exterior),
//   -2 degenerate interior (one vertex on the plane, other interior),
//   +3 edge lies in the plane.
inline int classify_edge(int sv_i, int sv_j) {
    if (sv_i == 0 && sv_j == 0) return 3;
    if (sv_i == 0 || sv_j == 0) return (sv_i + sv_j > 0) ? 2 : -2;
    if (sv_i == sv_j) return sv_i;
    return 0;
}

// Everything about a (polyhedron, plane normal, base point) pair that does not
// depend on the plane position s. One precompute serves any number of volume
// evaluations; no cross-face connectivity is ever assembled.
struct StaticCoefficients {
    struct Edge {
        std::int32_t vi, vj;  // endpoint vertex ids (loop order)
        double a, b;          // area integrand weight a + s*b
        double len;           // |v_j - v_i|
        double lprime;        // len / |<v_i - v_j, normal>|, 0 for edges in-plane
    };
    struct Face {
        double B, C;          // volume weight B + s*C
        double d_min, d_max;  // vertex signed-distance range of this face
        double full_area;
        double s_face = 0.0;  // plane position at which a parallel face sits
        std::int32_t edge_begin = 0, edge_count = 0;
        std::int8_t sigma = 0; // +-1 for parallel faces, 0 otherwise
        bool parallel = false;
    };

    Vec3 normal;              // unit
    Vec3 base;
    std::vector<double> vertex_dist;  // <v - base, normal> per vertex
    std::vector<Face> faces;
    std::vector<Edge> edges;
    std::vector<double> brackets;     // sorted unique vertex distances
    double s_min = 0.0, s_max = 0.0, L = 0.0;
    double volume = 0.0;              // |P*|
};

inline StaticCoefficients precompute(const Polyhedron& p, const Vec3& n_gamma,
                                     std::optional<Vec3> base = std::nullopt) {
    StaticCoefficients c;
    c.normal = normalized(n_gamma);
    c.base = base.value_or(p.vertex_centroid());
    c.volume = total_volume(p);

    const auto& verts = p.vertices();
    c.vertex_dist.resize(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) c.vertex_dist[i] = dot(verts[i] - c.base, c.normal);

    // Candidate plane positions at which the piecewise-cubic volume can change
    // its polynomial: the vertex distances, deduplicated.
    std::vector<double> d = c.vertex_dist;
    std::sort(d.begin(), d.end());
    const double merge_tol = zero_tol * std::max(1.0, p.bbox_diagonal());
    for (double di : d) {
        if (c.brackets.empty() || di - c.brackets.back() > merge_tol) c.brackets.push_back(di);
    }
    c.brackets.back() = std::max(c.brackets.back(), d.back());
    c.s_min = c.brackets.front();
    c.s_max = c.brackets.back();
    c.L = c.s_max - c.s_min;

    c.faces.reserve(p.face_count());
    for (std::size_t k = 0; k < p.face_count(); ++k) {
        const auto& loop = p.faces()[k];
        const FaceGeometry& g = p.face_geometry(k);
        StaticCoefficients::Face f;
        const double cosang = dot(g.normal, c.normal);
        f.B = dot(verts[loop[0]] - c.base, g.normal);
        f.C = -cosang;
        f.full_area = norm(face_vector_area(verts, loop));
        f.d_min = f.d_max = c.vertex_dist[loop[0]];
        double dist_sum = 0.0;
        for (int idx : loop) {
            f.d_min = std::min(f.d_min, c.vertex_dist[idx]);
            f.d_max = std::max(f.d_max, c.vertex_dist[idx]);
            dist_sum += c.vertex_dist[idx];
        }
        f.edge_begin = static_cast<std::int32_t>(c.edges.size());
        f.edge_count = static_cast<std::int32_t>(loop.size());

        if (std::abs(cosang) >= 1.0 - parallel_tol) {
            // Face parallel to the plane: it is either entirely kept or
            // entirely cut away; its area never varies with s.
            f.parallel = true;
            f.sigma = cosang > 0.0 ? 1 : -1;
            f.s_face = dist_sum / static_cast<double>(loop.size());
            for (std::size_t m = 0; m < loop.size(); ++m) {
                c.edges.push_back({loop[m], loop[(m + 1) % loop.size()], 0.0, 0.0, 0.0, 0.0});
            }
        } else {
            // Weight of edge m in the area formula is a + s*b, obtained by
            // referring the in-plane divergence theorem to the point where the
            // cut line meets the face; the cut segment then drops out.
            const double denom = 1.0 - cosang * cosang;
            const double pivot = f.B * cosang / denom;
            for (std::size_t m = 0; m < loop.size(); ++m) {
                const int vi = loop[m];
                const int vj = loop[(m + 1) % loop.size()];
                const Vec3& N = g.edge_conormals[m];
                const double n_dot = dot(N, c.normal);
                StaticCoefficients::Edge e;
                e.vi = vi;
                e.vj = vj;
                e.a = dot(verts[vi] - c.base, N) + pivot * n_dot;
                e.b = -n_dot / denom;
                e.len = norm(verts[vj] - verts[vi]);
                const double proj = c.vertex_dist[vi] - c.vertex_dist[vj];
                e.lprime = proj != 0.0 ? e.len / std::abs(proj) : 0.0;
                c.edges.push_back(e);
            }
        }
        c.faces.push_back(f);
    }
    return c;
}

// Kept length of an edge and its left-sided derivative w.r.t. s.
struct EdgeSegment {
    double l = 0.0;
    double lprime = 0.0;
};

inline EdgeSegment edge_segment(const StaticCoefficients::Edge& e, const std::vector<double>& dist,
                                double s) {
    const double li = dist[e.vi] - s;
    const double lj = dist[e.vj] - s;
    const int si = classify_vertex(li);
    const int sj = classify_vertex(lj);
    switch (classify_edge(si, sj)) {
        case -1: return {e.len, 0.0};
        case -2: return {e.len, e.lprime};
        case 0:
            if (si < 0) return {li / (li - lj) * e.len, e.lprime};
            return {lj / (lj - li) * e.len, e.lprime};
        default: return {}; // +1, +2, +3: nothing kept (left-sided limits)
    }
}

inline EdgeSegment edge_length(const StaticCoefficients& c, std::size_t k, std::size_t m, double s) {
    const auto& f = c.faces[k];
    return edge_segment(c.edges[f.edge_begin + static_cast<std::int32_t>(m)], c.vertex_dist, s);
}

// Kept area of a face and its first two left-sided derivatives w.r.t. s.
struct FaceArea {
    double A = 0.0;
    double Ap = 0.0;
    double App = 0.0;
};

inline FaceArea face_area(const StaticCoefficients& c, std::size_t k, double s) {
    const auto& f = c.faces[k];
    if (f.parallel) {
        // Jumps from 0 to the full area as the plane passes the face.
        return {s > f.s_face ? f.full_area : 0.0, 0.0, 0.0};
    }
    if (f.d_min - s >= zero_tol) return {};                       // fully cut away
    if (f.d_max - s <= -zero_tol) return {f.full_area, 0.0, 0.0}; // fully kept
    double A = 0.0, Ap = 0.0, App = 0.0;
    const auto* e = c.edges.data() + f.edge_begin;
    for (std::int32_t m = 0; m < f.edge_count; ++m, ++e) {
        const EdgeSegment seg = edge_segment(*e, c.vertex_dist, s);
        const double w = e->a + s * e->b;
        A += w * seg.l;
        Ap += w * seg.lprime + e->b * seg.l;
        App += e->b * seg.lprime;
    }
    return {0.5 * A, 0.5 * Ap, App};
}

// Volume kept below the plane at position s, with derivatives. V is exactly
// cubic in s between consecutive brackets; d3V is the (bracket-wise constant)
// third derivative. Derivatives are left-sided limits at the bracket bounds.
struct VolumeSample {
    double s = 0.0;
    double V = 0.0;
    double dV = 0.0;
    double d2V = 0.0;
    double d3V = 0.0;
    int bracket_index = 0;
};

inline int bracket_index(const StaticCoefficients& c, double s) {
    const auto it = std::lower_bound(c.brackets.begin(), c.brackets.end(), s);
    const int i = static_cast<int>(it - c.brackets.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(c.brackets.size()) - 2);
}

inline VolumeSample truncated_volume(const StaticCoefficients& c, double s) {
    // Strictly outside the vertex support the result saturates exactly; the
    // face sum would only reproduce it up to roundoff.
    if (s < c.s_min) return {s, 0.0, 0.0, 0.0, 0.0, 0};
    if (s > c.s_max) {
        return {s, c.volume, 0.0, 0.0, 0.0, static_cast<int>(c.brackets.size()) - 2};
    }
    double v = 0.0, v1 = 0.0, v2 = 0.0, v3 = 0.0;
    for (std::size_t k = 0; k < c.faces.size(); ++k) {
        const FaceArea fa = face_area(c, k, s);
        if (fa.A == 0.0 && fa.Ap == 0.0 && fa.App == 0.0) continue;
        const auto& f = c.faces[k];
        const double w = f.B + s * f.C;
        v += w * fa.A;
        v1 += w * fa.Ap + f.C * fa.A;
        v2 += w * fa.App + 2.0 * f.C * fa.Ap;
        v3 += f.C * fa.App;
    }
    VolumeSample out;
    out.s = s;
    out.V = std::clamp(v / 3.0, 0.0, c.volume);
    out.dV = std::max(v1 / 3.0, 0.0);
    out.d2V = v2 / 3.0;
    out.d3V = v3; // thirds cancel: V''' = sum_k C_k * A_k''
    out.bracket_index = bracket_index(c, s);
    return out;
}

// Taylor form of the bracket-local cubic around the sample position:
//   S(z) = c3 (z-s)^3 + c2 (z-s)^2 + c1 (z-s) + c0.
// Reproduces V exactly on the sample's bracket.
struct Cubic {
    double center = 0.0;
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;

    double eval(double z) const {
        const double t = z - center;
        return ((c3 * t + c2) * t + c1) * t + c0;
    }
    double deriv(double z) const {
        const double t = z - center;
        return (3.0 * c3 * t + 2.0 * c2) * t + c1;
    }
};

inline Cubic local_cubic(const VolumeSample& smp) {
    return {smp.s, smp.V, smp.dV, smp.d2V / 2.0, smp.d3V / 6.0};
}

} // namespace plic
