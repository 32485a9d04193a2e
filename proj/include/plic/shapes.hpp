#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "plic/polyhedron.hpp"

namespace plic {

// Axis-aligned box [0,1] x [0,psi1] x [0,psi2].
inline Polyhedron make_cuboid(double psi1, double psi2) {
    std::vector<Vec3> v(8);
    for (int i = 0; i < 8; ++i) {
        v[i] = {static_cast<double>(i & 1), psi1 * ((i >> 1) & 1), psi2 * ((i >> 2) & 1)};
    }
    std::vector<std::vector<int>> f = {
        {0, 2, 3, 1}, // z = 0
        {4, 5, 7, 6}, // z = psi2
        {0, 1, 5, 4}, // y = 0
        {2, 6, 7, 3}, // y = psi1
        {0, 4, 6, 2}, // x = 0
        {1, 3, 7, 5}, // x = 1
    };
    return Polyhedron::build(std::move(v), std::move(f));
}

inline Polyhedron make_cube() { return make_cuboid(1.0, 1.0); }

// Corner simplex spanned by the origin and the three unit vectors.
inline Polyhedron make_tetrahedron() {
    std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::vector<std::vector<int>> f = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
    return Polyhedron::build(std::move(v), std::move(f));
}

// Regular dodecahedron with unit edge length. Vertices are the canonical
// (+-1,+-1,+-1) / golden-ratio set scaled by phi/2; each face is found as the
// five vertices supporting one of the twelve face-center directions and
// ordered counter-clockwise about it.
inline Polyhedron make_dodecahedron() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double inv = 1.0 / phi;
    std::vector<Vec3> v;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1}) v.push_back({double(sx), double(sy), double(sz)});
    for (int sa : {-1, 1})
        for (int sb : {-1, 1}) {
            v.push_back({0.0, sa * inv, sb * phi});
            v.push_back({sa * inv, sb * phi, 0.0});
            v.push_back({sb * phi, 0.0, sa * inv});
        }
    const double scale = phi / 2.0; // canonical edge length is 2/phi
    for (Vec3& p : v) p = scale * p;

    std::vector<Vec3> dirs;
    for (int sa : {-1, 1})
        for (int sb : {-1, 1}) {
            dirs.push_back({double(sa), 0.0, sb * phi});
            dirs.push_back({0.0, sb * phi, double(sa)});
            dirs.push_back({sb * phi, double(sa), 0.0});
        }

    std::vector<std::vector<int>> faces;
    for (const Vec3& dir : dirs) {
        const Vec3 u = normalized(dir);
        double dmax = -1e300;
        for (const Vec3& p : v) dmax = std::max(dmax, dot(p, u));
        std::vector<int> loop;
        for (int i = 0; i < static_cast<int>(v.size()); ++i) {
            if (dot(v[i], u) > dmax - 1e-9) loop.push_back(i);
        }
        // Order the five supporters counter-clockwise about the outward dir.
        Vec3 c{};
        for (int i : loop) c = c + v[i];
        c = c / static_cast<double>(loop.size());
        const Vec3 e1 = normalized(v[loop[0]] - c);
        const Vec3 e2 = cross(u, e1);
        std::sort(loop.begin(), loop.end(), [&](int i, int j) {
            const Vec3 a = v[i] - c, b = v[j] - c;
            return std::atan2(dot(a, e2), dot(a, e1)) < std::atan2(dot(b, e2), dot(b, e1));
        });
        faces.push_back(std::move(loop));
    }
    return Polyhedron::build(std::move(v), std::move(faces));
}

struct TorusSpec {
    double R = 1.0;      // scale: center-circle radius
    double gamma = 0.5;  // tube radius / R
    int n1 = 9;          // samples along the center circle
    int n2 = 7;          // samples around the tube
};

// Discrete torus: vertex (i,j) at angles (2*pi*i/n1, 2*pi*j/n2) on
//   R * ((1 + gamma cos th) cos ph, (1 + gamma cos th) sin ph, gamma sin th).
// The natural quad faces are slightly warped; by default each quad whose
// planarity residual exceeds the build tolerance is split along its shorter
// diagonal. strict_quads keeps the warped quads instead (face/edge counts
// then match the quad grid) by relaxing the planarity validation.
inline Polyhedron make_torus(const TorusSpec& spec = {}, bool strict_quads = false) {
    const int n1 = spec.n1, n2 = spec.n2;
    std::vector<Vec3> v(static_cast<std::size_t>(n1) * n2);
    for (int i = 0; i < n1; ++i) {
        const double ph = 2.0 * std::numbers::pi * i / n1;
        for (int j = 0; j < n2; ++j) {
            const double th = 2.0 * std::numbers::pi * j / n2;
            const double ring = 1.0 + spec.gamma * std::cos(th);
            v[i * n2 + j] = spec.R * Vec3{ring * std::cos(ph), ring * std::sin(ph),
                                          spec.gamma * std::sin(th)};
        }
    }
    const auto idx = [&](int i, int j) { return ((i + n1) % n1) * n2 + (j + n2) % n2; };

    double diag;
    {
        Vec3 lo = v[0], hi = v[0];
        for (const Vec3& p : v) {
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
        }
        diag = norm(hi - lo);
    }

    std::vector<std::vector<int>> faces;
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            const std::array<int, 4> q = {idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)};
            if (strict_quads) {
                faces.push_back({q[0], q[1], q[2], q[3]});
                continue;
            }
            const Vec3 c = 0.25 * (v[q[0]] + v[q[1]] + v[q[2]] + v[q[3]]);
            const Vec3 n = normalized(face_vector_area(v, {q[0], q[1], q[2], q[3]}));
            double residual = 0.0;
            for (int k : q) residual = std::max(residual, std::abs(dot(v[k] - c, n)));
            if (residual <= Polyhedron::planar_rel_tol * diag) {
                faces.push_back({q[0], q[1], q[2], q[3]});
            } else if (norm(v[q[2]] - v[q[0]]) <= norm(v[q[3]] - v[q[1]])) {
                faces.push_back({q[0], q[1], q[2]});
                faces.push_back({q[0], q[2], q[3]});
            } else {
                faces.push_back({q[0], q[1], q[3]});
                faces.push_back({q[1], q[2], q[3]});
            }
        }
    }
    if (strict_quads) {
        return Polyhedron::build_relaxed(std::move(v), std::move(faces), 0.25);
    }
    return Polyhedron::build(std::move(v), std::move(faces));
}

// Extruded block letter "A": an 8-vertex outline with a triangular hole,
// thickness 5/14, everything scaled by 1/14. The front and back surfaces are
// each written as the outline polygon plus the hole triangle with inverted
// orientation; the divergence theorem then subtracts the hole exactly.
inline Polyhedron make_letter_a() {
    const double k = 1.0 / 14.0;
    const double outline[8][2] = {{0, 0}, {4, 0}, {6, 4}, {8, 4}, {10, 0}, {14, 0}, {10, 14}, {8, 14}};
    const double hole[3][2] = {{6, 6}, {8, 6}, {7, 8}};

    std::vector<Vec3> v;
    for (double z : {0.0, 5.0}) {
        for (const auto& p : outline) v.push_back({k * p[0], k * p[1], k * z});
        for (const auto& p : hole) v.push_back({k * p[0], k * p[1], k * z});
    }
    const int F = 11; // index offset of the front layer

    std::vector<std::vector<int>> faces;
    faces.push_back({7, 6, 5, 4, 3, 2, 1, 0});                         // back outline, normal -z
    faces.push_back({8, 9, 10});                                       // back hole, inverted: +z
    faces.push_back({F + 0, F + 1, F + 2, F + 3, F + 4, F + 5, F + 6, F + 7}); // front outline, +z
    faces.push_back({F + 10, F + 9, F + 8});                           // front hole, inverted: -z
    for (int e = 0; e < 8; ++e) { // outline walls, outward = right of CCW travel
        const int a = e, b = (e + 1) % 8;
        faces.push_back({a, b, F + b, F + a});
    }
    for (int e = 0; e < 3; ++e) { // hole walls: traverse the hole clockwise
        const int a = 8 + (3 - e) % 3, b = 8 + (2 - e) % 3;
        faces.push_back({a, b, F + b, F + a});
    }
    return Polyhedron::build(std::move(v), std::move(faces));
}

} // namespace plic
