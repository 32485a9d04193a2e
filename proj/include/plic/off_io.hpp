#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "plic/error.hpp"
#include "plic/polyhedron.hpp"

namespace plic {

// Plain text mesh format:
//   line 1:            NV NF
//   next NV lines:     x y z
//   next NF lines:     n i1 ... in     (0-based indices, CCW about the outward normal)
// Written with 17 significant digits so coordinates round-trip bit-exactly.

inline void save_off(const Polyhedron& p, std::ostream& os) {
    os << p.vertex_count() << ' ' << p.face_count() << '\n';
    char buf[96];
    for (const Vec3& v : p.vertices()) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
        os << buf;
    }
    for (const auto& loop : p.faces()) {
        os << loop.size();
        for (int i : loop) os << ' ' << i;
        os << '\n';
    }
}

inline void save_off(const Polyhedron& p, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    save_off(p, os);
}

namespace detail {

// Pulls the next non-blank line; `lineno` tracks the position for messages.
inline bool next_line(std::istream& is, std::string& line, int& lineno) {
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

template <typename T>
T parse_token(std::istringstream& ss, int lineno, const char* what) {
    T value;
    if (!(ss >> value)) {
        throw ParseError("line " + std::to_string(lineno) + ": expected " + what);
    }
    return value;
}

inline void expect_end(std::istringstream& ss, int lineno) {
    std::string extra;
    if (ss >> extra) {
        throw ParseError("line " + std::to_string(lineno) + ": unexpected trailing token '" + extra + "'");
    }
}

} // namespace detail

inline Polyhedron load_off(std::istream& is) {
    std::string line;
    int lineno = 0;
    if (!detail::next_line(is, line, lineno)) throw ParseError("line 1: missing 'NV NF' header");
    std::istringstream hs(line);
    const auto nv = detail::parse_token<long>(hs, lineno, "vertex count");
    const auto nf = detail::parse_token<long>(hs, lineno, "face count");
    detail::expect_end(hs, lineno);
    if (nv < 0 || nf < 0) throw ParseError("line " + std::to_string(lineno) + ": negative count");

    std::vector<Vec3> verts;
    verts.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        if (!detail::next_line(is, line, lineno)) {
            throw ParseError("line " + std::to_string(lineno + 1) + ": expected vertex " + std::to_string(i));
        }
        std::istringstream ss(line);
        Vec3 v;
        v.x = detail::parse_token<double>(ss, lineno, "x coordinate");
        v.y = detail::parse_token<double>(ss, lineno, "y coordinate");
        v.z = detail::parse_token<double>(ss, lineno, "z coordinate");
        detail::expect_end(ss, lineno);
        verts.push_back(v);
    }

    std::vector<std::vector<int>> faces;
    faces.reserve(nf);
    for (long k = 0; k < nf; ++k) {
        if (!detail::next_line(is, line, lineno)) {
            throw ParseError("line " + std::to_string(lineno + 1) + ": expected face " + std::to_string(k));
        }
        std::istringstream ss(line);
        const auto n = detail::parse_token<long>(ss, lineno, "face vertex count");
        if (n < 3) throw ParseError("line " + std::to_string(lineno) + ": face needs at least 3 vertices");
        std::vector<int> loop(n);
        for (long m = 0; m < n; ++m) loop[m] = detail::parse_token<int>(ss, lineno, "vertex index");
        detail::expect_end(ss, lineno);
        faces.push_back(std::move(loop));
    }
    return Polyhedron::build(std::move(verts), std::move(faces));
}

inline Polyhedron load_off(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open '" + path + "' for reading");
    return load_off(is);
}

} // namespace plic
