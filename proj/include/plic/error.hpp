#pragma once

#include <stdexcept>
#include <string>

namespace plic {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mesh validation failures raised by Polyhedron::build().
struct IndexOutOfRange : Error { using Error::Error; };
struct DegenerateFace : Error { using Error::Error; };
struct NonPlanarFace : Error { using Error::Error; };
struct OpenSurface : Error { using Error::Error; };

// File loading.
struct ParseError : Error { using Error::Error; };

// Oracle preconditions.
struct NotConvex : Error { using Error::Error; };

// Root finding.
struct NoSignChange : Error { using Error::Error; };

} // namespace plic
