#pragma once

#include "plic/benchmark.hpp"
#include "plic/error.hpp"
#include "plic/off_io.hpp"
#include "plic/oracle.hpp"
#include "plic/polyhedron.hpp"
#include "plic/positioning.hpp"
#include "plic/shapes.hpp"
#include "plic/truncation.hpp"
#include "plic/vec3.hpp"
