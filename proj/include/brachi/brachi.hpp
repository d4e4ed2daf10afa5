#pragma once

#include "brachi/annulus.hpp"
#include "brachi/curve.hpp"
#include "brachi/error.hpp"
#include "brachi/field.hpp"
#include "brachi/geometry.hpp"
#include "brachi/io.hpp"
#include "brachi/oracle.hpp"
#include "brachi/quadrature.hpp"
#include "brachi/repro.hpp"
#include "brachi/strong.hpp"
#include "brachi/svg.hpp"
#include "brachi/variational.hpp"
#include "brachi/weak.hpp"

namespace brachi {

inline constexpr const char* version = "1.0.0";

} // namespace brachi
