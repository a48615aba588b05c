#pragma once

#include "error.hpp"
#include "special.hpp"
#include "quadrature.hpp"
#include "series.hpp"
#include "density.hpp"
#include "density_spec.hpp"
#include "uniform.hpp"
#include "symmetric.hpp"
#include "random.hpp"
#include "arbitrary.hpp"
#include "montecarlo.hpp"
#include "applications.hpp"
#include "analytic.hpp"

namespace ballpdf {

inline constexpr const char* version = "1.0.0";

} // namespace ballpdf
