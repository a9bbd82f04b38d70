#pragma once

#include "ivalkit/format.hpp"
#include "ivalkit/rounding.hpp"

namespace ivalkit::detail {

// Correctly directed scalar endpoint kernels. Each computes the requested
// directed rounding of the exact real result without touching the global
// rounding mode: round-to-nearest plus an error-free-transformation residual
// decides whether the nearest result is exact, and if not the result steps
// one ulp outward. Where the residual itself could underflow (deep subnormal
// scales) an exact software-float comparison takes over.
//
// Infinite operands follow range-endpoint semantics, not IEEE scalar
// semantics: 0 * inf is 0 (the attained product of the zero slice) and
// -inf + +inf resolves to the direction's own infinity. Division by zero is
// never requested; the interval layer's case analysis excludes it.

double add_dir(double a, double b, Direction dir);
double sub_dir(double a, double b, Direction dir);
double mul_dir(double a, double b, Direction dir);
double div_dir(double a, double b, Direction dir);
double sqrt_dir(double a, Direction dir);
double fma_dir(double a, double b, double c, Direction dir);

float add_dir(float a, float b, Direction dir);
float sub_dir(float a, float b, Direction dir);
float mul_dir(float a, float b, Direction dir);
float div_dir(float a, float b, Direction dir);
float sqrt_dir(float a, Direction dir);
float fma_dir(float a, float b, float c, Direction dir);

} // namespace ivalkit::detail
