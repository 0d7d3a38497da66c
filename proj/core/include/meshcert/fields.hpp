#pragma once

#include <meshcert/sizing.hpp>
#include <meshcert/types.hpp>

#include <cstdint>
#include <string>

namespace meshcert {

/// Built-in scalar fields, selectable by spec string:
///   "trig[:freq=a]"    product of sines, smooth and non-separable
///   "poly:deg=q"       random polynomial with seeded coefficients
///   "quadratic"        |x|^2 / 2 (gradient is x)
///   "coord"            x_1 (constant unit gradient)
///   "radial"           exp(-|x - 0.5|^2)
ScalarField scalar_field(const std::string& spec, int dim, std::uint64_t seed = 1);

/// Built-in vector fields:
///   "const[:c=v1;v2;...]"  constant vector (default e_1)
///   "trig"                 f_m alternates sin/cos of the next coordinate
///   "poly:deg=q"           componentwise random polynomials
///   "grad:<scalar spec>"   gradient of a built-in scalar field
VectorField vector_field(const std::string& spec, int dim, std::uint64_t seed = 1);

/// Built-in sizing fields:
///   "constant[:h0=v]"
///   "affine:c0=v,g=g1;g2;..."
///   "radial[:c0=v,c1=v]"   1/D^2 = c0 + c1 |x - 0.5|^2
SizingField sizing_field(const std::string& spec, int dim);

/// Random fields for verification batches.
ScalarField random_polynomial_scalar(int dim, int degree, std::uint64_t seed);
VectorField random_polynomial_vector(int dim, int degree, std::uint64_t seed);
VectorField random_trig_vector(int dim, std::uint64_t seed);

}  // namespace meshcert
