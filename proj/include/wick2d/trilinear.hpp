#pragma once

#include "wick2d/field.hpp"

namespace wick2d {

// Coefficients of v1 * conj(v2) * v3 (full cubic convolution), truncated to
// the common grid radius: C(n) = sum_{n = n1 - n2 + n3} v1^(n1) conj(v2^(n2)) v3^(n3).
FourierField cubic_conv(const FourierField& v1, const FourierField& v2,
                        const FourierField& v3);

// Non-resonant trilinear operator: the sum above restricted to n != n1, n3.
FourierField nonres_trilinear(const FourierField& v1, const FourierField& v2,
                              const FourierField& v3);

// Resonant (diagonal) trilinear operator: v1^(n) conj(v2^(n)) v3^(n).
FourierField res_trilinear(const FourierField& v1, const FourierField& v2,
                           const FourierField& v3);

// Renormalized nonlinearity N(v) - R(v) = (|v|^2 - 2 ||v||^2) v in physical
// space, truncated to the grid radius.
FourierField renorm_nonlinearity(const FourierField& v);

}  // namespace wick2d
