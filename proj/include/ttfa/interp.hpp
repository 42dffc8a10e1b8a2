// interp.hpp - multilinear interpolation on product lattices.
#pragma once

#include <vector>

#include "ttfa/grid.hpp"

namespace ttfa {

// Multilinear interpolation of F at (xi, eta) points (each point is the
// concatenated coordinate vector, xi axes first). Points must lie inside the
// grid hull minus one cell; an offending point's index is reported.
std::vector<cplx> resample_linear(const PhaseField& F,
                                  const std::vector<std::vector<double>>& points);

}  // namespace ttfa
