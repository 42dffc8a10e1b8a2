// quad.hpp - quadrature and norms over sampled fields.
#pragma once

#include "ttfa/grid.hpp"

namespace ttfa {

// Riemann sum Sum values * cell_volume, pairwise-summed.
cplx quadrature_integral(const SampledField& f);

// L^2 inner product <f,g> = Int f conj(g).
cplx inner_product(const SampledField& f, const SampledField& g);

double l2_norm(const SampledField& f);

// L^p norm with quadrature weights; p = inf gives the grid max of |f|.
double lp_norm(const SampledField& f, double p);

// || F ||_{p,q}: inner L^p over xi at fixed eta, outer L^q over eta.
double mixed_norm_lpq(const PhaseField& F, const MixedNormSpec& spec);

}  // namespace ttfa
