// fixtures.hpp - seeded, bit-reproducible test fixtures (Gaussian mixtures).
#pragma once

#include <cstdint>

#include "ttfa/heisenberg.hpp"

namespace ttfa {

// Deterministic generator: parameters are derived from raw mt19937_64 draws
// through fixed arithmetic only (no distribution objects), so fixtures are
// bit-identical for a given seed on every platform.
struct FixtureRng {
  std::uint64_t state[1];
  explicit FixtureRng(std::uint64_t seed);
  std::uint64_t next_u64();
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive
};

struct GaussianComponent {
  std::vector<double> center;
  std::vector<double> inv2w2;  // 1/(2 w^2) per axis
  std::vector<double> modulation;
  cplx amplitude;
};

struct GaussianMixture {
  std::vector<GaussianComponent> components;
  cplx eval(std::span<const double> x) const;
};

GaussianMixture random_mixture(FixtureRng& rng, int dim, int k = 2, double max_center = 1.5,
                               double min_width = 0.8, double max_width = 1.3,
                               double max_modulation = 1.0);

SampledField sample_mixture(const GaussianMixture& mix, const BoxGrid& grid);
SampledField random_field(const BoxGrid& grid, std::uint64_t seed, int k = 2);

// Spectrally and spatially tight variant for band-limited operator routes
// (U_lambda and friends): the field and its FT stay far from the box edge
// and the Nyquist band.
SampledField random_tight_field(const BoxGrid& grid, std::uint64_t seed, int k = 2);

// f(xi, t) = mixture(xi) * exp(-t^2 / (2 sigma_t^2)) * e^{i w_t t}; smooth in
// t and lambda-concentrated (slices decay like exp(-sigma_t^2 lambda^2)).
HeisenbergField random_heisenberg_field(const BoxGrid& base, const BoxGrid& t_grid,
                                        std::uint64_t seed, int k = 2, double sigma_t_min = 1.4,
                                        double sigma_t_max = 2.2);

// Desk-scale default geometry (n = 1).
BoxGrid desk_base_grid();    // 48^2 on [-10,10)^2
BoxGrid desk_t_grid();       // 64 on [-16,16)
BoxGrid desk_phase_xi();     // 24^2 on [-4,4)^2
BoxGrid desk_phase_eta();

}  // namespace ttfa
