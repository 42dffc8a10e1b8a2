#include "ttfa/fixtures.hpp"

#include <cmath>

namespace ttfa {

FixtureRng::FixtureRng(std::uint64_t seed) { state[0] = seed ? seed : 0x9e3779b97f4a7c15ull; }

std::uint64_t FixtureRng::next_u64() {
  // splitmix64: tiny, specified exactly, platform independent.
  std::uint64_t z = (state[0] += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double FixtureRng::uniform(double lo, double hi) {
  const double u = (next_u64() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int FixtureRng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

cplx GaussianMixture::eval(std::span<const double> x) const {
  cplx v{0.0, 0.0};
  for (const auto& c : components) {
    double e = 0.0, ph = 0.0;
    for (std::size_t a = 0; a < c.center.size(); ++a) {
      const double dx = x[a] - c.center[a];
      e += dx * dx * c.inv2w2[a];
      ph += c.modulation[a] * x[a];
    }
    v += c.amplitude * std::exp(-e) * cplx{std::cos(ph), std::sin(ph)};
  }
  return v;
}

GaussianMixture random_mixture(FixtureRng& rng, int dim, int k, double max_center,
                               double min_width, double max_width, double max_modulation) {
  GaussianMixture mix;
  mix.components.resize(k);
  for (auto& c : mix.components) {
    c.center.resize(dim);
    c.inv2w2.resize(dim);
    c.modulation.resize(dim);
    for (int a = 0; a < dim; ++a) {
      c.center[a] = rng.uniform(-max_center, max_center);
      const double w = rng.uniform(min_width, max_width);
      c.inv2w2[a] = 1.0 / (2.0 * w * w);
      c.modulation[a] = rng.uniform(-max_modulation, max_modulation);
    }
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    const double mag = rng.uniform(0.5, 1.0);
    c.amplitude = mag * cplx{std::cos(phase), std::sin(phase)};
  }
  return mix;
}

SampledField sample_mixture(const GaussianMixture& mix, const BoxGrid& grid) {
  SampledField f(grid);
  f.fill([&](std::span<const double> x) { return mix.eval(x); });
  return f;
}

SampledField random_field(const BoxGrid& grid, std::uint64_t seed, int k) {
  FixtureRng rng(seed);
  return sample_mixture(random_mixture(rng, grid.dim(), k, 1.5, 1.0, 1.3), grid);
}

SampledField random_tight_field(const BoxGrid& grid, std::uint64_t seed, int k) {
  FixtureRng rng(seed);
  return sample_mixture(random_mixture(rng, grid.dim(), k, 0.8, 0.85, 0.95, 0.6), grid);
}

HeisenbergField random_heisenberg_field(const BoxGrid& base, const BoxGrid& t_grid,
                                        std::uint64_t seed, int k, double sigma_t_min,
                                        double sigma_t_max) {
  FixtureRng rng(seed);
  const GaussianMixture mix = random_mixture(rng, base.dim(), k, 0.9, 0.8, 1.1, 0.8);
  const double sigma_t = rng.uniform(sigma_t_min, sigma_t_max);
  const double wt = rng.uniform(-0.8, 0.8);
  HeisenbergField f(base, t_grid);
  f.fill([&](std::span<const double> x, double t) {
    return mix.eval(x) * std::exp(-t * t / (2.0 * sigma_t * sigma_t)) *
           cplx{std::cos(wt * t), std::sin(wt * t)};
  });
  return f;
}

BoxGrid desk_base_grid() { return BoxGrid::cube(2, 48, 10.0); }
BoxGrid desk_t_grid() { return BoxGrid::cube(1, 64, 16.0); }
BoxGrid desk_phase_xi() { return BoxGrid::cube(2, 24, 4.0); }
BoxGrid desk_phase_eta() { return BoxGrid::cube(2, 24, 4.0); }

}  // namespace ttfa
