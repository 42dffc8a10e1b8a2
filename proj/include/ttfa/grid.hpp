// grid.hpp - uniform sampling boxes, sampled fields, phase-space fields.
//
// A BoxGrid covers [-L_j, L_j) on each axis with N_j points at spacing
// 2 L_j / N_j; point k on axis j sits at -L_j + k*spacing_j. Fields are
// stored axis-major (C order: last axis fastest).
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ttfa/common.hpp"

namespace ttfa {

struct BoxGrid {
  std::vector<int> npts;       // points per axis, all > 0
  std::vector<double> halfw;   // L_j > 0

  BoxGrid() = default;
  BoxGrid(std::vector<int> n, std::vector<double> half);
  // Isotropic helper: d axes, N points on [-L, L).
  static BoxGrid cube(int dim, int n, double half_width);

  int dim() const { return static_cast<int>(npts.size()); }
  double spacing(int axis) const { return 2.0 * halfw[axis] / npts[axis]; }
  double coord(int axis, int k) const { return -halfw[axis] + k * spacing(axis); }
  std::size_t size() const;
  double cell_volume() const;

  // Dual grid of the symmetric DFT: N_j points at spacing 2*pi/(N_j dx_j),
  // covering [-pi/dx_j, pi/dx_j).
  BoxGrid dual() const;

  // Flat index <-> multi-index (axis-major, last axis fastest).
  std::size_t flat(std::span<const int> idx) const;
  void unflat(std::size_t flat_index, std::span<int> idx) const;
  void point(std::size_t flat_index, std::span<double> x) const;

  bool operator==(const BoxGrid& o) const { return npts == o.npts && halfw == o.halfw; }
  bool operator!=(const BoxGrid& o) const { return !(*this == o); }
};

struct SampledField {
  BoxGrid grid;
  std::vector<cplx> values;

  SampledField() = default;
  explicit SampledField(BoxGrid g) : grid(std::move(g)), values(grid.size(), cplx{0.0, 0.0}) {}
  SampledField(BoxGrid g, std::vector<cplx> v);

  // Fill from a callable taking the coordinate vector.
  template <typename F>
  void fill(F&& fn) {
    const int d = grid.dim();
    std::vector<double> x(d);
    std::vector<int> idx(d, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      grid.unflat(i, idx);
      for (int a = 0; a < d; ++a) x[a] = grid.coord(a, idx[a]);
      values[i] = fn(std::span<const double>(x));
    }
  }

  bool all_finite() const;
  void require_finite(const char* where) const;
};

// p or q = infinity is encoded by std::numeric_limits<double>::infinity().
struct MixedNormSpec {
  double p = 2.0;
  double q = 2.0;
  bool valid() const { return p >= 1.0 && q >= 1.0; }
};

// Samples F(xi, eta) over a product lattice; value index = xi_flat * |eta| + eta_flat.
struct PhaseField {
  BoxGrid xi_grid;
  BoxGrid eta_grid;
  std::vector<cplx> values;

  PhaseField() = default;
  PhaseField(BoxGrid xi, BoxGrid eta)
      : xi_grid(std::move(xi)),
        eta_grid(std::move(eta)),
        values(xi_grid.size() * eta_grid.size(), cplx{0.0, 0.0}) {}

  std::size_t n_xi() const { return xi_grid.size(); }
  std::size_t n_eta() const { return eta_grid.size(); }
  cplx& at(std::size_t xi_flat, std::size_t eta_flat) { return values[xi_flat * n_eta() + eta_flat]; }
  cplx at(std::size_t xi_flat, std::size_t eta_flat) const { return values[xi_flat * n_eta() + eta_flat]; }
};

// Serialization: JSON manifest {dim, points_per_axis[], half_width[], dtype:"c128",
// layout:"axis-major", data:"<sidecar>"} plus a raw little-endian binary of
// interleaved (re,im) float64 pairs.
void save_field(const SampledField& f, const std::string& manifest_path);
SampledField load_field(const std::string& manifest_path);

}  // namespace ttfa
