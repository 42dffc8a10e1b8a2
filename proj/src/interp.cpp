#include "ttfa/interp.hpp"

#include <cmath>

namespace ttfa {

std::vector<cplx> resample_linear(const PhaseField& F,
                                  const std::vector<std::vector<double>>& points) {
  const int dxi = F.xi_grid.dim();
  const int deta = F.eta_grid.dim();
  const int d = dxi + deta;

  auto axis_npts = [&](int a) { return a < dxi ? F.xi_grid.npts[a] : F.eta_grid.npts[a - dxi]; };
  auto axis_halfw = [&](int a) { return a < dxi ? F.xi_grid.halfw[a] : F.eta_grid.halfw[a - dxi]; };
  auto axis_spacing = [&](int a) {
    return a < dxi ? F.xi_grid.spacing(a) : F.eta_grid.spacing(a - dxi);
  };

  std::vector<std::size_t> stride(d);
  std::size_t s = 1;
  for (int a = d - 1; a >= 0; --a) {
    stride[a] = s;
    s *= static_cast<std::size_t>(axis_npts(a));
  }

  std::vector<cplx> out(points.size());
  std::vector<int> base(d);
  std::vector<double> frac(d);
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const auto& pt = points[pi];
    if (static_cast<int>(pt.size()) != d) throw ttfa_error("resample_linear: bad point dim");
    for (int a = 0; a < d; ++a) {
      const double t = (pt[a] + axis_halfw(a)) / axis_spacing(a);
      const int k = static_cast<int>(std::floor(t));
      if (k < 0 || k + 1 >= axis_npts(a))
        throw ttfa_error("resample_linear: point " + std::to_string(pi) + " outside hull");
      base[a] = k;
      frac[a] = t - k;
    }
    cplx acc{0.0, 0.0};
    for (unsigned corner = 0; corner < (1u << d); ++corner) {
      double w = 1.0;
      std::size_t flat = 0;
      for (int a = 0; a < d; ++a) {
        const bool hi = (corner >> a) & 1u;
        w *= hi ? frac[a] : (1.0 - frac[a]);
        flat += stride[a] * static_cast<std::size_t>(base[a] + (hi ? 1 : 0));
      }
      if (w != 0.0) acc += w * F.values[flat];
    }
    out[pi] = acc;
  }
  return out;
}

}  // namespace ttfa
