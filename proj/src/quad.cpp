#include "ttfa/quad.hpp"

#include <cmath>
#include <limits>

namespace ttfa {

cplx quadrature_integral(const SampledField& f) {
  f.require_finite("quadrature_integral");
  return pairwise_sum(f.values) * f.grid.cell_volume();
}

cplx inner_product(const SampledField& f, const SampledField& g) {
  if (f.grid != g.grid) throw ttfa_error("inner_product: grid mismatch");
  std::vector<cplx> terms(f.values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = f.values[i] * std::conj(g.values[i]);
  return pairwise_sum(terms) * f.grid.cell_volume();
}

double l2_norm(const SampledField& f) {
  std::vector<double> terms(f.values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::norm(f.values[i]);
  return std::sqrt(pairwise_sum<double>(terms) * f.grid.cell_volume());
}

double lp_norm(const SampledField& f, double p) {
  if (!(p >= 1.0)) throw ttfa_error("lp_norm: p must be in [1, inf]");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const cplx& z : f.values) m = std::max(m, std::abs(z));
    return m;
  }
  std::vector<double> terms(f.values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::pow(std::abs(f.values[i]), p);
  return std::pow(pairwise_sum<double>(terms) * f.grid.cell_volume(), 1.0 / p);
}

double mixed_norm_lpq(const PhaseField& F, const MixedNormSpec& spec) {
  if (!spec.valid()) throw ttfa_error("mixed_norm_lpq: p,q must be in [1, inf]");
  const std::size_t nxi = F.n_xi();
  const std::size_t neta = F.n_eta();
  const double vol_xi = F.xi_grid.cell_volume();
  const double vol_eta = F.eta_grid.cell_volume();
  const bool p_inf = std::isinf(spec.p);
  const bool q_inf = std::isinf(spec.q);

  // Inner L^p over xi for each eta.
  std::vector<double> inner(neta, 0.0);
  std::vector<double> col(nxi);
  for (std::size_t e = 0; e < neta; ++e) {
    if (p_inf) {
      double m = 0.0;
      for (std::size_t x = 0; x < nxi; ++x) m = std::max(m, std::abs(F.at(x, e)));
      inner[e] = m;
    } else {
      for (std::size_t x = 0; x < nxi; ++x) col[x] = std::pow(std::abs(F.at(x, e)), spec.p);
      inner[e] = std::pow(pairwise_sum<double>(col) * vol_xi, 1.0 / spec.p);
    }
  }
  if (q_inf) {
    double m = 0.0;
    for (double v : inner) m = std::max(m, v);
    return m;
  }
  for (double& v : inner) v = std::pow(v, spec.q);
  return std::pow(pairwise_sum<double>(inner) * vol_eta, 1.0 / spec.q);
}

}  // namespace ttfa
