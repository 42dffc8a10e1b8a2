#include "ttfa/twisted_ops.hpp"

#include <cmath>

namespace ttfa {

namespace {

// Pointwise multiply by e^{i phase(x)} with phase(x) = sum_a coef[a] * x_a,
// via per-axis unit-phase tables.
void apply_linear_chirp(SampledField& f, const VecXd& coef) {
  const BoxGrid& g = f.grid;
  const int d = g.dim();
  std::vector<std::vector<cplx>> tab(d);
  for (int a = 0; a < d; ++a) {
    tab[a].resize(g.npts[a]);
    for (int k = 0; k < g.npts[a]; ++k) {
      const double ph = coef[a] * g.coord(a, k);
      tab[a][k] = {std::cos(ph), std::sin(ph)};
    }
  }
  std::vector<int> idx(d);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    g.unflat(i, idx);
    cplx w{1.0, 0.0};
    for (int a = 0; a < d; ++a) w *= tab[a][idx[a]];
    f.values[i] *= w;
  }
}

void check_2n(const TwistParameter& tw, const SampledField& f, const char* where) {
  if (f.grid.dim() != 2 * tw.n) throw ttfa_error(std::string(where) + ": field must be 2n-dimensional");
}

}  // namespace

SampledField twisted_translate(const TwistParameter& tw, const VecXd& eta, const SampledField& f) {
  check_2n(tw, f, "twisted_translate");
  SampledField out = fractional_shift(f, std::span<const double>(eta.data(), eta.size()));
  // e^{-i(lam/2)[xi,eta]} = e^{+i(lam/2) xi.(J eta)}
  apply_linear_chirp(out, 0.5 * tw.lam * apply_j(eta));
  return out;
}

SampledField twisted_modulate(const TwistParameter& tw, const VecXd& ab, const SampledField& f) {
  check_2n(tw, f, "twisted_modulate");
  const VecXd shift = tw.tanh_half * apply_j(ab);
  SampledField out = fractional_shift(f, std::span<const double>(shift.data(), shift.size()));
  apply_linear_chirp(out, -tw.c_half * ab);
  return out;
}

SampledField rep_pi_lambda(const TwistParameter& tw, const VecXd& xi, const VecXd& eta,
                           const SampledField& f) {
  SampledField out = twisted_modulate(tw, eta, twisted_translate(tw, xi, f));
  const double ph = 0.5 * tw.lam_coth_lam * xi.dot(eta);
  const cplx w{std::cos(ph), std::sin(ph)};
  for (auto& v : out.values) v *= w;
  return out;
}

SampledField rep_pi_lambda_central(const TwistParameter& tw, const VecXc& zeta, double s,
                                   const SampledField& f) {
  SampledField out = rep_pi_lambda(tw, zeta.real(), zeta.imag(), f);
  const double ph = tw.lam * s;
  const cplx w{std::cos(ph), std::sin(ph)};
  for (auto& v : out.values) v *= w;
  return out;
}

SampledField schrodinger_rep_2n(const VecXd& x, const VecXd& y, const SampledField& f) {
  const VecXd shift = -y;  // f(xi + y) = f(xi - (-y))
  SampledField out = fractional_shift(f, std::span<const double>(shift.data(), shift.size()));
  apply_linear_chirp(out, x);
  const double ph = 0.5 * x.dot(y);
  const cplx w{std::cos(ph), std::sin(ph)};
  for (auto& v : out.values) v *= w;
  return out;
}

SampledField twisted_convolve(const TwistParameter& tw, const SampledField& f,
                              const SampledField& g, ConvMode mode) {
  check_2n(tw, f, "twisted_convolve");
  if (f.grid != g.grid) throw ttfa_error("twisted_convolve: grid mismatch");
  const BoxGrid& grid = f.grid;
  const int d = grid.dim();
  const int n = tw.n;
  const double vol = grid.cell_volume();

  if (mode == ConvMode::direct) {
    // (f *_lam g)(p) = Int f(p-q) g(q) e^{i (lam/2) (J p).q} dq, zero-extended.
    SampledField out(grid);
    const std::size_t total = grid.size();
    parallel_for(total, [&](std::size_t lo, std::size_t hi) {
      std::vector<int> ip(d), iq(d);
      std::vector<double> p(d), q(d);
      std::vector<cplx> terms(total);
      for (std::size_t i = lo; i < hi; ++i) {
        grid.unflat(i, ip);
        grid.point(i, p);
        for (std::size_t jj = 0; jj < total; ++jj) {
          grid.unflat(jj, iq);
          bool inside = true;
          for (int a = 0; a < d; ++a) {
            // p - q = (ip - iq) dx is the lattice point of index ip - iq + N/2.
            const int k = ip[a] - iq[a] + grid.npts[a] / 2;
            if (k < 0 || k >= grid.npts[a]) { inside = false; break; }
            iq[a] = k;
          }
          if (!inside) { terms[jj] = cplx{0.0, 0.0}; continue; }
          grid.point(jj, q);
          double ph = 0.0;  // (lam/2) (J p).q with (Jp) = (u, -x)
          for (int a = 0; a < n; ++a) ph += p[n + a] * q[a] - p[a] * q[n + a];
          ph *= 0.5 * tw.lam;
          const std::size_t fdiff = grid.flat(iq);
          terms[jj] = f.values[fdiff] * g.values[jj] * cplx{std::cos(ph), std::sin(ph)};
        }
        out.values[i] = pairwise_sum<cplx>(terms) * vol;
      }
    });
    return out;
  }

  // Fast path: with p=(x,u), q=(r,s) the phase splits as
  //   e^{i(lam/2)(u.r - x.s)},
  // so for each (s, u) the r-integral is an ordinary convolution in x of
  // f(., u-s) against the chirp-multiplied kernel g(., s) e^{i(lam/2) u.r};
  // the remaining s-sum carries the chirp e^{-i(lam/2) x.s}. Implemented for
  // n = 1 (two axes) with padded FFT convolutions; higher n falls back to the
  // direct quadrature.
  if (n != 1) return twisted_convolve(tw, f, g, ConvMode::direct);

  const int nx = grid.npts[0];
  const int nu = grid.npts[1];
  int nfft = 1;
  while (nfft < 2 * nx) nfft *= 2;

  // Padded spectra of the x-rows of f, indexed by the u-row.
  std::vector<std::vector<cplx>> fhat(nu, std::vector<cplx>(nfft, cplx{0, 0}));
  for (int ju = 0; ju < nu; ++ju) {
    for (int jx = 0; jx < nx; ++jx) fhat[ju][jx] = f.values[static_cast<std::size_t>(jx) * nu + ju];
    dft_last_axis(fhat[ju], 1, nfft, -1);
  }

  // Chirp tables e^{i(lam/2) u r} over (u-index, r-index) and e^{-i(lam/2) x s}.
  auto chirp_table = [&](int axis_out, int axis_in, double sign) {
    std::vector<cplx> t(static_cast<std::size_t>(grid.npts[axis_out]) * grid.npts[axis_in]);
    for (int a = 0; a < grid.npts[axis_out]; ++a)
      for (int b = 0; b < grid.npts[axis_in]; ++b) {
        const double ph = sign * 0.5 * tw.lam * grid.coord(axis_out, a) * grid.coord(axis_in, b);
        t[static_cast<std::size_t>(a) * grid.npts[axis_in] + b] = {std::cos(ph), std::sin(ph)};
      }
    return t;
  };
  const std::vector<cplx> ur_tab = chirp_table(1, 0, +1.0);  // (u, r)
  const std::vector<cplx> xs_tab = chirp_table(0, 1, -1.0);  // (x, s)

  // D[s][u][x]: x-convolution of f(., u-s) with g(., s) e^{i(lam/2) u .}.
  std::vector<cplx> dsux(static_cast<std::size_t>(nu) * nu * nx, cplx{0, 0});
  std::vector<cplx> ker(nfft), prod(nfft);
  for (int js = 0; js < nu; ++js) {
    for (int ju = 0; ju < nu; ++ju) {
      const int jdiff = ju - js + nu / 2;  // lattice index of u - s
      if (jdiff < 0 || jdiff >= nu) continue;  // u - s outside the box
      std::fill(ker.begin(), ker.end(), cplx{0, 0});
      for (int jr = 0; jr < nx; ++jr)
        ker[jr] = g.values[static_cast<std::size_t>(jr) * nu + js] *
                  ur_tab[static_cast<std::size_t>(ju) * nx + jr];
      dft_last_axis(ker, 1, nfft, -1);
      for (int k = 0; k < nfft; ++k) prod[k] = ker[k] * fhat[jdiff][k];
      dft_last_axis(prod, 1, nfft, +1);
      cplx* row = &dsux[(static_cast<std::size_t>(js) * nu + ju) * nx];
      const double inv = 1.0 / nfft;
      // D(x_i) = sum_r frow[i - r + nx/2] ker[r] sits at padded-conv index
      // i + nx/2 (nfft >= 2 nx keeps the wrap away from real data).
      for (int jx = 0; jx < nx; ++jx) row[jx] = prod[jx + nx / 2] * inv;
    }
  }

  SampledField out(grid);
  for (int jx = 0; jx < nx; ++jx) {
    for (int ju = 0; ju < nu; ++ju) {
      cplx acc{0, 0};
      for (int js = 0; js < nu; ++js)
        acc += xs_tab[static_cast<std::size_t>(jx) * nu + js] *
               dsux[(static_cast<std::size_t>(js) * nu + ju) * nx + jx];
      out.values[static_cast<std::size_t>(jx) * nu + ju] = acc * vol;
    }
  }
  return out;
}

PhaseField classical_stft(const SampledField& f, const SampledField& g) {
  if (f.grid != g.grid) throw ttfa_error("classical_stft: grid mismatch");
  const BoxGrid& grid = f.grid;
  const int d = grid.dim();
  const std::size_t total = grid.size();
  PhaseField V(grid, grid.dual());

  // V(x_shift, y) = (2 pi)^{d/2} FT[f . conj(g(.- x))](y); window shifts are
  // whole lattice steps, zero-extended outside the box.
  const double ft_to_ip = std::pow(2.0 * kPi, 0.5 * d);
  std::vector<int> ishift(d), idx(d);
  SampledField h(grid);
  for (std::size_t s = 0; s < total; ++s) {
    grid.unflat(s, ishift);
    for (int a = 0; a < d; ++a) ishift[a] -= grid.npts[a] / 2;  // signed step count
    for (std::size_t i = 0; i < total; ++i) {
      grid.unflat(i, idx);
      bool inside = true;
      for (int a = 0; a < d; ++a) {
        idx[a] -= ishift[a];
        if (idx[a] < 0 || idx[a] >= grid.npts[a]) { inside = false; break; }
      }
      h.values[i] = inside ? f.values[i] * std::conj(g.values[grid.flat(idx)]) : cplx{0, 0};
    }
    SampledField hhat = fourier_transform(h, -1);
    for (std::size_t y = 0; y < total; ++y) V.at(s, y) = hhat.values[y] * ft_to_ip;
  }
  return V;
}

cplx classical_stft_at(const SampledField& f, const SampledField& g, const VecXd& x,
                       const VecXd& y) {
  const BoxGrid& grid = f.grid;
  const int d = grid.dim();
  const std::size_t total = grid.size();
  std::vector<cplx> terms(total);
  std::vector<double> pt(d);
  std::vector<int> idx(d);
  for (std::size_t i = 0; i < total; ++i) {
    grid.point(i, pt);
    grid.unflat(i, idx);
    // conj(g)(xi - x) by nearest exact lattice arithmetic is not available for
    // off-lattice x; this oracle only supports on-lattice shifts.
    bool inside = true;
    for (int a = 0; a < d; ++a) {
      const double step = (x[a]) / grid.spacing(a);
      const int k = static_cast<int>(std::lround(step));
      if (std::abs(step - k) > 1e-9) throw ttfa_error("classical_stft_at: off-lattice shift");
      idx[a] -= k;
      if (idx[a] < 0 || idx[a] >= grid.npts[a]) { inside = false; break; }
    }
    if (!inside) { terms[i] = cplx{0, 0}; continue; }
    double ph = 0.0;
    for (int a = 0; a < d; ++a) ph += y[a] * pt[a];
    terms[i] = f.values[i] * std::conj(g.values[grid.flat(idx)]) * cplx{std::cos(ph), -std::sin(ph)};
  }
  return pairwise_sum<cplx>(terms) * grid.cell_volume();
}

}  // namespace ttfa
