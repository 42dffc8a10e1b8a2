#include "ttfa/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace ttfa {

namespace {

// FFTW's planner is not thread-safe; executions on distinct buffers are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanKey {
  std::vector<int> shape;
  int sign;
  bool operator<(const PlanKey& o) const {
    if (sign != o.sign) return sign < o.sign;
    return shape < o.shape;
  }
};

fftw_plan get_plan(const std::vector<int>& shape, int sign) {
  static std::map<PlanKey, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  const PlanKey key{shape, sign};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::size_t total = 1;
  for (int n : shape) total *= static_cast<std::size_t>(n);
  std::vector<cplx> dummy(total);  // planned in-place: execution is in-place too
  fftw_plan p = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(),
                              reinterpret_cast<fftw_complex*>(dummy.data()),
                              reinterpret_cast<fftw_complex*>(dummy.data()),
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw ttfa_error("fftw: plan creation failed");
  cache.emplace(key, p);
  return p;
}

fftw_plan get_plan_many_last(std::size_t howmany, int n, int sign) {
  static std::map<std::tuple<std::size_t, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  const auto key = std::make_tuple(howmany, n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> dummy(howmany * static_cast<std::size_t>(n));
  fftw_plan p = fftw_plan_many_dft(
      1, &n, static_cast<int>(howmany), reinterpret_cast<fftw_complex*>(dummy.data()), nullptr, 1,
      n, reinterpret_cast<fftw_complex*>(dummy.data()), nullptr, 1, n,
      sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw ttfa_error("fftw: plan_many creation failed");
  cache.emplace(key, p);
  return p;
}

// i^k for integer k (exact unit phases).
cplx ipow(long long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

void dft_inplace(std::vector<cplx>& data, const std::vector<int>& shape, int sign) {
  fftw_plan p = get_plan(shape, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                   reinterpret_cast<fftw_complex*>(data.data()));
}

void dft_last_axis(std::vector<cplx>& data, std::size_t howmany, int n, int sign) {
  fftw_plan p = get_plan_many_last(howmany, n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                   reinterpret_cast<fftw_complex*>(data.data()));
}

SampledField fourier_transform(const SampledField& f, int sign) {
  f.require_finite("fourier_transform");
  const BoxGrid& g = f.grid;
  const int d = g.dim();

  // Sum_j f(x_j) e^{s i x_j w_m}: with x_j = -L + j dx, w_m = -W + m dw,
  // dx*W = pi and L*dw = pi exactly, this is (-1)^{sum j} on input,
  // a DFT of matching sign, and (-1)^{sum m} i^{s*sum N} on output.
  SampledField out(g.dual());
  std::vector<cplx> work = f.values;
  std::vector<int> idx(d);
  for (std::size_t i = 0; i < work.size(); ++i) {
    g.unflat(i, idx);
    long long jsum = 0;
    for (int a = 0; a < d; ++a) jsum += idx[a];
    if (jsum & 1) work[i] = -work[i];
  }
  dft_inplace(work, g.npts, sign);

  double scale = 1.0;
  long long nsum = 0;
  for (int a = 0; a < d; ++a) {
    scale *= g.spacing(a) / std::sqrt(2.0 * kPi);
    nsum += g.npts[a];
  }
  const cplx corner = ipow(sign < 0 ? -nsum : nsum) * scale;
  for (std::size_t i = 0; i < work.size(); ++i) {
    g.unflat(i, idx);
    long long msum = 0;
    for (int a = 0; a < d; ++a) msum += idx[a];
    out.values[i] = work[i] * corner * ((msum & 1) ? -1.0 : 1.0);
  }
  return out;
}

SampledField fractional_shift(const SampledField& f, std::span<const double> shift) {
  f.require_finite("fractional_shift");
  const BoxGrid& g = f.grid;
  const int d = g.dim();
  if (static_cast<int>(shift.size()) != d) throw ttfa_error("fractional_shift: bad shift dim");
  for (int a = 0; a < d; ++a)
    if (!(std::abs(shift[a]) < g.halfw[a])) throw ttfa_error("fractional_shift: shift out of range");
  bool all_zero = true;
  for (int a = 0; a < d; ++a)
    if (shift[a] != 0.0) { all_zero = false; break; }
  if (all_zero) return f;

  // Per-axis phase tables e^{-i s_a w_a(k)}, symmetrized Nyquist bin.
  std::vector<std::vector<cplx>> ramps(d);
  for (int a = 0; a < d; ++a) {
    const int n = g.npts[a];
    ramps[a].resize(n);
    const double base = 2.0 * kPi / (n * g.spacing(a));
    for (int k = 0; k < n; ++k) {
      const int ks = (k <= n / 2) ? k : k - n;
      if (n % 2 == 0 && k == n / 2) {
        ramps[a][k] = std::cos(shift[a] * base * ks);
      } else {
        const double phase = -shift[a] * base * ks;
        ramps[a][k] = {std::cos(phase), std::sin(phase)};
      }
    }
  }

  SampledField out = f;
  dft_inplace(out.values, g.npts, -1);
  std::vector<int> idx(d);
  const double inv_n = 1.0 / static_cast<double>(g.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    g.unflat(i, idx);
    cplx factor{inv_n, 0.0};
    for (int a = 0; a < d; ++a) factor *= ramps[a][idx[a]];
    out.values[i] *= factor;
  }
  dft_inplace(out.values, g.npts, +1);
  return out;
}

SampledField ft_on_grid(const SampledField& f, const BoxGrid& target, int sign) {
  f.require_finite("ft_on_grid");
  const BoxGrid& g = f.grid;
  const int d = g.dim();
  if (target.dim() != d) throw ttfa_error("ft_on_grid: dim mismatch");

  // Contract one axis at a time with M_a[m, j] = e^{s i x_j w_m} dx (2pi)^{-1/2}.
  std::vector<cplx> cur = f.values;
  std::vector<int> shape = g.npts;
  for (int a = 0; a < d; ++a) {
    const int nin = g.npts[a];
    const int nout = target.npts[a];
    const double scale = g.spacing(a) / std::sqrt(2.0 * kPi);
    std::vector<cplx> mat(static_cast<std::size_t>(nout) * nin);
    for (int m = 0; m < nout; ++m) {
      const double w = target.coord(a, m);
      for (int j = 0; j < nin; ++j) {
        const double phase = sign * g.coord(a, j) * w;
        mat[static_cast<std::size_t>(m) * nin + j] = cplx{std::cos(phase), std::sin(phase)} * scale;
      }
    }
    // cur has shape (pre, nin, post); replace axis a by nout.
    std::size_t pre = 1, post = 1;
    for (int b = 0; b < a; ++b) pre *= shape[b];
    for (int b = a + 1; b < d; ++b) post *= shape[b];
    std::vector<cplx> next(pre * static_cast<std::size_t>(nout) * post);
    parallel_for(pre, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t p = lo; p < hi; ++p) {
        const cplx* src = cur.data() + p * nin * post;
        cplx* dst = next.data() + p * nout * post;
        for (int m = 0; m < nout; ++m) {
          const cplx* row = mat.data() + static_cast<std::size_t>(m) * nin;
          for (std::size_t q = 0; q < post; ++q) {
            cplx acc{0.0, 0.0};
            for (int j = 0; j < nin; ++j) acc += row[j] * src[static_cast<std::size_t>(j) * post + q];
            dst[static_cast<std::size_t>(m) * post + q] = acc;
          }
        }
      }
    });
    cur.swap(next);
    shape[a] = nout;
  }
  return SampledField(target, std::move(cur));
}

}  // namespace ttfa
