#include "ttfa/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace ttfa {

BoxGrid::BoxGrid(std::vector<int> n, std::vector<double> half)
    : npts(std::move(n)), halfw(std::move(half)) {
  if (npts.size() != halfw.size() || npts.empty())
    throw ttfa_error("BoxGrid: axis count mismatch");
  for (std::size_t a = 0; a < npts.size(); ++a) {
    if (npts[a] <= 0) throw ttfa_error("BoxGrid: points_per_axis must be positive");
    if (!(halfw[a] > 0.0)) throw ttfa_error("BoxGrid: half_width must be positive");
  }
  // Guard against overflow of the flat index space.
  long double total = 1.0L;
  for (int n_a : npts) total *= n_a;
  if (total > static_cast<long double>(std::numeric_limits<std::size_t>::max() / 32))
    throw ttfa_error("BoxGrid: total point count not addressable");
}

BoxGrid BoxGrid::cube(int dim, int n, double half_width) {
  return BoxGrid(std::vector<int>(dim, n), std::vector<double>(dim, half_width));
}

std::size_t BoxGrid::size() const {
  std::size_t total = 1;
  for (int n_a : npts) total *= static_cast<std::size_t>(n_a);
  return total;
}

double BoxGrid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= spacing(a);
  return v;
}

BoxGrid BoxGrid::dual() const {
  std::vector<double> dual_half(halfw.size());
  for (int a = 0; a < dim(); ++a) dual_half[a] = kPi / spacing(a);
  return BoxGrid(npts, dual_half);
}

std::size_t BoxGrid::flat(std::span<const int> idx) const {
  std::size_t f = 0;
  for (int a = 0; a < dim(); ++a) f = f * npts[a] + static_cast<std::size_t>(idx[a]);
  return f;
}

void BoxGrid::unflat(std::size_t flat_index, std::span<int> idx) const {
  for (int a = dim() - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat_index % npts[a]);
    flat_index /= npts[a];
  }
}

void BoxGrid::point(std::size_t flat_index, std::span<double> x) const {
  for (int a = dim() - 1; a >= 0; --a) {
    const int k = static_cast<int>(flat_index % npts[a]);
    flat_index /= npts[a];
    x[a] = coord(a, k);
  }
}

SampledField::SampledField(BoxGrid g, std::vector<cplx> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) throw ttfa_error("SampledField: value count != grid size");
}

bool SampledField::all_finite() const {
  for (const cplx& z : values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

void SampledField::require_finite(const char* where) const {
  if (!all_finite()) throw ttfa_error(std::string(where) + ": non-finite field");
}

void save_field(const SampledField& f, const std::string& manifest_path) {
  std::string bin_path = manifest_path;
  const auto pos = bin_path.rfind(".json");
  if (pos != std::string::npos)
    bin_path.replace(pos, 5, ".bin");
  else
    bin_path += ".bin";

  nlohmann::json j;
  j["dim"] = f.grid.dim();
  j["points_per_axis"] = f.grid.npts;
  j["half_width"] = f.grid.halfw;
  j["dtype"] = "c128";
  j["layout"] = "axis-major";
  // Sidecar referenced by file name only; both files live side by side.
  j["data"] = bin_path.substr(bin_path.find_last_of('/') + 1);

  std::ofstream js(manifest_path);
  if (!js) throw ttfa_error("save_field: cannot open " + manifest_path);
  js << j.dump(2) << "\n";

  std::ofstream bs(bin_path, std::ios::binary);
  if (!bs) throw ttfa_error("save_field: cannot open " + bin_path);
  static_assert(sizeof(cplx) == 16, "interleaved float64 layout");
  bs.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
  if (!bs) throw ttfa_error("save_field: short write to " + bin_path);
}

SampledField load_field(const std::string& manifest_path) {
  std::ifstream js(manifest_path);
  if (!js) throw ttfa_error("load_field: cannot open " + manifest_path);
  nlohmann::json j;
  js >> j;
  if (j.value("dtype", "") != "c128") throw ttfa_error("load_field: unsupported dtype");
  if (j.value("layout", "") != "axis-major") throw ttfa_error("load_field: unsupported layout");

  BoxGrid grid(j.at("points_per_axis").get<std::vector<int>>(),
               j.at("half_width").get<std::vector<double>>());
  if (grid.dim() != j.at("dim").get<int>()) throw ttfa_error("load_field: dim mismatch");

  const std::string dir = manifest_path.substr(0, manifest_path.find_last_of('/') + 1);
  const std::string bin_path = dir + j.at("data").get<std::string>();
  std::ifstream bs(bin_path, std::ios::binary);
  if (!bs) throw ttfa_error("load_field: cannot open " + bin_path);
  std::vector<cplx> vals(grid.size());
  bs.read(reinterpret_cast<char*>(vals.data()),
          static_cast<std::streamsize>(vals.size() * sizeof(cplx)));
  if (static_cast<std::size_t>(bs.gcount()) != vals.size() * sizeof(cplx))
    throw ttfa_error("load_field: payload size mismatch in " + bin_path);
  return SampledField(std::move(grid), std::move(vals));
}

}  // namespace ttfa
