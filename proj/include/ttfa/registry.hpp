// registry.hpp - measured-constants registry.
//
// Several identities hold up to dimensional constants that the source
// calculus leaves untracked (d_n, c_n). Each is measured once per
// (n, FT convention) by a calibration routine on fixed seeded fixtures and
// reused by every downstream check; acceptance asserts constancy of the
// measured ratios, never a hard-coded value.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "ttfa/common.hpp"

namespace ttfa {

struct RegistryEntry {
  double value = 0.0;
  double tolerance = 0.0;
  std::string fixture_hash;
};

class ConstantsRegistry {
 public:
  // n: half-dimension; the FT convention tag is fixed by this library.
  explicit ConstantsRegistry(int n) : n_(n) {}

  // Known keys: "d_n_repker"      (reproducing-kernel constant, ~1)
  //             "d_n_orth"        (orthogonality/inversion constant, ~4^-n)
  //             "planch_classical" (classical STFT Plancherel, ~(2pi)^{2n})
  //             "vvtilde"         (Vtilde(Vf) = c f on H^n, ~4^-n)
  //             "heis_planch"     (sum ||V_lam f||^2 dlam / ||f||^2, ~2pi 4^-n)
  //             "algebra_C_p<p>"  (Banach-algebra constant at exponent p)
  double get(const std::string& key);           // computes on demand
  std::optional<double> lookup(const std::string& key) const;
  void set(const std::string& key, double value, double tolerance,
           const std::string& fixture_hash);

  int n() const { return n_; }
  static constexpr const char* ft_convention = "fhat(w)=(2pi)^{-d/2} Int f e^{-ixw}; sym form u.y-v.x";

  void save(const std::string& path) const;
  static ConstantsRegistry load_or_default(const std::string& path, int n);

 private:
  int n_ = 1;
  std::map<std::string, RegistryEntry> entries_;
};

// The calibration routines (defined in registry.cpp) run small fixed-seed
// fixtures through the library and measure each constant.
double calibrate_constant(ConstantsRegistry& reg, const std::string& key);

}  // namespace ttfa
