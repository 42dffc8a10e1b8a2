// twisted_ops.hpp - the building-block unitaries on L^2(R^{2n}) and twisted
// convolution.
//
//   tau_lam(eta) f(xi) = f(xi - eta) e^{-i (lam/2) [xi, eta]}
//   e_lam(a,b) f(x,u)  = f(x - tanh(lam/2) b, u + tanh(lam/2) a)
//                        * e^{-i c(lam) (x.a + u.b)}
//   Pi_lam(xi,eta)     = e^{i (lam/2) coth(lam) xi.eta} e_lam(eta) tau_lam(xi)
//   pi(x,y) f(xi)      = e^{i (x.xi + x.y/2)} f(xi + y)      (lambda = 1)
//   (f *_lam g)(xi)    = Int f(eta) g(xi - eta) e^{-i (lam/2) [xi, eta]} d eta
#pragma once

#include "ttfa/fft.hpp"
#include "ttfa/twist.hpp"

namespace ttfa {

SampledField twisted_translate(const TwistParameter& tw, const VecXd& eta, const SampledField& f);

SampledField twisted_modulate(const TwistParameter& tw, const VecXd& ab, const SampledField& f);

SampledField rep_pi_lambda(const TwistParameter& tw, const VecXd& xi, const VecXd& eta,
                           const SampledField& f);

// Pi_lam(zeta, s) = e^{i lam s} Pi_lam(zeta) for real s (real central phase of
// the G_n representation).
SampledField rep_pi_lambda_central(const TwistParameter& tw, const VecXc& zeta, double s,
                                   const SampledField& f);

// Schroedinger representation of H^{2n} at lambda = 1 acting on L^2(R^{2n}).
SampledField schrodinger_rep_2n(const VecXd& x, const VecXd& y, const SampledField& f);

enum class ConvMode { direct, fast };

// Twisted convolution; direct is the O(N^2) quadrature oracle, fast splits
// the symplectic phase into per-block chirps and runs FFT convolutions.
SampledField twisted_convolve(const TwistParameter& tw, const SampledField& f,
                              const SampledField& g, ConvMode mode);

// Classical STFT V_g f(x, y) = <f, e(y) tau(x) g> on R^{2n}: window shifts over
// the base lattice (zero-extended), modulations over the dual lattice, one FFT
// per shift.
PhaseField classical_stft(const SampledField& f, const SampledField& g);

// Direct quadrature of the classical STFT at one point (test oracle).
cplx classical_stft_at(const SampledField& f, const SampledField& g, const VecXd& x,
                       const VecXd& y);

}  // namespace ttfa
