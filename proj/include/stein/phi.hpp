#pragma once

// Shaping functions phi on [0, 1] and the gain kernel
//
//   G(t) = -t (phi'(t) + t phi''(t)) / phi(t).
//
// An admissible phi is bounded away from zero on [0, 1] and has phi'(1) = 0.

#include <string>
#include <variant>

namespace stein {

struct PhiValue {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// phi(t) = exp(gamma (1 - t)^kappa). Evaluation requires kappa >= 2; the
// object itself accepts any kappa > 0 so inadmissible members can be diagnosed.
class ExponentialPhi {
 public:
  ExponentialPhi(double gamma, double kappa);

  double gamma() const noexcept { return gamma_; }
  double kappa() const noexcept { return kappa_; }

  PhiValue eval_unchecked(double t) const;
  // gamma kappa t (1-t)^{kappa-1} - gamma^2 kappa^2 t^2 (1-t)^{2(kappa-1)}
  //   - t^2 gamma kappa (kappa-1) (1-t)^{kappa-2}
  double gain_kernel_closed_form(double t) const;

 private:
  double gamma_;
  double kappa_;
};

// phi(t) = (1 - t) (chi_[0, 1-gamma] * psi_gamma)(t) + kappa, where
// psi_gamma(s) = psi(s / gamma) / (gamma c) is the bump exp(-1/(1-|u|))
// rescaled to [-gamma, gamma] with unit mass. On [gamma, 1 - 2 gamma] the
// convolution is 1, so phi is the line 1 - t + kappa there.
class MollifiedLinearPhi {
 public:
  MollifiedLinearPhi(double kappa, double gamma, double quadrature_tol = 1e-10);

  double kappa() const noexcept { return kappa_; }
  double gamma() const noexcept { return gamma_; }
  double quadrature_tol() const noexcept { return tol_; }
  // Mass of exp(-1/(1-|u|)) over [-1, 1], computed once at construction.
  double bump_mass() const noexcept { return mass_; }

  PhiValue eval_unchecked(double t) const;

  double mollifier(double s) const;
  double mollifier_derivative(double s) const;
  // (chi_[0,a] * psi_gamma)(t) = integral of psi_gamma over [t - a, t].
  double convolution(double t) const;

 private:
  double kappa_;
  double gamma_;
  double tol_;
  double mass_;
};

using PhiFamily = std::variant<ExponentialPhi, MollifiedLinearPhi>;

// phi and its first two derivatives. Rejects t outside [0, 1] and exponential
// members with kappa < 2.
PhiValue phi_eval(const PhiFamily& family, double t);

double gain_kernel(const PhiFamily& family, double t);

struct PropertyReport {
  bool ok = false;
  double min_phi = 0.0;
  double argmin_phi = 0.0;
  double phi_prime_at_one = 0.0;
  std::string diagnostics;
};

// Checks inf phi > 0 on a grid of `grid_points` and |phi'(1)| <= 1e-8. Never throws.
PropertyReport validate_property_p(const PhiFamily& family, int grid_points = 10001);

// The unique t0 in (0, 1) where the exponential gain kernel changes sign.
// Throws SignChangeError if a grid scan does not find exactly one change.
double find_sign_change(const ExponentialPhi& family, int scan_points = 4001);

}  // namespace stein
