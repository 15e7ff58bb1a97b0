#include "stein/phi.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "stein/errors.hpp"
#include "stein/quadrature.hpp"

namespace stein {
namespace {

// exp(-1/(1-|u|)) on (-1, 1), zero outside.
double bump(double u) {
  const double a = std::abs(u);
  if (a >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - a));
}

double bump_derivative(double u) {
  const double a = std::abs(u);
  if (a >= 1.0 || u == 0.0) return 0.0;  // one-sided derivatives at 0 are +-e^{-1}
  const double sign = u > 0.0 ? 1.0 : -1.0;
  const double r = 1.0 - a;
  return -sign * bump(u) / (r * r);
}

void check_unit_interval(double t) {
  if (!(t >= 0.0 && t <= 1.0)) detail::fail_validation("phi argument must lie in [0, 1], got ", std::to_string(t));
}

double gain_from(const PhiValue& v, double t) { return -t * (v.d1 + t * v.d2) / v.value; }

}  // namespace

ExponentialPhi::ExponentialPhi(double gamma, double kappa) : gamma_(gamma), kappa_(kappa) {
  if (!std::isfinite(gamma)) detail::fail_validation("gamma must be finite");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    detail::fail_validation("kappa must be positive, got ", std::to_string(kappa));
  }
}

PhiValue ExponentialPhi::eval_unchecked(double t) const {
  const double u = 1.0 - t;
  const double k = kappa_;
  const double g = gamma_;
  // std::pow(0, 0) == 1 gives the continuous extension of (1-t)^{kappa-2} at kappa = 2.
  const double u_km1 = std::pow(u, k - 1.0);
  const double u_km2 = std::pow(u, k - 2.0);
  const double value = std::exp(g * std::pow(u, k));
  PhiValue v;
  v.value = value;
  v.d1 = -g * k * u_km1 * value;
  v.d2 = (g * k * (k - 1.0) * u_km2 + g * g * k * k * u_km1 * u_km1) * value;
  return v;
}

double ExponentialPhi::gain_kernel_closed_form(double t) const {
  const double u = 1.0 - t;
  const double k = kappa_;
  const double g = gamma_;
  const double u_km1 = std::pow(u, k - 1.0);
  return g * k * t * u_km1 - g * g * k * k * t * t * u_km1 * u_km1 -
         t * t * g * k * (k - 1.0) * std::pow(u, k - 2.0);
}

MollifiedLinearPhi::MollifiedLinearPhi(double kappa, double gamma, double quadrature_tol)
    : kappa_(kappa), gamma_(gamma), tol_(quadrature_tol) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    detail::fail_validation("kappa must be positive, got ", std::to_string(kappa));
  }
  if (!(gamma > 0.0 && gamma < 0.5)) detail::fail_validation("gamma must lie in (0, 1/2), got ", std::to_string(gamma));
  if (!(quadrature_tol > 0.0)) detail::fail_validation("quadrature tolerance must be positive");
  mass_ = 2.0 * adaptive_simpson(bump, 0.0, 1.0, 1e-15);
}

double MollifiedLinearPhi::mollifier(double s) const { return bump(s / gamma_) / (gamma_ * mass_); }

double MollifiedLinearPhi::mollifier_derivative(double s) const {
  return bump_derivative(s / gamma_) / (gamma_ * gamma_ * mass_);
}

double MollifiedLinearPhi::convolution(double t) const {
  const double a = 1.0 - gamma_;
  const double lo = std::max(t - a, -gamma_) / gamma_;
  const double hi = std::min(t, gamma_) / gamma_;
  if (!(hi > lo)) return 0.0;
  // Split at the kink of |u| so each piece is smooth.
  const double tol = tol_ * mass_;
  double sum = 0.0;
  if (lo < 0.0 && hi > 0.0) {
    sum = adaptive_simpson(bump, lo, 0.0, 0.5 * tol) + adaptive_simpson(bump, 0.0, hi, 0.5 * tol);
  } else {
    sum = adaptive_simpson(bump, lo, hi, tol);
  }
  return sum / mass_;
}

PhiValue MollifiedLinearPhi::eval_unchecked(double t) const {
  const double a = 1.0 - gamma_;
  const double c = convolution(t);
  const double c1 = mollifier(t) - mollifier(t - a);
  const double c2 = mollifier_derivative(t) - mollifier_derivative(t - a);
  const double u = 1.0 - t;
  PhiValue v;
  v.value = u * c + kappa_;
  v.d1 = -c + u * c1;
  v.d2 = -2.0 * c1 + u * c2;
  return v;
}

PhiValue phi_eval(const PhiFamily& family, double t) {
  check_unit_interval(t);
  return std::visit(
      [t](const auto& f) -> PhiValue {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialPhi>) {
          if (f.kappa() < 2.0) {
            detail::fail_validation("exponential family needs kappa >= 2, got ", std::to_string(f.kappa()));
          }
        }
        return f.eval_unchecked(t);
      },
      family);
}

double gain_kernel(const PhiFamily& family, double t) { return gain_from(phi_eval(family, t), t); }

PropertyReport validate_property_p(const PhiFamily& family, int grid_points) {
  PropertyReport report;
  std::ostringstream diag;
  if (grid_points < 2) grid_points = 2;
  report.min_phi = std::numeric_limits<double>::infinity();
  bool finite = true;
  for (int i = 0; i < grid_points; ++i) {
    const double t = static_cast<double>(i) / (grid_points - 1);
    const double v = std::visit([t](const auto& f) { return f.eval_unchecked(t).value; }, family);
    if (!std::isfinite(v)) {
      finite = false;
      diag << "phi(" << t << ") is not finite; ";
      break;
    }
    if (v < report.min_phi) {
      report.min_phi = v;
      report.argmin_phi = t;
    }
  }
  report.phi_prime_at_one = std::visit([](const auto& f) { return f.eval_unchecked(1.0).d1; }, family);
  const bool positive = finite && report.min_phi > 0.0;
  const bool flat_end = std::isfinite(report.phi_prime_at_one) && std::abs(report.phi_prime_at_one) <= 1e-8;
  if (finite && !positive) diag << "inf phi = " << report.min_phi << " at t = " << report.argmin_phi << "; ";
  if (!flat_end) diag << "phi'(1) = " << report.phi_prime_at_one << " != 0; ";
  report.ok = positive && flat_end;
  report.diagnostics = report.ok ? "ok" : diag.str();
  return report;
}

double find_sign_change(const ExponentialPhi& family, int scan_points) {
  if (family.gamma() == 0.0) detail::fail_validation("find_sign_change needs gamma != 0");
  if (family.kappa() < 2.0) detail::fail_validation("find_sign_change needs kappa >= 2");
  if (scan_points < 3) scan_points = 3;
  auto sign_at = [&](double t) {
    const double g = family.gain_kernel_closed_form(t);
    return (g > 0.0) - (g < 0.0);
  };
  int changes = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int previous = 0;
  double previous_t = 0.0;
  for (int i = 1; i < scan_points; ++i) {
    const double t = static_cast<double>(i) / scan_points;
    const int s = sign_at(t);
    if (s == 0) continue;
    if (previous != 0 && s != previous) {
      ++changes;
      bracket_lo = previous_t;
      bracket_hi = t;
    }
    previous = s;
    previous_t = t;
  }
  if (changes != 1) {
    std::ostringstream msg;
    msg << "gain kernel (gamma=" << family.gamma() << ", kappa=" << family.kappa() << ") shows " << changes
        << " sign changes on (0,1), expected exactly one";
    throw SignChangeError(msg.str(), changes);
  }
  const int left_sign = sign_at(bracket_lo);
  while (bracket_hi - bracket_lo > 1e-10) {
    const double mid = 0.5 * (bracket_lo + bracket_hi);
    const int s = sign_at(mid);
    if (s == 0) return mid;
    if (s == left_sign) {
      bracket_lo = mid;
    } else {
      bracket_hi = mid;
    }
  }
  return 0.5 * (bracket_lo + bracket_hi);
}

}  // namespace stein
