#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "tnrg/errors.hpp"
#include "tnrg/ising.hpp"

namespace tnrg {

FreeEnergyQuadrature exact_free_energy_quadrature(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw Error(ErrorCategory::invalid_input, "beta must be finite and >= 0");
  const double ch = std::cosh(2.0 * beta);
  const double b = std::sinh(2.0 * beta);
  // Integral over the second angle done exactly:
  //   (1/2pi) int ln(a - b cos t) dt = ln((a + sqrt(a^2 - b^2)) / 2).
  auto inner = [&](double theta) {
    const double a = ch * ch - b * std::cos(theta);
    const double disc = std::max(0.0, (a - b) * (a + b));
    return std::log(0.5 * (a + std::sqrt(disc)));
  };
  double error = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      inner, 0.0, std::numbers::pi, 20, 1e-15, &error);
  const double value = std::numbers::ln2 + 0.5 * integral / std::numbers::pi;
  return {value, 0.5 * error / std::numbers::pi};
}

double exact_free_energy_reference(double beta) {
  const auto q = exact_free_energy_quadrature(beta);
  if (!(q.error_estimate <= 1e-11))
    throw Error(ErrorCategory::numerical, "free-energy quadrature did not converge at beta=" +
                                              std::to_string(beta) + " (achieved error estimate " +
                                              std::to_string(q.error_estimate) + ")");
  return q.value;
}

}  // namespace tnrg
