#include <cmath>

#include "tnrg/diagnostics.hpp"
#include "tnrg/errors.hpp"

namespace tnrg {

ScalingFit scaling_fit(std::vector<std::pair<double, double>> points) {
  if (points.size() < 3) throw Error(ErrorCategory::invalid_input, "scaling_fit: need at least 3 points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw Error(ErrorCategory::invalid_input, "scaling_fit: points must be positive and finite");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx == 0.0) throw Error(ErrorCategory::invalid_input, "scaling_fit: x values are all equal");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [x, y] : points) {
    const double r = std::log(y) - (fit.intercept + fit.slope * std::log(x));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.points = std::move(points);
  return fit;
}

}  // namespace tnrg
