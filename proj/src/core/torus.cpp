#include "tnrg/torus.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "tnrg/contract.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/kernels.hpp"

namespace tnrg {
namespace {

void check_lattice(const Tensor& a) {
  if (a.rank() != 4) throw Error(ErrorCategory::invalid_input, "torus: need a four-leg tensor");
  if (a.dim(kRight) != a.dim(kLeft) || a.dim(kTop) != a.dim(kBottom))
    throw Error(ErrorCategory::invalid_input, "torus: opposite legs must have equal dims");
}

double ipow(double base, std::size_t e) {
  double r = 1.0;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

// Rough multiply-add count of the row-transfer route.
double row_cost(double dh, double dv, std::size_t lx, std::size_t ly) {
  double cost = 0.0;
  for (std::size_t s = 1; s < lx; ++s) cost += dh * dh * ipow(dv, 2 * s) * dh * dv * dv;
  const double d = ipow(dv, lx);
  cost += d * d * dh * dh;
  cost += static_cast<double>(ly > 0 ? ly - 1 : 0) * d * d * d;
  return cost;
}

double peak_elements(double dh, double dv, std::size_t lx) {
  double peak = ipow(dv, 2 * lx);
  if (lx > 1) peak = std::max(peak, dh * dh * ipow(dv, 2 * (lx - 1)));
  return peak;
}

}  // namespace

Tensor row_transfer(const Tensor& a, std::size_t lx) {
  check_lattice(a);
  if (lx == 0) throw Error(ErrorCategory::invalid_input, "torus: Lx must be at least 1");
  if (lx == 1) {
    const LegPair ring[] = {{kRight, kLeft}};
    Tensor tb = trace(a, ring);  // legs (top, bottom)
    return tb.permuted({1, 0});
  }
  // Chain state legs: h0 (open left leg of site 0), b_1..b_s, t_1..t_s, h.
  Tensor x = a.permuted({kLeft, kBottom, kTop, kRight});
  for (std::size_t s = 1; s < lx; ++s) {
    const std::size_t h = 2 * s + 1;
    const bool last = s + 1 == lx;
    Tensor next = last ? contract(x, a, {{h, kLeft}, {0, kRight}}) : contract(x, a, {{h, kLeft}});
    // Result legs: [h0?] b_1..b_s t_1..t_s, then a's remaining legs.
    std::vector<std::size_t> order;
    const std::size_t base = last ? 0 : 1;
    if (!last) order.push_back(0);
    for (std::size_t i = 0; i < s; ++i) order.push_back(base + i);          // b_1..b_s
    const std::size_t rest = base + 2 * s;                                   // first leg from a
    if (last) {
      // a contributes (top, bottom)
      order.push_back(rest + 1);
      for (std::size_t i = 0; i < s; ++i) order.push_back(base + s + i);  // t_1..t_s
      order.push_back(rest);
    } else {
      // a contributes (right, top, bottom)
      order.push_back(rest + 2);
      for (std::size_t i = 0; i < s; ++i) order.push_back(base + s + i);
      order.push_back(rest + 1);
      order.push_back(rest);
    }
    x = next.permuted(order);
  }
  return x;
}

double torus_contract(const Tensor& a, std::size_t lx, std::size_t ly) {
  check_lattice(a);
  if (lx == 0 || ly == 0) throw Error(ErrorCategory::invalid_input, "torus: sizes must be >= 1");
  const double dh = static_cast<double>(a.dim(kRight));
  const double dv = static_cast<double>(a.dim(kTop));
  // The transposed network swaps the roles of rows and columns.
  const bool transpose = row_cost(dv, dh, ly, lx) < row_cost(dh, dv, lx, ly);
  const Tensor at = transpose ? a.permuted({kTop, kRight, kBottom, kLeft}) : Tensor();
  const Tensor& t = transpose ? at : a;
  const std::size_t nx = transpose ? ly : lx;
  const std::size_t ny = transpose ? lx : ly;
  const double peak = transpose ? peak_elements(dv, dh, nx) : peak_elements(dh, dv, nx);
  if (peak > static_cast<double>(std::numeric_limits<std::size_t>::max()))
    throw Error(ErrorCategory::resource_guard, "torus: intermediate too large");
  check_elements(static_cast<std::size_t>(peak), "torus transfer matrix");

  const Tensor r = row_transfer(t, nx);
  const std::size_t d = static_cast<std::size_t>(std::llround(std::sqrt(double(r.size()))));
  std::vector<double> power(r.data().begin(), r.data().end());
  std::vector<double> scratch(power.size());
  for (std::size_t y = 1; y < ny; ++y) {
    kernels::gemm(power.data(), r.data().data(), scratch.data(), d, d, d);
    power.swap(scratch);
  }
  double z = 0.0;
  for (std::size_t i = 0; i < d; ++i) z += power[i * (d + 1)];
  return z;
}

}  // namespace tnrg
