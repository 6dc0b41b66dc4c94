#include "tnrg/contract.hpp"

#include <numeric>
#include <string>
#include <vector>

#include "tnrg/errors.hpp"
#include "tnrg/kernels.hpp"

namespace tnrg {
namespace {

bool is_identity(const std::vector<std::size_t>& order) {
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] != i) return false;
  return true;
}

// Permutes only when needed; `storage` keeps the permuted copy alive.
const Tensor& arrange(const Tensor& t, const std::vector<std::size_t>& order, Tensor& storage) {
  if (is_identity(order)) return t;
  storage = t.permuted(order);
  return storage;
}

void validate_pairs(const Tensor& a, const Tensor& b, std::span<const LegPair> pairs,
                    std::vector<bool>& used_a, std::vector<bool>& used_b) {
  used_a.assign(a.rank(), false);
  used_b.assign(b.rank(), false);
  for (const auto& p : pairs) {
    if (p.a >= a.rank() || p.b >= b.rank())
      throw Error(ErrorCategory::invalid_input, "contract: leg index out of range");
    if (used_a[p.a] || used_b[p.b])
      throw Error(ErrorCategory::invalid_input, "contract: leg paired twice");
    if (a.dim(p.a) != b.dim(p.b))
      throw Error(ErrorCategory::invalid_input,
                  "contract: dimension mismatch on legs '" + a.label(p.a) + "' (" +
                      std::to_string(a.dim(p.a)) + ") and '" + b.label(p.b) + "' (" +
                      std::to_string(b.dim(p.b)) + ")");
    used_a[p.a] = used_b[p.b] = true;
  }
}

}  // namespace

Tensor contract(const Tensor& a, const Tensor& b, std::span<const LegPair> pairs) {
  std::vector<bool> used_a, used_b;
  validate_pairs(a, b, pairs, used_a, used_b);

  std::vector<std::size_t> order_a, order_b;
  std::vector<Leg> out_legs;
  std::size_t m = 1, n = 1, k = 1;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (!used_a[i]) {
      order_a.push_back(i);
      out_legs.push_back(a.legs()[i]);
      m *= a.dim(i);
    }
  for (const auto& p : pairs) {
    order_a.push_back(p.a);
    order_b.push_back(p.b);
    k *= a.dim(p.a);
  }
  for (std::size_t i = 0; i < b.rank(); ++i)
    if (!used_b[i]) {
      order_b.push_back(i);
      out_legs.push_back(b.legs()[i]);
      n *= b.dim(i);
    }
  check_elements(m * n, "contraction result");

  Tensor sa, sb;
  const Tensor& pa = arrange(a, order_a, sa);
  const Tensor& pb = arrange(b, order_b, sb);
  Tensor out(std::move(out_legs));
  kernels::gemm(pa.data().data(), pb.data().data(), out.data().data(), m, n, k);
  return out;
}

Tensor contract(const Tensor& a, const Tensor& b, std::initializer_list<LegPair> pairs) {
  return contract(a, b, std::span<const LegPair>(pairs.begin(), pairs.size()));
}

Tensor outer(const Tensor& a, const Tensor& b) { return contract(a, b, std::span<const LegPair>{}); }

Tensor trace(const Tensor& t, std::span<const LegPair> pairs) {
  std::vector<bool> used(t.rank(), false);
  std::vector<std::size_t> order;
  std::vector<Leg> out_legs;
  for (const auto& p : pairs) {
    if (p.a >= t.rank() || p.b >= t.rank() || p.a == p.b || used[p.a] || used[p.b])
      throw Error(ErrorCategory::invalid_input, "trace: invalid leg pair");
    if (t.dim(p.a) != t.dim(p.b))
      throw Error(ErrorCategory::invalid_input, "trace: dimension mismatch");
    used[p.a] = used[p.b] = true;
  }
  std::size_t outer_size = 1;
  for (std::size_t i = 0; i < t.rank(); ++i)
    if (!used[i]) {
      order.push_back(i);
      out_legs.push_back(t.legs()[i]);
      outer_size *= t.dim(i);
    }
  for (const auto& p : pairs) order.push_back(p.a);
  for (const auto& p : pairs) order.push_back(p.b);
  Tensor storage;
  const Tensor& pt = arrange(t, order, storage);

  std::size_t k = 1;
  for (const auto& p : pairs) k *= t.dim(p.a);
  Tensor out(std::move(out_legs));
  auto src = pt.data();
  auto dst = out.data();
  // The diagonal of the trailing (k x k) block is at stride k + 1.
  for (std::size_t o = 0; o < outer_size; ++o) {
    const double* block = src.data() + o * k * k;
    double s = 0.0;
    for (std::size_t q = 0; q < k; ++q) s += block[q * (k + 1)];
    dst[o] = s;
  }
  return out;
}

Tensor apply_leg_op(const Tensor& t, std::size_t leg, const Matrix& m, Side side) {
  if (leg >= t.rank()) throw Error(ErrorCategory::invalid_input, "apply_leg_op: leg out of range");
  const auto d = static_cast<Eigen::Index>(t.dim(leg));
  if (m.rows() != d || m.cols() != d)
    throw Error(ErrorCategory::invalid_input, "apply_leg_op: matrix does not match leg '" +
                                                  t.label(leg) + "' of dim " + std::to_string(d));
  std::vector<std::size_t> to_last;
  for (std::size_t i = 0; i < t.rank(); ++i)
    if (i != leg) to_last.push_back(i);
  to_last.push_back(leg);

  Tensor storage;
  const Tensor& moved = arrange(t, to_last, storage);
  const Matrix op = side == Side::post ? m : Matrix(m.transpose());
  Tensor out(moved.legs());
  const std::size_t rows = t.size() / t.dim(leg);
  kernels::gemm(moved.data().data(), op.data(), out.data().data(), rows, t.dim(leg), t.dim(leg));

  std::vector<std::size_t> back(t.rank());
  for (std::size_t i = 0; i < to_last.size(); ++i) back[to_last[i]] = i;
  Tensor tmp;
  const Tensor& restored = arrange(out, back, tmp);
  return &restored == &out ? out : tmp;
}

}  // namespace tnrg
