#include "tnrg/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "tnrg/errors.hpp"
#include "tnrg/kernels.hpp"

namespace tnrg {

std::size_t element_count(std::span<const Leg> legs) {
  std::size_t n = 1;
  for (const auto& leg : legs) {
    if (leg.dim == 0)
      throw Error(ErrorCategory::invalid_input, "leg '" + leg.label + "' has dimension 0");
    if (n > max_elements() / leg.dim + 1) {
      check_elements(max_elements() + 1, "tensor");
    }
    n *= leg.dim;
  }
  check_elements(n, "tensor");
  return n;
}

Tensor::Tensor() : data_(1, 0.0) {}

Tensor::Tensor(std::vector<Leg> legs) : legs_(std::move(legs)) {
  data_.assign(element_count(legs_), 0.0);
}

Tensor::Tensor(std::vector<Leg> legs, std::vector<double> data)
    : legs_(std::move(legs)), data_(std::move(data)) {
  if (data_.size() != element_count(legs_))
    throw Error(ErrorCategory::invalid_input, "tensor data size does not match leg dims");
}

Tensor Tensor::scalar(double value) {
  Tensor t;
  t.data_[0] = value;
  return t;
}

std::vector<std::size_t> Tensor::dims() const {
  std::vector<std::size_t> d(legs_.size());
  for (std::size_t i = 0; i < legs_.size(); ++i) d[i] = legs_[i].dim;
  return d;
}

std::size_t Tensor::leg_index(std::string_view label) const {
  for (std::size_t i = 0; i < legs_.size(); ++i)
    if (legs_[i].label == label) return i;
  throw Error(ErrorCategory::invalid_input, "no leg labelled '" + std::string(label) + "'");
}

std::vector<std::size_t> Tensor::strides() const {
  std::vector<std::size_t> s(legs_.size(), 1);
  for (std::size_t i = legs_.size(); i-- > 1;) s[i - 1] = s[i] * legs_[i].dim;
  return s;
}

std::size_t Tensor::offset(std::span<const std::size_t> index) const {
  if (index.size() != legs_.size())
    throw Error(ErrorCategory::invalid_input, "index rank does not match tensor rank");
  std::size_t off = 0;
  for (std::size_t i = 0; i < legs_.size(); ++i) {
    if (index[i] >= legs_[i].dim)
      throw Error(ErrorCategory::invalid_input, "index out of range on leg '" + legs_[i].label + "'");
    off = off * legs_[i].dim + index[i];
  }
  return off;
}

double Tensor::operator()(std::initializer_list<std::size_t> index) const {
  return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
}

double& Tensor::operator()(std::initializer_list<std::size_t> index) {
  return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
}

Tensor Tensor::permuted(std::initializer_list<std::size_t> order) const {
  return permuted(std::span<const std::size_t>(order.begin(), order.size()));
}

Tensor Tensor::permuted(std::span<const std::size_t> order) const {
  const std::size_t r = rank();
  if (order.size() != r)
    throw Error(ErrorCategory::invalid_input, "permutation rank mismatch");
  std::vector<bool> seen(r, false);
  for (auto o : order) {
    if (o >= r || seen[o]) throw Error(ErrorCategory::invalid_input, "invalid permutation");
    seen[o] = true;
  }
  bool identity = true;
  for (std::size_t i = 0; i < r; ++i) identity = identity && order[i] == i;
  if (identity) return *this;

  std::vector<Leg> out_legs(r);
  for (std::size_t i = 0; i < r; ++i) out_legs[i] = legs_[order[i]];
  Tensor out(std::move(out_legs));

  const auto src_strides = strides();
  std::vector<std::size_t> stride(r), dim(r);
  for (std::size_t i = 0; i < r; ++i) {
    stride[i] = src_strides[order[i]];
    dim[i] = legs_[order[i]].dim;
  }
  const std::size_t inner_dim = dim[r - 1];
  const std::size_t inner_stride = stride[r - 1];
  std::vector<std::size_t> idx(r, 0);
  std::size_t src = 0;
  double* dst = out.data_.data();
  const double* base = data_.data();
  const std::size_t outer = out.data_.size() / inner_dim;
  for (std::size_t block = 0; block < outer; ++block) {
    const double* s = base + src;
    for (std::size_t j = 0; j < inner_dim; ++j) dst[j] = s[j * inner_stride];
    dst += inner_dim;
    for (std::size_t ax = r - 1; ax-- > 0;) {
      if (++idx[ax] < dim[ax]) {
        src += stride[ax];
        break;
      }
      src -= stride[ax] * (dim[ax] - 1);
      idx[ax] = 0;
    }
  }
  return out;
}

Tensor Tensor::reshaped(std::vector<Leg> legs) const& {
  return Tensor(std::move(legs), data_);
}

Tensor Tensor::reshaped(std::vector<Leg> legs) && {
  return Tensor(std::move(legs), std::move(data_));
}

Tensor Tensor::relabeled(std::vector<std::string> labels) const {
  if (labels.size() != rank())
    throw Error(ErrorCategory::invalid_input, "relabel count mismatch");
  Tensor t = *this;
  for (std::size_t i = 0; i < rank(); ++i) t.legs_[i].label = std::move(labels[i]);
  return t;
}

bool Tensor::same_shape(const Tensor& other) const noexcept {
  if (rank() != other.rank()) return false;
  for (std::size_t i = 0; i < rank(); ++i)
    if (legs_[i].dim != other.legs_[i].dim) return false;
  return true;
}

Tensor& Tensor::operator+=(const Tensor& other) {
  if (!same_shape(other)) throw Error(ErrorCategory::invalid_input, "shape mismatch in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  if (!same_shape(other)) throw Error(ErrorCategory::invalid_input, "shape mismatch in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(double c) noexcept {
  for (auto& x : data_) x *= c;
  return *this;
}

void Tensor::check_finite(std::string_view context) const {
  for (double x : data_)
    if (!std::isfinite(x))
      throw Error(ErrorCategory::numerical, std::string(context) + ": non-finite tensor entry");
}

Tensor lattice_tensor(std::size_t right, std::size_t top, std::size_t left,
                      std::size_t bottom) {
  return Tensor({{"right", right}, {"top", top}, {"left", left}, {"bottom", bottom}});
}

Tensor fixed_point(std::span<const std::size_t> dims) {
  std::vector<Leg> legs;
  for (std::size_t i = 0; i < dims.size(); ++i)
    legs.push_back({dims.size() == 4 ? std::string(std::array{"right", "top", "left", "bottom"}[i])
                                     : "leg" + std::to_string(i),
                    dims[i]});
  Tensor t(std::move(legs));
  t.data()[0] = 1.0;
  return t;
}

Tensor fixed_point_lattice(std::size_t dh, std::size_t dv) {
  Tensor t = lattice_tensor(dh, dv, dh, dv);
  t.data()[0] = 1.0;
  return t;
}

double hs_norm(const Tensor& t) {
  return std::sqrt(kernels::sum_squares(t.data().data(), t.size()));
}

double hs_distance(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) throw Error(ErrorCategory::invalid_input, "shape mismatch in hs_distance");
  double s[4] = {0, 0, 0, 0};
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s[i & 3] = std::fma(d, d, s[i & 3]);
  }
  return std::sqrt((s[0] + s[1]) + (s[2] + s[3]));
}

std::pair<Tensor, double> normalize(const Tensor& a) {
  const double n = a.data()[0];
  if (n == 0.0 || !std::isfinite(n))
    throw Error(ErrorCategory::degenerate_normalization,
                "cannot normalize: all-zero entry is " + std::to_string(n));
  Tensor out = a;
  out *= 1.0 / n;
  out.data()[0] = 1.0;
  return {std::move(out), n};
}

double delta(const Tensor& a) {
  const auto d = a.data();
  const double rest = kernels::sum_squares(d.data() + 1, d.size() - 1);
  const double e0 = d[0] - 1.0;
  return std::sqrt(rest + e0 * e0);
}

Tensor deviation(const Tensor& a) {
  Tensor d = a;
  d.data()[0] -= 1.0;
  return d;
}

Tensor embed(const Tensor& a, std::span<const std::size_t> dims) {
  if (dims.size() != a.rank()) throw Error(ErrorCategory::invalid_input, "embed rank mismatch");
  std::vector<Leg> legs = a.legs();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < legs[i].dim) throw Error(ErrorCategory::invalid_input, "embed target smaller than source");
    legs[i].dim = dims[i];
  }
  Tensor out(std::move(legs));
  std::vector<std::size_t> idx(a.rank(), 0);
  const auto src = a.data();
  for (std::size_t n = 0; n < a.size(); ++n) {
    out.at(idx) = src[n];
    for (std::size_t ax = a.rank(); ax-- > 0;) {
      if (++idx[ax] < a.dim(ax)) break;
      idx[ax] = 0;
    }
  }
  return out;
}

Tensor select_indices(const Tensor& a, const std::vector<std::vector<std::size_t>>& keep) {
  if (keep.size() != a.rank()) throw Error(ErrorCategory::invalid_input, "select rank mismatch");
  std::vector<Leg> legs = a.legs();
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (keep[i].empty()) throw Error(ErrorCategory::invalid_input, "select keeps no index");
    for (auto k : keep[i])
      if (k >= legs[i].dim) throw Error(ErrorCategory::invalid_input, "select index out of range");
    legs[i].dim = keep[i].size();
  }
  Tensor out(std::move(legs));
  std::vector<std::size_t> idx(a.rank(), 0), src(a.rank());
  for (std::size_t n = 0; n < out.size(); ++n) {
    for (std::size_t ax = 0; ax < a.rank(); ++ax) src[ax] = keep[ax][idx[ax]];
    out.data()[n] = a.at(src);
    for (std::size_t ax = a.rank(); ax-- > 0;) {
      if (++idx[ax] < out.dim(ax)) break;
      idx[ax] = 0;
    }
  }
  return out;
}

}  // namespace tnrg
