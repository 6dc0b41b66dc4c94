#pragma once
// Dense real tensor with labelled legs.
//
// Storage is row-major over legs in their listed order: the last leg is the
// fastest-varying index. Four-leg lattice tensors list their legs as
// (right, top, left, bottom), so A(i, j, k, l) has i on the right leg, j on
// the top leg, k on the left leg and l on the bottom leg.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tnrg {

struct Leg {
  std::string label;
  std::size_t dim = 1;
  friend bool operator==(const Leg&, const Leg&) = default;
};

/// Positions of the legs of a four-leg lattice tensor.
enum LatticeLeg : std::size_t { kRight = 0, kTop = 1, kLeft = 2, kBottom = 3 };

class Tensor {
 public:
  /// Rank-0 tensor holding 0.
  Tensor();
  /// Zero tensor with the given legs.
  explicit Tensor(std::vector<Leg> legs);
  Tensor(std::vector<Leg> legs, std::vector<double> data);

  static Tensor scalar(double value);

  std::size_t rank() const noexcept { return legs_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  const std::vector<Leg>& legs() const noexcept { return legs_; }
  std::size_t dim(std::size_t leg) const { return legs_.at(leg).dim; }
  std::vector<std::size_t> dims() const;
  const std::string& label(std::size_t leg) const { return legs_.at(leg).label; }
  /// Index of the leg with this label; throws invalid_input if absent.
  std::size_t leg_index(std::string_view label) const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  std::vector<std::size_t> strides() const;
  std::size_t offset(std::span<const std::size_t> index) const;
  double operator()(std::initializer_list<std::size_t> index) const;
  double& operator()(std::initializer_list<std::size_t> index);
  double at(std::span<const std::size_t> index) const { return data_[offset(index)]; }
  double& at(std::span<const std::size_t> index) { return data_[offset(index)]; }

  /// Result leg n is this tensor's leg order[n].
  Tensor permuted(std::span<const std::size_t> order) const;
  Tensor permuted(std::initializer_list<std::size_t> order) const;
  /// Same data, new leg structure; total size must match.
  Tensor reshaped(std::vector<Leg> legs) const&;
  Tensor reshaped(std::vector<Leg> legs) &&;
  Tensor relabeled(std::vector<std::string> labels) const;

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double c) noexcept;
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(double c, Tensor a) { return a *= c; }
  friend Tensor operator*(Tensor a, double c) { return a *= c; }

  bool same_shape(const Tensor& other) const noexcept;
  /// Throws numerical if any entry is NaN or infinite.
  void check_finite(std::string_view context) const;

 private:
  std::vector<Leg> legs_;
  std::vector<double> data_;
};

/// Element count of a leg list, guarded against the resource limit.
std::size_t element_count(std::span<const Leg> legs);

/// Four-leg lattice tensor of zeros with (right, top, left, bottom) labels.
Tensor lattice_tensor(std::size_t right, std::size_t top, std::size_t left,
                      std::size_t bottom);
/// High-temperature fixed point: the single entry at the all-zero index is 1.
Tensor fixed_point(std::span<const std::size_t> dims);
Tensor fixed_point_lattice(std::size_t dh = 1, std::size_t dv = 1);

double hs_norm(const Tensor& t);
double hs_distance(const Tensor& a, const Tensor& b);

/// Divides by the all-zero entry. Throws degenerate_normalization when it is 0.
std::pair<Tensor, double> normalize(const Tensor& a);

/// HS distance from the fixed point embedded at the all-zero index.
double delta(const Tensor& a);
/// a minus the fixed-point embedding.
Tensor deviation(const Tensor& a);

/// Embeds a into a tensor with (elementwise) larger dims, zero padded.
Tensor embed(const Tensor& a, std::span<const std::size_t> dims);

/// Restricts every leg to the listed indices (kept in the given order).
Tensor select_indices(const Tensor& a,
                      const std::vector<std::vector<std::size_t>>& keep);

}  // namespace tnrg
