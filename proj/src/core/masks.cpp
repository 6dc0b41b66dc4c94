#include "tnrg/masks.hpp"

#include <cmath>

#include "tnrg/errors.hpp"

namespace tnrg {

bool matches(const IndexMask& mask, std::span<const std::size_t> index) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] == Pattern::zero && index[i] != 0) return false;
    if (mask[i] == Pattern::nonzero && index[i] == 0) return false;
  }
  return true;
}

Tensor masked(const Tensor& t, std::span<const IndexMask> masks) {
  for (const auto& m : masks)
    if (m.size() != t.rank())
      throw Error(ErrorCategory::invalid_input, "mask length does not match the tensor rank");
  Tensor out(t.legs());
  auto src = t.data();
  auto dst = out.data();
  const auto dims = t.dims();
  std::vector<std::size_t> idx(t.rank(), 0);
  for (std::size_t off = 0; off < src.size(); ++off) {
    for (const auto& m : masks)
      if (matches(m, idx)) {
        dst[off] = src[off];
        break;
      }
    for (std::size_t n = t.rank(); n-- > 0;) {
      if (++idx[n] < dims[n]) break;
      idx[n] = 0;
    }
  }
  return out;
}

Tensor masked(const Tensor& t, const IndexMask& mask) {
  return masked(t, std::span<const IndexMask>(&mask, 1));
}

double pattern_norm(const Tensor& t, std::span<const IndexMask> masks) {
  return hs_norm(masked(t, masks));
}

double pattern_norm(const Tensor& t, const IndexMask& mask) {
  return pattern_norm(t, std::span<const IndexMask>(&mask, 1));
}

namespace masks {

std::vector<IndexMask> single_leg() {
  return {{NZ, Z, Z, Z}, {Z, NZ, Z, Z}, {Z, Z, NZ, Z}, {Z, Z, Z, NZ}};
}

std::vector<IndexMask> corners() {
  return {{NZ, NZ, Z, Z}, {Z, NZ, NZ, Z}, {Z, Z, NZ, NZ}, {NZ, Z, Z, NZ}};
}

}  // namespace masks
}  // namespace tnrg
