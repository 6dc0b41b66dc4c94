#pragma once

#include <cstddef>

#include "tnrg/tensor.hpp"

namespace tnrg {

/// Full contraction of an Lx x Ly periodic network of copies of the four-leg
/// tensor A (right leg of site x joins the left leg of site x+1, top leg of
/// row y joins the bottom leg of row y+1). Built from a row transfer matrix R
/// as Tr(R^Ly), or the column equivalent when that is cheaper. Intermediates
/// larger than the resource guard raise resource_guard.
double torus_contract(const Tensor& a, std::size_t lx, std::size_t ly);

/// Row transfer matrix of a ring of lx tensors, as a (bottom..., top...)
/// tensor with 2*lx legs.
Tensor row_transfer(const Tensor& a, std::size_t lx);

}  // namespace tnrg
