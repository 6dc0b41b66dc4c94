#pragma once
// Tensor dump formats.
//
// Text:
//   tnrg-tensor 1
//   legs <rank>
//   <label> <dim>          (one line per leg)
//   <entry>                (one line per entry, linearization order,
//                           shortest round-trip decimal)
// Binary: the 8 bytes "TNRGBIN1", u64 rank, per leg (u64 label length,
// label bytes, u64 dim), then the entries as IEEE-754 doubles. All integers
// and doubles little-endian.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tnrg/tensor.hpp"

namespace tnrg {

/// Shortest decimal string that parses back to exactly x.
std::string shortest(double x);

void write_text(std::ostream& os, const Tensor& t);
Tensor read_text(std::istream& is);
void write_binary(std::ostream& os, const Tensor& t);
Tensor read_binary(std::istream& is);

/// Binary when the extension is ".bin", text otherwise.
void save_tensor(const std::filesystem::path& path, const Tensor& t);
/// Detects the format from the file contents.
Tensor load_tensor(const std::filesystem::path& path);

}  // namespace tnrg
