#include "tnrg/tensor_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tnrg/errors.hpp"

namespace tnrg {
namespace {

constexpr char kMagic[8] = {'T', 'N', 'R', 'G', 'B', 'I', 'N', '1'};
constexpr std::string_view kTextHeader = "tnrg-tensor 1";

static_assert(std::endian::native == std::endian::little, "binary format assumes little-endian");

void put_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }

std::uint64_t get_u64(std::istream& is) {
  std::uint64_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), 8))
    throw Error(ErrorCategory::invalid_input, "tensor dump: truncated binary header");
  return v;
}

Error parse_error(std::size_t line, const std::string& what) {
  return Error(ErrorCategory::invalid_input, "tensor dump line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string shortest(double x) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_text(std::ostream& os, const Tensor& t) {
  os << kTextHeader << '\n' << "legs " << t.rank() << '\n';
  for (const auto& leg : t.legs()) os << (leg.label.empty() ? "-" : leg.label) << ' ' << leg.dim << '\n';
  for (double v : t.data()) os << shortest(v) << '\n';
}

Tensor read_text(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> std::string& {
    ++line_no;
    if (!std::getline(is, line)) throw parse_error(line_no, "unexpected end of file");
    return line;
  };
  if (next() != kTextHeader) throw parse_error(line_no, "missing 'tnrg-tensor 1' header");
  std::size_t rank = 0;
  {
    std::istringstream ss(next());
    std::string key;
    if (!(ss >> key >> rank) || key != "legs") throw parse_error(line_no, "expected 'legs <rank>'");
  }
  std::vector<Leg> legs;
  for (std::size_t i = 0; i < rank; ++i) {
    std::istringstream ss(next());
    Leg leg;
    if (!(ss >> leg.label >> leg.dim) || leg.dim == 0) throw parse_error(line_no, "expected '<label> <dim>'");
    if (leg.label == "-") leg.label.clear();
    legs.push_back(std::move(leg));
  }
  const std::size_t n = element_count(legs);
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& s = next();
    auto res = std::from_chars(s.data(), s.data() + s.size(), data[i]);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw parse_error(line_no, "bad number '" + s + "'");
  }
  return Tensor(std::move(legs), std::move(data));
}

void write_binary(std::ostream& os, const Tensor& t) {
  os.write(kMagic, sizeof kMagic);
  put_u64(os, t.rank());
  for (const auto& leg : t.legs()) {
    put_u64(os, leg.label.size());
    os.write(leg.label.data(), static_cast<std::streamsize>(leg.label.size()));
    put_u64(os, leg.dim);
  }
  os.write(reinterpret_cast<const char*>(t.data().data()),
           static_cast<std::streamsize>(t.size() * sizeof(double)));
}

Tensor read_binary(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    throw Error(ErrorCategory::invalid_input, "tensor dump: bad binary magic");
  const std::uint64_t rank = get_u64(is);
  if (rank > 64) throw Error(ErrorCategory::invalid_input, "tensor dump: implausible rank");
  std::vector<Leg> legs;
  for (std::uint64_t i = 0; i < rank; ++i) {
    const std::uint64_t len = get_u64(is);
    if (len > 4096) throw Error(ErrorCategory::invalid_input, "tensor dump: implausible label");
    Leg leg;
    leg.label.resize(len);
    if (!is.read(leg.label.data(), static_cast<std::streamsize>(len)))
      throw Error(ErrorCategory::invalid_input, "tensor dump: truncated label");
    leg.dim = get_u64(is);
    legs.push_back(std::move(leg));
  }
  std::vector<double> data(element_count(legs));
  if (!is.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double))))
    throw Error(ErrorCategory::invalid_input, "tensor dump: truncated data");
  Tensor t(std::move(legs), std::move(data));
  t.check_finite("tensor dump");
  return t;
}

void save_tensor(const std::filesystem::path& path, const Tensor& t) {
  const bool binary = path.extension() == ".bin";
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw Error(ErrorCategory::invalid_input, "cannot write " + path.string());
  binary ? write_binary(os, t) : write_text(os, t);
  if (!os) throw Error(ErrorCategory::invalid_input, "write failed for " + path.string());
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCategory::invalid_input, "cannot open " + path.string());
  char head[8] = {};
  is.read(head, 8);
  is.clear();
  is.seekg(0);
  if (std::memcmp(head, kMagic, 8) == 0) return read_binary(is);
  Tensor t = read_text(is);
  t.check_finite("tensor dump");
  return t;
}

}  // namespace tnrg
