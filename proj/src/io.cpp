#include "xlris/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace xlris {

namespace {

constexpr char kMagic[4] = {'X', 'L', 'R', 'C'};
constexpr std::uint32_t kVersion = 1;

// The build targets little-endian hosts; raw f64 writes are the wire format.
template <typename T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("truncated container");
  return value;
}

}  // namespace

void save_container(const std::string& path, const MatrixContainer& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(kMagic, 4);
  write_pod(out, kVersion);
  write_pod(out, std::uint32_t(entries.size()));
  for (const auto& [name, mat] : entries) {
    write_pod(out, std::uint32_t(name.size()));
    out.write(name.data(), std::streamsize(name.size()));
    write_pod(out, std::uint64_t(mat.rows()));
    write_pod(out, std::uint64_t(mat.cols()));
    for (std::int64_t j = 0; j < mat.cols(); ++j)
      for (std::int64_t i = 0; i < mat.rows(); ++i) {
        write_pod(out, mat(i, j).real());
        write_pod(out, mat(i, j).imag());
      }
  }
  if (!out) throw std::runtime_error("write failure: " + path);
}

MatrixContainer load_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("bad container magic: " + path);
  if (read_pod<std::uint32_t>(in) != kVersion)
    throw std::runtime_error("unsupported container version: " + path);
  const auto count = read_pod<std::uint32_t>(in);
  MatrixContainer entries;
  for (std::uint32_t e = 0; e < count; ++e) {
    const auto name_len = read_pod<std::uint32_t>(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const auto rows = read_pod<std::uint64_t>(in);
    const auto cols = read_pod<std::uint64_t>(in);
    CMatrix mat(static_cast<std::int64_t>(rows),
                static_cast<std::int64_t>(cols));
    for (std::uint64_t j = 0; j < cols; ++j)
      for (std::uint64_t i = 0; i < rows; ++i) {
        const double re = read_pod<double>(in);
        const double im = read_pod<double>(in);
        mat(std::int64_t(i), std::int64_t(j)) = cplx(re, im);
      }
    entries.emplace(std::move(name), std::move(mat));
  }
  return entries;
}

void put_scalar(MatrixContainer& c, const std::string& name, double value) {
  CMatrix m(1, 1);
  m(0, 0) = value;
  c[name] = m;
}

double get_scalar(const MatrixContainer& c, const std::string& name) {
  auto it = c.find(name);
  if (it == c.end()) throw std::runtime_error("missing entry: " + name);
  return it->second(0, 0).real();
}

}  // namespace xlris
