#ifndef XLRIS_IO_HPP
#define XLRIS_IO_HPP

#include <map>
#include <string>

#include "xlris/types.hpp"

namespace xlris {

/// Named complex-matrix container: magic "XLRC", u32 version, u32 entry
/// count, then per entry a length-prefixed name, u64 rows, u64 cols and the
/// column-major payload as interleaved real/imag little-endian f64.
/// Entries are written in name order so identical content gives identical
/// bytes.
using MatrixContainer = std::map<std::string, CMatrix>;

void save_container(const std::string& path, const MatrixContainer& entries);
MatrixContainer load_container(const std::string& path);

/// Convenience for scalar metadata stored as 1x1 entries.
void put_scalar(MatrixContainer& c, const std::string& name, double value);
double get_scalar(const MatrixContainer& c, const std::string& name);

}  // namespace xlris

#endif
