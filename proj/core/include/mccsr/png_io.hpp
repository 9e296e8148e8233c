#ifndef MCCSR_PNG_IO_HPP
#define MCCSR_PNG_IO_HPP

#include <string>

#include "mccsr/image.hpp"

namespace mccsr {

/// Reads any PNG as 8-bit RGB (palette/gray/alpha converted).
PlanarImage read_png(const std::string& path);

/// Writes 8-bit RGB; samples are clamped to [0,255] and rounded on export.
void write_png(const std::string& path, const PlanarImage& img);

}  // namespace mccsr

#endif
