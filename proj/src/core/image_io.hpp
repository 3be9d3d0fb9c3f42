#ifndef DUNEDRIFT_CORE_IMAGE_IO_HPP
#define DUNEDRIFT_CORE_IMAGE_IO_HPP

#include <string>

#include "core/raster.hpp"

namespace dunedrift {

// Reads PGM (P2/P5, maxval 255) or 8-bit PNG (grayscale or RGB; palette and
// alpha variants are expanded/stripped). RGB converts to luminance with
// 0.2126 R + 0.7152 G + 0.0722 B. 16-bit inputs are rejected.
// The format is detected from the file's magic bytes, not its extension.
Raster load_image(const std::string& path);

// The extension selects the format: .pgm writes binary P5, .png writes
// 8-bit grayscale PNG.
void save_image(const Raster& r, const std::string& path);

}  // namespace dunedrift

#endif
