#pragma once

#include <string>

#include "ipmkit/raster.hpp"

namespace ipm {

/// Reads a PNG (.png), binary PGM (.pgm) or binary PPM (.ppm) image.
/// PNG palette/alpha/16-bit inputs are converted to 8-bit gray or RGB.
/// Throws ImageIoError naming the file on failure.
Raster read_image(const std::string& path);

/// Writes by extension: .png, .pgm (1 channel) or .ppm (3 channels).
void write_image(const std::string& path, const Raster& img);

}  // namespace ipm
