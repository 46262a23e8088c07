#pragma once

#include <stdexcept>

namespace ipm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Geometry
struct DegenerateCorrespondences : Error { using Error::Error; };
struct PointAtInfinity : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };

// Warp / raster
struct RoiOutOfBounds : Error { using Error::Error; };
struct ImageIoError : Error { using Error::Error; };

// Dataset / metrics
struct EmptyDataset : Error { using Error::Error; };
struct MissingConfidence : Error { using Error::Error; };
struct ManifestError : Error { using Error::Error; };

// Synth
struct BehindCamera : Error { using Error::Error; };

struct InvalidArgument : Error { using Error::Error; };

}  // namespace ipm
