#pragma once

#include <array>
#include <string>

namespace ipm {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Plane-to-plane projective map. Coefficients are row-major and kept
/// normalized so that h[8] (h33) is exactly 1.
struct Homography {
    std::array<double, 9> h{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double operator()(int row, int col) const { return h[row * 3 + col]; }

    static Homography identity() { return {}; }

    /// Builds a homography from raw coefficients, renormalizing so h33 == 1.
    /// Throws SingularMatrix when h33 is too close to zero to normalize.
    static Homography from_coefficients(const std::array<double, 9>& coeffs);
};

/// Four point pairs, ordered near-left, near-right, far-right, far-left.
struct Correspondences {
    std::array<Point2, 4> src;
    std::array<Point2, 4> dst;
};

/// Estimates the homography mapping src[i] -> dst[i] by solving the exact
/// 8x8 linear system with partial pivoting. Throws DegenerateCorrespondences
/// when three points of either set are collinear or the system is singular.
Homography homography_from_correspondences(const Correspondences& c);

/// Applies H to p: (x', y') = ((h11 x + h12 y + h13)/S, (h21 x + h22 y + h23)/S)
/// with S = h31 x + h32 y + h33. Throws PointAtInfinity when |S| < 1e-12.
Point2 apply_homography(const Homography& H, Point2 p);

/// Inverse map, renormalized to h33 == 1. Throws SingularMatrix.
Homography invert_homography(const Homography& H);

/// Composition: apply_homography(compose(a, b), p) == a(b(p)).
Homography compose(const Homography& a, const Homography& b);

/// True when any three of the four points are (numerically) collinear.
bool has_collinear_triple(const std::array<Point2, 4>& pts);

/// Serialization used by manifests and calibration files: 9 decimal numbers,
/// row-major, space-separated. Reading renormalizes h33 to 1.
std::string homography_to_string(const Homography& H);
Homography homography_from_string(const std::string& text);

}  // namespace ipm
