#include "ipmkit/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ipmkit/errors.hpp"

namespace ipm {

namespace {

constexpr double kPivotRatioFloor = 1e-12;  // relative to the largest initial entry
constexpr double kDetFloor = 1e-12;
constexpr double kScaleEps = 1e-12;

bool collinear(Point2 a, Point2 b, Point2 c) {
    const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    const double ab = std::hypot(b.x - a.x, b.y - a.y);
    const double ac = std::hypot(c.x - a.x, c.y - a.y);
    return std::abs(cross) <= 1e-12 * std::max(1.0, ab * ac);
}

}  // namespace

bool has_collinear_triple(const std::array<Point2, 4>& pts) {
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                if (collinear(pts[i], pts[j], pts[k])) return true;
    return false;
}

Homography Homography::from_coefficients(const std::array<double, 9>& coeffs) {
    const double w = coeffs[8];
    double scale = 0.0;
    for (double v : coeffs) scale = std::max(scale, std::abs(v));
    if (std::abs(w) <= kScaleEps * std::max(1.0, scale))
        throw SingularMatrix("homography cannot be normalized: h33 is ~0");
    Homography H;
    for (int i = 0; i < 9; ++i) H.h[i] = coeffs[i] / w;
    H.h[8] = 1.0;
    return H;
}

Homography homography_from_correspondences(const Correspondences& c) {
    if (has_collinear_triple(c.src))
        throw DegenerateCorrespondences("three source points are collinear");
    if (has_collinear_triple(c.dst))
        throw DegenerateCorrespondences("three destination points are collinear");

    // Unknowns: h11 h12 h13 h21 h22 h23 h31 h32 (h33 fixed at 1).
    // Each pair (x,y) -> (u,v) gives two rows:
    //   x h11 + y h12 + h13 - u x h31 - u y h32 = u
    //   x h21 + y h22 + h23 - v x h31 - v y h32 = v
    double a[8][9] = {};
    for (int i = 0; i < 4; ++i) {
        const double x = c.src[i].x, y = c.src[i].y;
        const double u = c.dst[i].x, v = c.dst[i].y;
        double* r0 = a[2 * i];
        double* r1 = a[2 * i + 1];
        r0[0] = x; r0[1] = y; r0[2] = 1; r0[6] = -u * x; r0[7] = -u * y; r0[8] = u;
        r1[3] = x; r1[4] = y; r1[5] = 1; r1[6] = -v * x; r1[7] = -v * y; r1[8] = v;
    }

    double max_initial = 0.0;
    for (auto& row : a)
        for (int j = 0; j < 8; ++j) max_initial = std::max(max_initial, std::abs(row[j]));
    const double pivot_floor = kPivotRatioFloor * std::max(1.0, max_initial);

    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < 8; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 8; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < pivot_floor)
            throw DegenerateCorrespondences("singular 8x8 system (pivot underflow)");
        if (pivot != col)
            for (int j = 0; j <= 8; ++j) std::swap(a[pivot][j], a[col][j]);
        for (int r = col + 1; r < 8; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int j = col; j <= 8; ++j) a[r][j] -= f * a[col][j];
        }
    }

    std::array<double, 9> h{};
    h[8] = 1.0;
    for (int row = 7; row >= 0; --row) {
        double acc = a[row][8];
        for (int j = row + 1; j < 8; ++j) acc -= a[row][j] * h[j];
        h[row] = acc / a[row][row];
    }

    Homography H;
    H.h = h;
    return H;
}

Point2 apply_homography(const Homography& H, Point2 p) {
    const auto& h = H.h;
    const double s = h[6] * p.x + h[7] * p.y + h[8];
    if (std::abs(s) < kScaleEps)
        throw PointAtInfinity("point lies on the vanishing line (scale factor ~0)");
    return {(h[0] * p.x + h[1] * p.y + h[2]) / s,
            (h[3] * p.x + h[4] * p.y + h[5]) / s};
}

Homography invert_homography(const Homography& H) {
    const auto& h = H.h;
    const double det = h[0] * (h[4] * h[8] - h[5] * h[7]) -
                       h[1] * (h[3] * h[8] - h[5] * h[6]) +
                       h[2] * (h[3] * h[7] - h[4] * h[6]);
    if (std::abs(det) < kDetFloor)
        throw SingularMatrix("homography is not invertible (|det| below floor)");

    std::array<double, 9> adj = {
        h[4] * h[8] - h[5] * h[7], h[2] * h[7] - h[1] * h[8], h[1] * h[5] - h[2] * h[4],
        h[5] * h[6] - h[3] * h[8], h[0] * h[8] - h[2] * h[6], h[2] * h[3] - h[0] * h[5],
        h[3] * h[7] - h[4] * h[6], h[1] * h[6] - h[0] * h[7], h[0] * h[4] - h[1] * h[3],
    };
    return Homography::from_coefficients(adj);
}

Homography compose(const Homography& a, const Homography& b) {
    std::array<double, 9> m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += a.h[i * 3 + k] * b.h[k * 3 + j];
            m[i * 3 + j] = acc;
        }
    return Homography::from_coefficients(m);
}

std::string homography_to_string(const Homography& H) {
    std::string out;
    char buf[64];
    for (int i = 0; i < 9; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", H.h[i]);
        if (i) out += ' ';
        out += buf;
    }
    return out;
}

Homography homography_from_string(const std::string& text) {
    std::istringstream in(text);
    std::array<double, 9> coeffs{};
    for (int i = 0; i < 9; ++i)
        if (!(in >> coeffs[i]))
            throw ManifestError("homography text must contain 9 numbers");
    return Homography::from_coefficients(coeffs);
}

}  // namespace ipm
