#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace topomap {

/// Integer cell coordinate, (i = row, j = column).
struct CellPoint {
    int i = 0;
    int j = 0;
    friend bool operator==(const CellPoint&, const CellPoint&) = default;
    friend auto operator<=>(const CellPoint&, const CellPoint&) = default;
};

/// Continuous point in grid coordinates (same axes as CellPoint).
struct Vec2 {
    double i = 0.0;
    double j = 0.0;

    Vec2 operator+(Vec2 o) const { return {i + o.i, j + o.j}; }
    Vec2 operator-(Vec2 o) const { return {i - o.i, j - o.j}; }
    Vec2 operator*(double s) const { return {i * s, j * s}; }
    double dot(Vec2 o) const { return i * o.i + j * o.j; }
    double cross(Vec2 o) const { return i * o.j - j * o.i; }
    double norm() const { return std::sqrt(i * i + j * j); }

    static Vec2 of(CellPoint p) { return {double(p.i), double(p.j)}; }
};

inline CellPoint round_cell(Vec2 p) {
    return {int(std::lround(p.i)), int(std::lround(p.j))};
}

inline double distance(CellPoint a, CellPoint b) {
    double di = a.i - b.i, dj = a.j - b.j;
    return std::sqrt(di * di + dj * dj);
}

/// 2x2 linear map plus translation; maps (i, j) grid coordinates.
struct Affine {
    double m00 = 1.0, m01 = 0.0;
    double m10 = 0.0, m11 = 1.0;
    double ti = 0.0, tj = 0.0;

    Vec2 apply(Vec2 p) const {
        return {m00 * p.i + m01 * p.j + ti, m10 * p.i + m11 * p.j + tj};
    }
    Vec2 apply_linear(Vec2 v) const {
        return {m00 * v.i + m01 * v.j, m10 * v.i + m11 * v.j};
    }

    Affine inverse() const;

    /// Rotation by `angle` taking `center_src` to `center_dst`.
    static Affine rotation(double angle, Vec2 center_src, Vec2 center_dst);
};

/// Every cell touched by the segment between two cell centers. When the
/// segment passes exactly through a lattice corner both adjacent cells are
/// included, so the result separates the plane on either side of the line.
std::vector<CellPoint> supercover_line(CellPoint a, CellPoint b);

/// Lattice points lying exactly on the segment a-b (gcd stepping).
std::vector<CellPoint> lattice_points_on_segment(CellPoint a, CellPoint b);

/// Exact test: does lattice point p lie on segment a-b?
bool on_segment(CellPoint p, CellPoint a, CellPoint b);

/// Exact even-odd containment for a lattice point in a lattice polygon.
/// Points on the boundary count as inside.
bool point_in_polygon(CellPoint p, std::span<const CellPoint> poly);

/// Signed area (shoelace, image coordinates) and vertex-weighted centroid
/// fallback for degenerate polygons.
struct PolygonStats {
    double area = 0.0;
    Vec2 centroid;
};
PolygonStats polygon_stats(std::span<const Vec2> poly);

double polyline_length(std::span<const CellPoint> pts);

}  // namespace topomap

template <>
struct std::hash<topomap::CellPoint> {
    size_t operator()(const topomap::CellPoint& p) const noexcept {
        return std::hash<uint64_t>()((uint64_t(uint32_t(p.i)) << 32) | uint32_t(p.j));
    }
};
