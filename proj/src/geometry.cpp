#include "topomap/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace topomap {

Affine Affine::inverse() const {
    double det = m00 * m11 - m01 * m10;
    Affine inv;
    inv.m00 = m11 / det;
    inv.m01 = -m01 / det;
    inv.m10 = -m10 / det;
    inv.m11 = m00 / det;
    inv.ti = -(inv.m00 * ti + inv.m01 * tj);
    inv.tj = -(inv.m10 * ti + inv.m11 * tj);
    return inv;
}

Affine Affine::rotation(double angle, Vec2 center_src, Vec2 center_dst) {
    double c = std::cos(angle), s = std::sin(angle);
    Affine t;
    t.m00 = c;
    t.m01 = -s;
    t.m10 = s;
    t.m11 = c;
    Vec2 rc = t.apply_linear(center_src);
    t.ti = center_dst.i - rc.i;
    t.tj = center_dst.j - rc.j;
    return t;
}

std::vector<CellPoint> supercover_line(CellPoint a, CellPoint b) {
    std::vector<CellPoint> out;
    int i = a.i, j = a.j;
    int di = b.i - a.i, dj = b.j - a.j;
    int si = (di > 0) - (di < 0);
    int sj = (dj > 0) - (dj < 0);
    int ai = std::abs(di), aj = std::abs(dj);
    out.push_back({i, j});

    // Dedu-style supercover: when the line crosses a lattice corner exactly,
    // both corner-adjacent cells are emitted.
    if (aj >= ai) {
        int error = aj;
        int errorprev = aj;
        int ddj = 2 * aj, ddi = 2 * ai;
        for (int k = 0; k < aj; ++k) {
            j += sj;
            error += ddi;
            if (error > ddj) {
                i += si;
                error -= ddj;
                if (error + errorprev < ddj) {
                    out.push_back({i - si, j});
                } else if (error + errorprev > ddj) {
                    out.push_back({i, j - sj});
                } else {
                    out.push_back({i - si, j});
                    out.push_back({i, j - sj});
                }
            }
            out.push_back({i, j});
            errorprev = error;
        }
    } else {
        int error = ai;
        int errorprev = ai;
        int ddi = 2 * ai, ddj = 2 * aj;
        for (int k = 0; k < ai; ++k) {
            i += si;
            error += ddj;
            if (error > ddi) {
                j += sj;
                error -= ddi;
                if (error + errorprev < ddi) {
                    out.push_back({i, j - sj});
                } else if (error + errorprev > ddi) {
                    out.push_back({i - si, j});
                } else {
                    out.push_back({i, j - sj});
                    out.push_back({i - si, j});
                }
            }
            out.push_back({i, j});
            errorprev = error;
        }
    }
    return out;
}

std::vector<CellPoint> lattice_points_on_segment(CellPoint a, CellPoint b) {
    int di = b.i - a.i, dj = b.j - a.j;
    int g = std::gcd(std::abs(di), std::abs(dj));
    std::vector<CellPoint> out;
    if (g == 0) {
        out.push_back(a);
        return out;
    }
    int si = di / g, sj = dj / g;
    for (int k = 0; k <= g; ++k) out.push_back({a.i + k * si, a.j + k * sj});
    return out;
}

bool on_segment(CellPoint p, CellPoint a, CellPoint b) {
    if (a == b) return p == a;
    long long cross = (long long)(b.i - a.i) * (p.j - a.j) - (long long)(b.j - a.j) * (p.i - a.i);
    if (cross != 0) return false;
    long long dot = (long long)(p.i - a.i) * (b.i - a.i) + (long long)(p.j - a.j) * (b.j - a.j);
    long long len2 = (long long)(b.i - a.i) * (b.i - a.i) + (long long)(b.j - a.j) * (b.j - a.j);
    return dot >= 0 && dot <= len2;
}

bool point_in_polygon(CellPoint p, std::span<const CellPoint> poly) {
    size_t n = poly.size();
    for (size_t k = 0; k < n; ++k) {
        if (on_segment(p, poly[k], poly[(k + 1) % n])) return true;
    }
    // Even-odd ray cast along +j with the half-open vertex rule, exact
    // rational comparisons.
    bool inside = false;
    for (size_t k = 0; k < n; ++k) {
        CellPoint a = poly[k], b = poly[(k + 1) % n];
        if (a.i == b.i) continue;
        bool a_above = a.i > p.i, b_above = b.i > p.i;
        if (a_above == b_above) continue;
        // crossing j-coordinate: a.j + (p.i - a.i) * (b.j - a.j) / (b.i - a.i)
        long long num = (long long)a.j * (b.i - a.i) + (long long)(p.i - a.i) * (b.j - a.j);
        long long den = b.i - a.i;
        if (den < 0) {
            num = -num;
            den = -den;
        }
        if ((long long)p.j * den < num) inside = !inside;
    }
    return inside;
}

PolygonStats polygon_stats(std::span<const Vec2> poly) {
    PolygonStats st;
    size_t n = poly.size();
    if (n == 0) return st;
    double a2 = 0.0, ci = 0.0, cj = 0.0;
    for (size_t k = 0; k < n; ++k) {
        Vec2 p = poly[k], q = poly[(k + 1) % n];
        double w = p.i * q.j - q.i * p.j;
        a2 += w;
        ci += (p.i + q.i) * w;
        cj += (p.j + q.j) * w;
    }
    st.area = a2 / 2.0;
    if (std::abs(a2) > 1e-9) {
        st.centroid = {ci / (3.0 * a2), cj / (3.0 * a2)};
    } else {
        // degenerate: average the vertices
        for (Vec2 p : poly) {
            st.centroid.i += p.i;
            st.centroid.j += p.j;
        }
        st.centroid.i /= double(n);
        st.centroid.j /= double(n);
    }
    return st;
}

double polyline_length(std::span<const CellPoint> pts) {
    double len = 0.0;
    for (size_t k = 1; k < pts.size(); ++k) len += distance(pts[k - 1], pts[k]);
    return len;
}

}  // namespace topomap
