#pragma once

#include <array>
#include <string>

#include "linkerscout/geometry.hpp"
#include "linkerscout/lpr.hpp"

namespace linkerscout {

inline constexpr int kInvariantCount = 15;

/// The fifteen rigid-motion invariants of a tetrapeptide, in canonical order:
///   [0]     signed volume (Å³)
///   [1]     tetrahedron perimeter = sum of the six edges (Å)
///   [2..7]  edge lengths v1v2, v1v3, v1v4, v2v3, v2v4, v3v4 (Å)
///   [8]     sum of vertex distances from the centroid (Å)
///   [9,10]  area (Å²) and perimeter (Å) of triangle (v1,v2,v3)
///   [11,12] of (v1,v3,v4)
///   [13,14] of (v1,v2,v4)
/// All entries except [0] are rotation+reflection invariant; [0] flips sign
/// under mirror images, which is what separates chiral fragment pairs.
struct GiVector {
    std::array<double, kInvariantCount> values{};

    double operator[](int i) const { return values[i]; }
};

inline const std::array<std::string, kInvariantCount>& invariant_labels() {
    static const std::array<std::string, kInvariantCount> labels = {
        "signed_volume", "perimeter",
        "edge_12", "edge_13", "edge_14", "edge_23", "edge_24", "edge_34",
        "centroid_dist_sum",
        "area_123", "perim_123", "area_134", "perim_134", "area_124", "perim_124"};
    return labels;
}

/// Scalar triple product / 6; positive for a right-handed vertex order.
inline double signed_volume(const Vec3& v1, const Vec3& v2, const Vec3& v3, const Vec3& v4) {
    return dot(cross(v2 - v1, v3 - v1), v4 - v1) / 6.0;
}

inline double centroid_distance_sum(const std::array<Vec3, 4>& v) {
    Vec3 mu = (v[0] + v[1] + v[2] + v[3]) * 0.25;
    return distance(v[0], mu) + distance(v[1], mu) + distance(v[2], mu) + distance(v[3], mu);
}

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * norm(cross(b - a, c - a));
}

inline double triangle_perimeter(const Vec3& a, const Vec3& b, const Vec3& c) {
    return distance(a, b) + distance(b, c) + distance(c, a);
}

inline GiVector compute_invariants(const std::array<Vec3, 4>& v) {
    GiVector g;
    g.values[0] = signed_volume(v[0], v[1], v[2], v[3]);
    g.values[2] = distance(v[0], v[1]);
    g.values[3] = distance(v[0], v[2]);
    g.values[4] = distance(v[0], v[3]);
    g.values[5] = distance(v[1], v[2]);
    g.values[6] = distance(v[1], v[3]);
    g.values[7] = distance(v[2], v[3]);
    g.values[1] = g.values[2] + g.values[3] + g.values[4] + g.values[5] + g.values[6] + g.values[7];
    g.values[8] = centroid_distance_sum(v);
    g.values[9] = triangle_area(v[0], v[1], v[2]);
    g.values[10] = triangle_perimeter(v[0], v[1], v[2]);
    g.values[11] = triangle_area(v[0], v[2], v[3]);
    g.values[12] = triangle_perimeter(v[0], v[2], v[3]);
    g.values[13] = triangle_area(v[0], v[1], v[3]);
    g.values[14] = triangle_perimeter(v[0], v[1], v[3]);
    return g;
}

inline GiVector compute_invariants(const Tetrapeptide& t) { return compute_invariants(t.vertices); }

}  // namespace linkerscout
