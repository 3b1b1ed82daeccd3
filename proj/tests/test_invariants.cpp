#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>

#include "linkerscout/invariants.hpp"

using namespace linkerscout;

namespace {

struct Quat {
    double w, x, y, z;
};

Vec3 rotate(const Quat& q, const Vec3& v) {
    // p' = q p q*, expanded into the usual 3x3 form
    double xx = q.x * q.x, yy = q.y * q.y, zz = q.z * q.z;
    double wx = q.w * q.x, wy = q.w * q.y, wz = q.w * q.z;
    double xy = q.x * q.y, xz = q.x * q.z, yz = q.y * q.z;
    return {(1 - 2 * (yy + zz)) * v.x + 2 * (xy - wz) * v.y + 2 * (xz + wy) * v.z,
            2 * (xy + wz) * v.x + (1 - 2 * (xx + zz)) * v.y + 2 * (yz - wx) * v.z,
            2 * (xz - wy) * v.x + 2 * (yz + wx) * v.y + (1 - 2 * (xx + yy)) * v.z};
}

Quat random_unit_quat(std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Quat q{g(rng), g(rng), g(rng), g(rng)};
    double n = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
    return {q.w / n, q.x / n, q.y / n, q.z / n};
}

}  // namespace

TEST_CASE("invariants: regular tetrahedron, unit edges") {
    // vertices of a regular tetrahedron with all edges exactly 1
    const double s = 1.0 / std::sqrt(2.0);
    std::array<Vec3, 4> v = {Vec3{1, 0, -s}, Vec3{-1, 0, -s}, Vec3{0, 1, s}, Vec3{0, -1, s}};
    for (auto& p : v) p = p * 0.5;

    GiVector g = compute_invariants(v);
    CHECK(std::abs(g[0]) == Catch::Approx(std::sqrt(2.0) / 12.0).epsilon(1e-12));
    CHECK(g[1] == Catch::Approx(6.0).epsilon(1e-12));
    for (int i = 2; i <= 7; ++i) CHECK(g[i] == Catch::Approx(1.0).epsilon(1e-12));
    // each vertex sits sqrt(3/8) from the centroid
    CHECK(g[8] == Catch::Approx(4.0 * std::sqrt(3.0 / 8.0)).epsilon(1e-12));
    for (int i : {9, 11, 13}) CHECK(g[i] == Catch::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-12));
    for (int i : {10, 12, 14}) CHECK(g[i] == Catch::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("invariants: right tetrahedron at the origin") {
    std::array<Vec3, 4> v = {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    GiVector g = compute_invariants(v);

    CHECK(g[0] == Catch::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(g[2] == Catch::Approx(1.0));
    CHECK(g[3] == Catch::Approx(1.0));
    CHECK(g[4] == Catch::Approx(1.0));
    CHECK(g[5] == Catch::Approx(std::sqrt(2.0)));
    CHECK(g[6] == Catch::Approx(std::sqrt(2.0)));
    CHECK(g[7] == Catch::Approx(std::sqrt(2.0)));
    CHECK(g[1] == Catch::Approx(3.0 + 3.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(g[8] == Catch::Approx(2.9204813).margin(1e-6));
    for (int i : {9, 11, 13}) CHECK(g[i] == Catch::Approx(0.5).epsilon(1e-12));
    for (int i : {10, 12, 14}) CHECK(g[i] == Catch::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("invariants: canonical labels") {
    const auto& labels = invariant_labels();
    REQUIRE(labels.size() == 15);
    CHECK(labels[0] == "signed_volume");
    CHECK(labels[1] == "perimeter");
    CHECK(labels[2] == "edge_12");
    CHECK(labels[7] == "edge_34");
    CHECK(labels[8] == "centroid_dist_sum");
    CHECK(labels[9] == "area_123");
    CHECK(labels[10] == "perim_123");
    CHECK(labels[11] == "area_134");
    CHECK(labels[12] == "perim_134");
    CHECK(labels[13] == "area_124");
    CHECK(labels[14] == "perim_124");
}

TEST_CASE("invariants: rigid motions leave all fifteen unchanged") {
    std::mt19937 rng(20240917);
    std::uniform_real_distribution<double> coord(-20.0, 20.0);
    std::uniform_real_distribution<double> shift(-100.0, 100.0);

    for (int trial = 0; trial < 200; ++trial) {
        std::array<Vec3, 4> v;
        for (auto& p : v) p = {coord(rng), coord(rng), coord(rng)};

        Quat q = random_unit_quat(rng);
        Vec3 t{shift(rng), shift(rng), shift(rng)};
        std::array<Vec3, 4> moved;
        for (int i = 0; i < 4; ++i) moved[i] = rotate(q, v[i]) + t;

        GiVector a = compute_invariants(v);
        GiVector b = compute_invariants(moved);
        for (int i = 0; i < kInvariantCount; ++i)
            CHECK(std::abs(a[i] - b[i]) <= 1e-9);
    }
}

TEST_CASE("invariants: reflection negates exactly the signed volume") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);

    for (int trial = 0; trial < 50; ++trial) {
        std::array<Vec3, 4> v, mirrored;
        for (int i = 0; i < 4; ++i) {
            v[i] = {coord(rng), coord(rng), coord(rng)};
            mirrored[i] = {v[i].x, v[i].y, -v[i].z};
        }
        GiVector a = compute_invariants(v);
        GiVector b = compute_invariants(mirrored);
        CHECK(b[0] == Catch::Approx(-a[0]).margin(1e-12));
        for (int i = 1; i < kInvariantCount; ++i)
            CHECK(std::abs(a[i] - b[i]) <= 1e-12);
    }
}

TEST_CASE("invariants: coplanar vertices have zero volume") {
    std::array<Vec3, 4> v = {Vec3{0, 0, 2}, Vec3{3, 0, 2}, Vec3{0, 5, 2}, Vec3{-1, 7, 2}};
    CHECK(compute_invariants(v)[0] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("invariants: odd vertex permutation flips the volume sign") {
    std::array<Vec3, 4> v = {Vec3{0, 0, 0}, Vec3{3, 1, 0}, Vec3{1, 4, 1}, Vec3{2, 2, 5}};
    std::array<Vec3, 4> swapped = {v[0], v[2], v[1], v[3]};
    CHECK(compute_invariants(swapped)[0] ==
          Catch::Approx(-compute_invariants(v)[0]).epsilon(1e-12));
}
