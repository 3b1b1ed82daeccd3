#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "linkerscout/pca.hpp"

using namespace linkerscout;

namespace {

FeatureMatrix make_matrix(std::size_t n, std::size_t c) {
    std::vector<std::string> rows, cols;
    for (std::size_t i = 0; i < n; ++i) rows.push_back("r" + std::to_string(i));
    for (std::size_t j = 0; j < c; ++j) cols.push_back("f" + std::to_string(j));
    return FeatureMatrix(std::move(rows), std::move(cols));
}

FeatureMatrix random_matrix(std::size_t n, std::size_t c, unsigned seed) {
    FeatureMatrix m = make_matrix(n, c);
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    // mildly structured: distinct scales plus a shared latent factor
    for (std::size_t i = 0; i < n; ++i) {
        double latent = g(rng);
        for (std::size_t j = 0; j < c; ++j)
            m.at(i, j) = (1.0 + 0.3 * j) * g(rng) + 0.5 * latent + 2.0 * j;
    }
    return m;
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

}  // namespace

TEST_CASE("standardize: zero mean, unit sample variance") {
    FeatureMatrix m = make_matrix(3, 2);
    // column 0: {1,2,3}; column 1: {10,30,20}
    m.at(0, 0) = 1; m.at(1, 0) = 2; m.at(2, 0) = 3;
    m.at(0, 1) = 10; m.at(1, 1) = 30; m.at(2, 1) = 20;

    auto sr = standardize(m);
    CHECK(sr.means[0] == Catch::Approx(2.0));
    CHECK(sr.stds[0] == Catch::Approx(1.0));
    CHECK(sr.z.at(0, 0) == Catch::Approx(-1.0));
    CHECK(sr.z.at(1, 0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(sr.z.at(2, 0) == Catch::Approx(1.0));

    CHECK(sr.means[1] == Catch::Approx(20.0));
    CHECK(sr.stds[1] == Catch::Approx(10.0));

    for (std::size_t j = 0; j < 2; ++j) {
        double mean = 0, ss = 0;
        for (std::size_t i = 0; i < 3; ++i) mean += sr.z.at(i, j);
        mean /= 3;
        for (std::size_t i = 0; i < 3; ++i) ss += (sr.z.at(i, j) - mean) * (sr.z.at(i, j) - mean);
        CHECK(mean == Catch::Approx(0.0).margin(1e-14));
        CHECK(ss / 2 == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("standardize: constant column is rejected by name") {
    FeatureMatrix m = make_matrix(4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        m.at(i, 0) = static_cast<double>(i);
        m.at(i, 1) = 7.5;
    }
    CHECK_THROWS_WITH(standardize(m), Catch::Matchers::ContainsSubstring("f1"));

    FeatureMatrix tiny = make_matrix(1, 2);
    CHECK_THROWS_AS(standardize(tiny), std::invalid_argument);
}

TEST_CASE("fit_pca: perfectly anti-correlated pair") {
    FeatureMatrix m = make_matrix(64, 2);
    std::mt19937 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t i = 0; i < 64; ++i) {
        double x = g(rng);
        m.at(i, 0) = x;
        m.at(i, 1) = -3.0 * x + 4.0;
    }
    auto model = fit_pca(standardize(m));

    const double s = 1.0 / std::sqrt(2.0);
    CHECK(model.eigenvalues[0] == Catch::Approx(2.0).epsilon(1e-10));
    CHECK(model.eigenvalues[1] == Catch::Approx(0.0).margin(1e-10));
    // sign convention: on a magnitude tie the first coefficient is positive
    CHECK(model.component(0, 0) == Catch::Approx(s).epsilon(1e-10));
    CHECK(model.component(1, 0) == Catch::Approx(-s).epsilon(1e-10));
    CHECK(model.component(0, 1) == Catch::Approx(s).epsilon(1e-6));
    CHECK(model.component(1, 1) == Catch::Approx(s).epsilon(1e-6));
}

TEST_CASE("fit_pca: orthonormal components, ordered eigenvalues, preserved geometry") {
    FeatureMatrix m = random_matrix(400, 15, 42);
    auto sr = standardize(m);
    auto model = fit_pca(sr);

    const std::size_t c = model.dim;
    REQUIRE(c == 15);

    SECTION("columns are orthonormal") {
        for (std::size_t a = 0; a < c; ++a)
            for (std::size_t b = a; b < c; ++b) {
                double dot = 0.0;
                for (std::size_t v = 0; v < c; ++v)
                    dot += model.component(v, a) * model.component(v, b);
                CHECK(dot == Catch::Approx(a == b ? 1.0 : 0.0).margin(1e-10));
            }
    }

    SECTION("eigenvalues are non-negative, non-increasing, and sum to the trace") {
        double total = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            CHECK(model.eigenvalues[j] >= 0.0);
            if (j > 0) CHECK(model.eigenvalues[j] <= model.eigenvalues[j - 1] + 1e-12);
            total += model.eigenvalues[j];
        }
        // standardized data: every covariance diagonal entry is exactly 1
        CHECK(total == Catch::Approx(15.0).epsilon(1e-9));
    }

    SECTION("projected column variances equal the eigenvalues") {
        FeatureMatrix proj = transform(sr.z, model, 15);
        for (std::size_t j = 0; j < c; ++j) {
            double mean = 0.0;
            for (std::size_t i = 0; i < proj.rows(); ++i) mean += proj.at(i, j);
            mean /= static_cast<double>(proj.rows());
            double ss = 0.0;
            for (std::size_t i = 0; i < proj.rows(); ++i) {
                double d = proj.at(i, j) - mean;
                ss += d * d;
            }
            double var = ss / static_cast<double>(proj.rows() - 1);
            CHECK(var == Catch::Approx(model.eigenvalues[j]).margin(1e-9));
        }
    }

    SECTION("full-rank projection preserves pairwise distances") {
        FeatureMatrix proj = transform(sr.z, model, 15);
        std::mt19937 rng(9);
        std::uniform_int_distribution<std::size_t> pick(0, sr.z.rows() - 1);
        for (int t = 0; t < 200; ++t) {
            std::size_t a = pick(rng), b = pick(rng);
            CHECK(std::sqrt(sq_dist(proj.row(a), proj.row(b))) ==
                  Catch::Approx(std::sqrt(sq_dist(sr.z.row(a), sr.z.row(b)))).margin(1e-9));
        }
    }

    SECTION("projection labels are pc1..pcm") {
        FeatureMatrix proj = transform(sr.z, model, 3);
        REQUIRE(proj.col_labels == std::vector<std::string>{"pc1", "pc2", "pc3"});
        CHECK(proj.row_ids == sr.z.row_ids);
    }
}

TEST_CASE("fit_pca: isotropic noise has near-unit spectrum") {
    // With 1e5 iid standard-normal rows the sample eigenvalues of the
    // identity covariance concentrate within a few percent of 1.
    const std::size_t n = 100000, c = 15;
    FeatureMatrix m = make_matrix(n, c);
    std::mt19937_64 rng(123456);
    std::normal_distribution<double> g(0.0, 1.0);
    for (double& x : m.data) x = g(rng);

    auto model = fit_pca(standardize(m));
    for (std::size_t j = 0; j < c; ++j)
        CHECK(model.eigenvalues[j] == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("fit_pca: needs more rows than columns") {
    FeatureMatrix m = random_matrix(15, 15, 3);
    CHECK_THROWS_WITH(fit_pca(m), Catch::Matchers::ContainsSubstring("more rows than columns"));
}

TEST_CASE("select_components: variance and fixed policies") {
    PcaModel model;
    model.dim = 15;
    model.eigenvalues.assign(15, 0.0);
    model.eigenvalues[0] = 8;
    model.eigenvalues[1] = 4;
    model.eigenvalues[2] = 2;
    model.eigenvalues[3] = 1;

    CHECK(select_components(model, ComponentPolicy::variance(0.8)) == 2);
    CHECK(select_components(model, ComponentPolicy::variance(0.81)) == 3);
    CHECK(select_components(model, ComponentPolicy::variance(0.5)) == 1);
    CHECK(select_components(model, ComponentPolicy::variance(1.0)) == 4);
    CHECK(select_components(model, ComponentPolicy::fixed(8)) == 8);
    CHECK(select_components(model, ComponentPolicy::fixed(50)) == 15);
    CHECK(select_components(model, ComponentPolicy::fixed(0)) == 1);
    CHECK_THROWS_AS(select_components(model, ComponentPolicy::variance(0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(select_components(model, ComponentPolicy::variance(1.5)),
                    std::invalid_argument);
}

TEST_CASE("ComponentPolicy: parse and format") {
    auto f = ComponentPolicy::parse("fixed:8");
    CHECK(f.kind == ComponentPolicy::Kind::fixed);
    CHECK(f.m == 8);
    CHECK(f.str() == "fixed:8");

    auto v = ComponentPolicy::parse("variance:0.99");
    CHECK(v.kind == ComponentPolicy::Kind::variance);
    CHECK(v.theta == Catch::Approx(0.99));

    CHECK_THROWS_AS(ComponentPolicy::parse("garbage"), std::invalid_argument);
    CHECK_THROWS_AS(ComponentPolicy::parse("fixed:abc"), std::invalid_argument);
    CHECK_THROWS_AS(ComponentPolicy::parse("ratio:0.5"), std::invalid_argument);
}

TEST_CASE("pca model: text persistence round-trips bit-exactly") {
    FeatureMatrix m = random_matrix(120, 6, 77);
    auto sr = standardize(m);
    auto model = fit_pca(sr);

    std::stringstream ss;
    save_pca_model(model, ss);
    PcaModel back = load_pca_model(ss);

    REQUIRE(back.dim == model.dim);
    CHECK(back.means == model.means);
    CHECK(back.stds == model.stds);
    CHECK(back.eigenvalues == model.eigenvalues);
    CHECK(back.components == model.components);

    FeatureMatrix a = transform(sr.z, model, 4);
    FeatureMatrix b = transform(sr.z, back, 4);
    CHECK(a.data == b.data);
}

TEST_CASE("transform: argument validation") {
    FeatureMatrix m = random_matrix(40, 4, 5);
    auto sr = standardize(m);
    auto model = fit_pca(sr);
    CHECK_THROWS_AS(transform(sr.z, model, 0), std::invalid_argument);
    CHECK_THROWS_AS(transform(sr.z, model, 5), std::invalid_argument);
    FeatureMatrix wrong = random_matrix(10, 3, 6);
    CHECK_THROWS_AS(transform(wrong, model, 2), std::invalid_argument);
}
