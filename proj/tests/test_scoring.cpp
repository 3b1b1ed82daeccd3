#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "linkerscout/scoring.hpp"

using namespace linkerscout;

namespace {

ClusterAssignment with_sizes(std::vector<int> sizes) {
    ClusterAssignment a;
    a.cluster_sizes = std::move(sizes);
    for (std::size_t c = 0; c < a.cluster_sizes.size(); ++c)
        for (int i = 0; i < a.cluster_sizes[c]; ++i) a.labels.push_back(static_cast<int>(c));
    return a;
}

}  // namespace

TEST_CASE("cluster_evalues: reference size distribution") {
    // cluster-size histogram of a full-scale tetrapeptide clustering run:
    // size -> number of clusters of that size
    const std::vector<std::pair<int, int>> histogram = {
        {1, 207}, {2, 899}, {3, 520}, {4, 269}, {5, 131}, {6, 58}, {7, 45},
        {8, 23},  {9, 13},  {10, 9},  {11, 3},  {12, 4},  {13, 4}, {14, 3}};

    std::vector<int> sizes;
    std::vector<std::size_t> rep_of_size(15, 0);  // one cluster id per size
    for (const auto& [size, count] : histogram) {
        rep_of_size[static_cast<std::size_t>(size)] = sizes.size();
        for (int i = 0; i < count; ++i) sizes.push_back(size);
    }
    REQUIRE(sizes.size() == 2188);
    REQUIRE(std::accumulate(sizes.begin(), sizes.end(), 0) == 6525);

    ClusterAssignment a;
    a.cluster_sizes = sizes;
    auto ev = cluster_evalues(a);

    // exact rationals: larger-count / 2188
    CHECK(ev[rep_of_size[14]] == 0.0);
    CHECK(ev[rep_of_size[1]] == Catch::Approx(1981.0 / 2188.0).margin(1e-12));
    CHECK(ev[rep_of_size[2]] == Catch::Approx(1082.0 / 2188.0).margin(1e-12));

    int above = 0;
    for (auto it = histogram.rbegin(); it != histogram.rend(); ++it) {
        CHECK(ev[rep_of_size[static_cast<std::size_t>(it->first)]] ==
              Catch::Approx(static_cast<double>(above) / 2188.0).margin(1e-12));
        above += it->second;
    }

    // equal sizes share an e-value; larger size never scores higher
    for (std::size_t c = 0; c + 1 < sizes.size(); ++c)
        if (sizes[c] == sizes[c + 1]) CHECK(ev[c] == ev[c + 1]);
}

TEST_CASE("cluster_evalues: basic cases") {
    auto ev = cluster_evalues(with_sizes({5, 1}));
    CHECK(ev[0] == 0.0);
    CHECK(ev[1] == Catch::Approx(0.5));

    ClusterAssignment empty;
    CHECK_THROWS_AS(cluster_evalues(empty), std::invalid_argument);
}

TEST_CASE("sus_scores: z-scoring of e-values") {
    SECTION("symmetric triple") {
        auto sus = sus_scores({0.0, 0.5, 1.0});
        CHECK(sus[0] == Catch::Approx(-1.0).epsilon(1e-12));
        CHECK(sus[1] == Catch::Approx(0.0).margin(1e-12));
        CHECK(sus[2] == Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("two clusters land on +-1/sqrt(2)") {
        auto ev = cluster_evalues(with_sizes({5, 1}));
        auto sus = sus_scores(ev);
        CHECK(sus[0] == Catch::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(sus[1] == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
    SECTION("sample mean 0, sample sd 1") {
        std::mt19937 rng(31);
        std::uniform_int_distribution<int> size(1, 20);
        std::vector<int> sizes(40);
        for (int& s : sizes) s = size(rng);
        auto sus = sus_scores(cluster_evalues(with_sizes(sizes)));
        double mean = std::accumulate(sus.begin(), sus.end(), 0.0) / static_cast<double>(sus.size());
        double ss = 0.0;
        for (double x : sus) ss += (x - mean) * (x - mean);
        CHECK(mean == Catch::Approx(0.0).margin(1e-12));
        CHECK(std::sqrt(ss / static_cast<double>(sus.size() - 1)) ==
              Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("rarer clusters score higher") {
        auto ev = cluster_evalues(with_sizes({9, 7, 7, 3, 1}));
        auto sus = sus_scores(ev);
        CHECK(sus[0] < sus[1]);
        CHECK(sus[1] == sus[2]);
        CHECK(sus[2] < sus[3]);
        CHECK(sus[3] < sus[4]);
    }
}

TEST_CASE("sus_scores: degenerate runs are rejected") {
    CHECK_THROWS_WITH(sus_scores({0.3}),
                      Catch::Matchers::ContainsSubstring("fewer than 2 clusters"));
    auto ev = cluster_evalues(with_sizes({3, 3, 3}));
    CHECK(ev == std::vector<double>{0.0, 0.0, 0.0});
    CHECK_THROWS_WITH(sus_scores(ev),
                      Catch::Matchers::ContainsSubstring("uniform cluster sizes"));
}

TEST_CASE("cluster_score_table and tsv output") {
    auto a = with_sizes({5, 1});
    auto ev = cluster_evalues(a);
    auto sus = sus_scores(ev);
    auto table = cluster_score_table(a, ev, sus);
    REQUIRE(table.size() == 2);
    CHECK(table[0].cluster_id == 0);
    CHECK(table[0].size == 5);
    CHECK(table[0].evalue == 0.0);
    CHECK(table[1].evalue == Catch::Approx(0.5));

    std::ostringstream os;
    write_cluster_scores_tsv(table, os);
    const std::string text = os.str();
    auto lines = split_lines(text);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "cluster\tsize\tevalue\tsus");
    CHECK(lines[1].substr(0, 8) == "0\t5\t0\t-0");
    CHECK(lines[2].substr(0, 8) == "1\t1\t0.5\t");
}

TEST_CASE("build_profile: maps consecutive rows through cluster labels") {
    Lpr lpr;
    lpr.structure_id = "1xyz";
    lpr.chain_id = "B";
    lpr.boundary = 50;
    lpr.k = 6;
    lpr.residues.resize(12);

    ClusterAssignment a;
    a.labels = {9, 9, 0, 1, 2, 0, 0, 1, 2, 2, 1, 0};  // rows 2..10 belong to this LPR
    a.cluster_sizes = {4, 3, 3, 0, 0, 0, 0, 0, 0, 2};
    std::vector<double> sus = {-0.5, 0.25, 1.75};

    SusProfile p = build_profile(lpr, 2, a, sus);
    CHECK(p.structure_id == "1xyz");
    CHECK(p.chain_id == "B");
    CHECK(p.boundary == 50);
    CHECK(p.k == 6);
    CHECK(p.values ==
          std::vector<double>{-0.5, 0.25, 1.75, -0.5, -0.5, 0.25, 1.75, 1.75, 0.25});

    // running off the end of the assignment is a logic error
    CHECK_THROWS_AS(build_profile(lpr, 5, a, sus), std::logic_error);
}
