#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "linkerscout/common.hpp"
#include "linkerscout/matrix.hpp"

namespace linkerscout {

/// One agglomeration step. Node ids follow the usual convention: leaves are
/// 0..n-1, the i-th merge creates node n+i. left < right always.
struct DendrogramLink {
    int left = 0;
    int right = 0;
    double height = 0.0;  // sqrt of the Ward merge dissimilarity
    int count = 0;        // leaves under the new node
};

struct Dendrogram {
    int n_leaves = 0;
    std::vector<DendrogramLink> merges;  // n_leaves - 1 entries, height non-decreasing
};

namespace detail {

// Condensed upper-triangle index for slots i < j among n slots.
inline std::size_t condensed_index(std::size_t n, std::size_t i, std::size_t j) {
    return i * (2 * n - i - 3) / 2 + j - 1;
}

}  // namespace detail

/// Ward minimum-variance agglomeration via the Lance-Williams recurrence on
/// squared Euclidean dissimilarities. The reported height is the square root
/// of the maintained quantity 2|A||B|/(|A|+|B|) * ||mean(A)-mean(B)||^2, so a
/// first merge of two singletons sits at their plain Euclidean distance.
///
/// Merge selection is fully deterministic: the globally cheapest pair wins,
/// and exact cost ties fall to the pair whose (smaller, larger) node-id tuple
/// is lexicographically least. Per-row minimum caching keeps the run close to
/// O(n^2) in practice without changing any outcome.
inline Dendrogram hac_ward(const FeatureMatrix& points) {
    const std::size_t n = points.rows(), dim = points.cols();
    if (n < 2) throw std::invalid_argument("clustering needs at least 2 observations");
    for (std::size_t i = 0; i < n; ++i)
        for (double v : points.row(i))
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in clustering input");

    // Pairwise squared Euclidean distances, condensed upper triangle.
    std::vector<double> d2(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        auto ri = points.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            auto rj = points.row(j);
            double s = 0.0;
            for (std::size_t v = 0; v < dim; ++v) {
                double d = ri[v] - rj[v];
                s += d * d;
            }
            d2[detail::condensed_index(n, i, j)] = s;
        }
    }
    auto dist = [&](std::size_t i, std::size_t j) -> double& {
        return i < j ? d2[detail::condensed_index(n, i, j)] : d2[detail::condensed_index(n, j, i)];
    };

    std::vector<bool> active(n, true);
    std::vector<int> node_id(n), size(n, 1);
    for (std::size_t i = 0; i < n; ++i) node_id[i] = static_cast<int>(i);

    // Per-slot cache of the cheapest partner; recomputed lazily when stale.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> best_d(n, kInf);
    std::vector<std::size_t> best_j(n, 0);
    std::vector<bool> dirty(n, true);

    // true if (cost a, ids of slots i,j) orders before (cost b, ids of slots p,q)
    auto before = [&](double a, std::size_t i, std::size_t j, double b, std::size_t p,
                      std::size_t q) {
        if (a != b) return a < b;
        auto key = [&](std::size_t x, std::size_t y) {
            return std::pair<int, int>(std::min(node_id[x], node_id[y]),
                                       std::max(node_id[x], node_id[y]));
        };
        return key(i, j) < key(p, q);
    };

    auto refresh = [&](std::size_t i) {
        best_d[i] = kInf;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !active[j]) continue;
            double d = dist(i, j);
            if (best_d[i] == kInf || before(d, i, j, best_d[i], i, best_j[i])) {
                best_d[i] = d;
                best_j[i] = j;
            }
        }
        dirty[i] = false;
    };

    Dendrogram out;
    out.n_leaves = static_cast<int>(n);
    out.merges.reserve(n - 1);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t p = n, q = n;
        double cost = kInf;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            if (dirty[i] || !active[best_j[i]]) refresh(i);
            if (best_d[i] == kInf) continue;
            if (p == n || before(best_d[i], i, best_j[i], cost, p, q)) {
                cost = best_d[i];
                p = i;
                q = best_j[i];
            }
        }
        if (p > q) std::swap(p, q);

        DendrogramLink link;
        link.left = std::min(node_id[p], node_id[q]);
        link.right = std::max(node_id[p], node_id[q]);
        link.height = std::sqrt(cost);
        link.count = size[p] + size[q];
        out.merges.push_back(link);

        // Lance-Williams update: slot p becomes the merged cluster, q retires.
        const double np = size[p], nq = size[q], dpq = cost;
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == p || k == q) continue;
            const double nk = size[k];
            double updated =
                ((np + nk) * dist(k, p) + (nq + nk) * dist(k, q) - nk * dpq) / (np + nq + nk);
            dist(k, p) = updated;
            if (best_j[k] == p || best_j[k] == q) {
                dirty[k] = true;  // cached partner changed shape; re-derive lazily
            } else if (!dirty[k] && before(updated, k, p, best_d[k], k, best_j[k])) {
                best_d[k] = updated;
                best_j[k] = p;
            }
        }
        active[q] = false;
        size[p] += size[q];
        node_id[p] = static_cast<int>(n + step);
        dirty[p] = true;
    }
    return out;
}

/// Inconsistency coefficient of each link. The statistics pool the link's own
/// height with the heights of descendant links reachable through at most
/// depth-1 edges (depth 2 = link plus its direct child links). Sample standard
/// deviation; links whose pool has fewer than two heights, or zero spread,
/// score 0.
inline std::vector<double> inconsistency(const Dendrogram& dendro, int depth) {
    if (depth < 1) throw std::invalid_argument("inconsistency depth must be >= 1");
    const int n = dendro.n_leaves;
    const int n_links = static_cast<int>(dendro.merges.size());
    std::vector<double> coeff(n_links, 0.0);
    std::vector<int> frontier, next;
    std::vector<double> pool;
    for (int i = 0; i < n_links; ++i) {
        pool.clear();
        frontier.assign(1, n + i);
        for (int level = 0; level < depth && !frontier.empty(); ++level) {
            next.clear();
            for (int node : frontier) {
                const DendrogramLink& link = dendro.merges[static_cast<std::size_t>(node - n)];
                pool.push_back(link.height);
                if (link.left >= n) next.push_back(link.left);
                if (link.right >= n) next.push_back(link.right);
            }
            frontier.swap(next);
        }
        if (pool.size() < 2) continue;
        double mean = 0.0;
        for (double h : pool) mean += h;
        mean /= static_cast<double>(pool.size());
        double ss = 0.0;
        for (double h : pool) ss += (h - mean) * (h - mean);
        double sd = std::sqrt(ss / static_cast<double>(pool.size() - 1));
        if (sd > 0.0) coeff[static_cast<std::size_t>(i)] = (dendro.merges[static_cast<std::size_t>(i)].height - mean) / sd;
    }
    return coeff;
}

struct ClusterAssignment {
    std::vector<int> labels;         // per leaf, 0-based cluster id
    std::vector<int> cluster_sizes;  // indexed by cluster id
    int n_clusters() const { return static_cast<int>(cluster_sizes.size()); }
};

/// Cut the tree into its maximal consistent subtrees: a link is consistent
/// when its coefficient is at or below the cutoff and both child links are
/// consistent (leaves always are). Every leaf lands in exactly one cluster;
/// cluster ids are dense and ordered by each cluster's smallest leaf index.
inline ClusterAssignment cut_dendrogram(const Dendrogram& dendro,
                                        const std::vector<double>& coeff, double cutoff) {
    const int n = dendro.n_leaves;
    const int n_links = static_cast<int>(dendro.merges.size());
    if (static_cast<int>(coeff.size()) != n_links)
        throw std::invalid_argument("coefficient count does not match dendrogram");

    std::vector<bool> ok(static_cast<std::size_t>(n_links), false);
    auto node_ok = [&](int node) { return node < n || ok[static_cast<std::size_t>(node - n)]; };
    for (int i = 0; i < n_links; ++i) {
        const DendrogramLink& link = dendro.merges[static_cast<std::size_t>(i)];
        ok[static_cast<std::size_t>(i)] =
            coeff[static_cast<std::size_t>(i)] <= cutoff && node_ok(link.left) && node_ok(link.right);
    }

    // Walk down from the root; the first consistent node on each path roots a
    // cluster and everything below it is settled.
    std::vector<int> root_of(static_cast<std::size_t>(n), -1);
    std::vector<int> stack{n + n_links - 1};
    auto settle = [&](int cluster_root) {
        std::vector<int> sub{cluster_root};
        while (!sub.empty()) {
            int v = sub.back();
            sub.pop_back();
            if (v < n) {
                root_of[static_cast<std::size_t>(v)] = cluster_root;
            } else {
                const DendrogramLink& link = dendro.merges[static_cast<std::size_t>(v - n)];
                sub.push_back(link.left);
                sub.push_back(link.right);
            }
        }
    };
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (node_ok(v)) {
            settle(v);
        } else {
            const DendrogramLink& link = dendro.merges[static_cast<std::size_t>(v - n)];
            stack.push_back(link.left);
            stack.push_back(link.right);
        }
    }

    ClusterAssignment out;
    out.labels.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> id_of_root(static_cast<std::size_t>(n + n_links), -1);
    for (int leaf = 0; leaf < n; ++leaf) {
        int root = root_of[static_cast<std::size_t>(leaf)];
        int& id = id_of_root[static_cast<std::size_t>(root)];
        if (id < 0) {
            id = out.n_clusters();
            out.cluster_sizes.push_back(0);
        }
        out.labels[static_cast<std::size_t>(leaf)] = id;
        ++out.cluster_sizes[static_cast<std::size_t>(id)];
    }
    return out;
}

inline void write_dendrogram_tsv(const Dendrogram& dendro, const std::vector<double>& coeff,
                                 std::ostream& os) {
    os << "link\tleft\tright\theight\tcount\tinconsistency\n";
    for (std::size_t i = 0; i < dendro.merges.size(); ++i) {
        const DendrogramLink& link = dendro.merges[i];
        os << i << "\t" << link.left << "\t" << link.right << "\t" << fmt_g17(link.height) << "\t"
           << link.count << "\t" << (i < coeff.size() ? fmt_g17(coeff[i]) : "-") << "\n";
    }
}

inline void write_assignment_tsv(const std::vector<std::string>& row_ids,
                                 const ClusterAssignment& assignment, std::ostream& os) {
    os << "row\tcluster\n";
    for (std::size_t i = 0; i < row_ids.size(); ++i)
        os << row_ids[i] << "\t" << assignment.labels[i] << "\n";
}

}  // namespace linkerscout
