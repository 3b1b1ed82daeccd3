#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "linkerscout/clustering.hpp"
#include "linkerscout/common.hpp"
#include "linkerscout/lpr.hpp"

namespace linkerscout {

/// e-value of a cluster: the fraction of clusters that are strictly larger.
/// Populous (common) conformations score near 0, rare ones near 1.
inline std::vector<double> cluster_evalues(const ClusterAssignment& assignment) {
    const std::size_t nc = assignment.cluster_sizes.size();
    if (nc == 0) throw std::invalid_argument("no clusters");
    std::vector<double> ev(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        int larger = 0;
        for (int s : assignment.cluster_sizes)
            if (s > assignment.cluster_sizes[c]) ++larger;
        ev[c] = static_cast<double>(larger) / static_cast<double>(nc);
    }
    return ev;
}

/// Structural uniqueness score: the z-score of each cluster's e-value across
/// all clusters (sample standard deviation). Positive means rarer than
/// typical. A run where every cluster has the same size carries no signal and
/// is rejected.
inline std::vector<double> sus_scores(const std::vector<double>& evalues) {
    const std::size_t nc = evalues.size();
    if (nc < 2) throw std::invalid_argument("degenerate clustering: fewer than 2 clusters");
    double mean = 0.0;
    for (double e : evalues) mean += e;
    mean /= static_cast<double>(nc);
    double ss = 0.0;
    for (double e : evalues) ss += (e - mean) * (e - mean);
    double sd = std::sqrt(ss / static_cast<double>(nc - 1));
    if (sd == 0.0) throw std::invalid_argument("degenerate clustering: uniform cluster sizes");
    std::vector<double> sus(nc);
    for (std::size_t c = 0; c < nc; ++c) sus[c] = (evalues[c] - mean) / sd;
    return sus;
}

struct ClusterScore {
    int cluster_id = 0;
    int size = 0;
    double evalue = 0.0;
    double sus = 0.0;
};

inline std::vector<ClusterScore> cluster_score_table(const ClusterAssignment& assignment,
                                                     const std::vector<double>& evalues,
                                                     const std::vector<double>& sus) {
    std::vector<ClusterScore> table(assignment.cluster_sizes.size());
    for (std::size_t c = 0; c < table.size(); ++c)
        table[c] = {static_cast<int>(c), assignment.cluster_sizes[c], evalues[c], sus[c]};
    return table;
}

inline void write_cluster_scores_tsv(const std::vector<ClusterScore>& table, std::ostream& os) {
    os << "cluster\tsize\tevalue\tsus\n";
    for (const ClusterScore& row : table)
        os << row.cluster_id << "\t" << row.size << "\t" << fmt_g17(row.evalue) << "\t"
           << fmt_g17(row.sus) << "\n";
}

/// SUS profile of one linker-probable region: the score of the cluster each
/// of its 2k-3 tetrapeptides landed in, in sequence order.
struct SusProfile {
    std::string structure_id;
    std::string chain_id;
    int boundary = 0;
    int k = 0;
    std::vector<double> values;
};

/// `first_row` is the index of the LPR's first tetrapeptide in the clustered
/// feature matrix; its tetrapeptides occupy consecutive rows.
inline SusProfile build_profile(const Lpr& lpr, std::size_t first_row,
                                const ClusterAssignment& assignment,
                                const std::vector<double>& sus) {
    SusProfile profile;
    profile.structure_id = lpr.structure_id;
    profile.chain_id = lpr.chain_id;
    profile.boundary = lpr.boundary;
    profile.k = lpr.k;
    const std::size_t nt = static_cast<std::size_t>(lpr.tetra_count());
    profile.values.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        std::size_t row = first_row + t;
        if (row >= assignment.labels.size() || assignment.labels[row] < 0)
            throw std::logic_error("tetrapeptide row has no cluster assignment");
        profile.values.push_back(sus[static_cast<std::size_t>(assignment.labels[row])]);
    }
    return profile;
}

}  // namespace linkerscout
