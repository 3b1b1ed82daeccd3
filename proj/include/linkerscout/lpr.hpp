#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "linkerscout/geometry.hpp"
#include "linkerscout/structure.hpp"

namespace linkerscout {

/// Linker probable region: the 2k-residue window around one internal domain
/// boundary, covering positions boundary-k+1 .. boundary+k.
struct Lpr {
    std::string structure_id;
    std::string chain_id;
    int boundary = 0;
    int k = 0;
    std::vector<Residue> residues;  // exactly 2k, ascending seq_pos

    int start_res() const { return boundary - k + 1; }
    int end_res() const { return boundary + k; }
    int tetra_count() const { return 2 * k - 3; }

    std::string ref() const {
        return structure_id + ":" + chain_id + ":" + std::to_string(boundary);
    }
};

/// Four consecutive Cα positions of an LPR, treated as a tetrahedron.
/// Tetrapeptide `index` (1-based) covers LPR residues index..index+3.
struct Tetrapeptide {
    std::string lpr_ref;
    int index = 0;
    std::array<Vec3, 4> vertices;
};

inline Lpr extract_lpr(const ValidatedEntry& entry, int boundary, int k) {
    if (boundary == entry.endpoints.back())
        throw std::invalid_argument("terminal endpoint has no LPR");
    if (std::find(entry.endpoints.begin(), entry.endpoints.end(), boundary) == entry.endpoints.end())
        throw std::invalid_argument("boundary " + std::to_string(boundary) +
                                    " is not an endpoint of " + entry.structure_id);

    Lpr lpr{entry.structure_id, entry.chain_id, boundary, k, {}};
    lpr.residues.reserve(2 * k);
    for (int p = boundary - k + 1; p <= boundary + k; ++p) {
        auto hits = entry.chain.at(p);
        if (hits.size() != 1 || hits.front()->icode != 0)
            throw std::logic_error("unresolvable window position " + std::to_string(p) +
                                   " in validated entry " + entry.structure_id);
        lpr.residues.push_back(*hits.front());
    }
    return lpr;
}

/// Slice an LPR into its 2k-3 overlapping tetrapeptides; consecutive ones
/// share three residues.
inline std::vector<Tetrapeptide> discretize_lpr(const Lpr& lpr) {
    if (static_cast<int>(lpr.residues.size()) != 2 * lpr.k)
        throw std::invalid_argument("LPR does not have 2k residues");

    std::vector<Tetrapeptide> tetras;
    tetras.reserve(lpr.tetra_count());
    for (int i = 1; i <= lpr.tetra_count(); ++i) {
        Tetrapeptide t;
        t.lpr_ref = lpr.ref();
        t.index = i;
        for (int v = 0; v < 4; ++v) t.vertices[v] = lpr.residues[i - 1 + v].ca;
        tetras.push_back(std::move(t));
    }
    return tetras;
}

}  // namespace linkerscout
