#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "linkerscout/common.hpp"
#include "linkerscout/geometry.hpp"

namespace linkerscout {

/// One residue of a Cα trace. `icode` is 0 when the residue has no
/// insertion code.
struct Residue {
    int seq_pos = 0;
    char icode = 0;
    Vec3 ca;

    friend bool operator==(const Residue&, const Residue&) = default;
};

struct Chain {
    std::string id;
    std::vector<Residue> residues;  // strictly increasing (seq_pos, icode)
    std::vector<int> gaps;          // positions with no retained Cα, sorted

    // Residues sharing an integer position (insertion codes make these non-unique).
    std::vector<const Residue*> at(int seq_pos) const {
        std::vector<const Residue*> out;
        auto lo = std::lower_bound(residues.begin(), residues.end(), seq_pos,
                                   [](const Residue& r, int p) { return r.seq_pos < p; });
        for (auto it = lo; it != residues.end() && it->seq_pos == seq_pos; ++it)
            out.push_back(&*it);
        return out;
    }

    bool has_gap(int seq_pos) const {
        return std::binary_search(gaps.begin(), gaps.end(), seq_pos);
    }

    friend bool operator==(const Chain&, const Chain&) = default;
};

struct StructureModel {
    std::string id;
    std::vector<Chain> chains;

    const Chain* find_chain(const std::string& chain_id) const {
        for (const auto& c : chains)
            if (c.id == chain_id) return &c;
        return nullptr;
    }

    friend bool operator==(const StructureModel&, const StructureModel&) = default;
};

/// Ordered domain endpoints for one continuous multi-domain chain. The last
/// endpoint is the chain terminus; all earlier ones are internal boundaries.
struct DomainDefinition {
    std::string structure_id;
    std::string chain_id;
    std::vector<int> endpoints;  // strictly increasing, size >= 2

    std::vector<int> internal_boundaries() const {
        return {endpoints.begin(), endpoints.end() - 1};
    }
};

/// An entry that passed eligibility checks: every boundary window
/// d-k+1..d+k exists in the chain with no gaps or insertion codes.
struct ValidatedEntry {
    std::string structure_id;
    std::string chain_id;
    int k = 0;
    std::vector<int> endpoints;
    Chain chain;

    std::vector<int> internal_boundaries() const {
        return {endpoints.begin(), endpoints.end() - 1};
    }
};

struct ValidationResult {
    std::optional<ValidatedEntry> entry;
    std::string reason;

    bool accepted() const { return entry.has_value(); }
};

inline ValidationResult validate_entry(const StructureModel& s, const DomainDefinition& d, int k) {
    if (k < 2) return {std::nullopt, "k must be >= 2"};
    const Chain* chain = s.find_chain(d.chain_id);
    if (!chain) return {std::nullopt, "chain not found"};
    if (d.endpoints.size() < 2) return {std::nullopt, "fewer than two domain endpoints"};

    for (std::size_t b = 0; b + 1 < d.endpoints.size(); ++b) {
        const int boundary = d.endpoints[b];
        const int lo = boundary - k + 1;
        const int hi = boundary + k;
        for (int p = lo; p <= hi; ++p) {
            auto hits = chain->at(p);
            if (hits.empty()) {
                return {std::nullopt, "boundary " + std::to_string(boundary) + ": window " +
                                          std::to_string(lo) + ".." + std::to_string(hi) +
                                          " spans a gap at " + std::to_string(p)};
            }
            if (hits.size() > 1 || hits.front()->icode != 0) {
                return {std::nullopt, "boundary " + std::to_string(boundary) + ": window " +
                                          std::to_string(lo) + ".." + std::to_string(hi) +
                                          " has insertion-code ambiguity at " + std::to_string(p)};
            }
        }
    }

    ValidatedEntry e{s.id, d.chain_id, k, d.endpoints, *chain};
    return {std::move(e), {}};
}

// ---------------------------------------------------------------------------
// Internal trace format: a flat TSV that round-trips a StructureModel exactly.
// Rows: "R <chain> <seq_pos> <icode|-> <x> <y> <z>" and "G <chain> <seq_pos>".

inline void write_trace(const StructureModel& s, std::ostream& os) {
    os << "#trace\t" << s.id << "\n";
    for (const auto& c : s.chains) {
        for (const auto& r : c.residues) {
            os << "R\t" << c.id << "\t" << r.seq_pos << "\t" << (r.icode ? std::string(1, r.icode) : "-")
               << "\t" << fmt_g17(r.ca.x) << "\t" << fmt_g17(r.ca.y) << "\t" << fmt_g17(r.ca.z) << "\n";
        }
        for (int g : c.gaps) os << "G\t" << c.id << "\t" << g << "\n";
    }
}

inline StructureModel read_trace(std::string_view text) {
    StructureModel s;
    auto lines = split_lines(text);
    std::size_t ln = 0;
    for (auto line : lines) {
        ++ln;
        if (line.empty()) continue;
        auto f = split(line, '\t');
        if (f[0] == "#trace") {
            if (f.size() < 2) throw ParseError("malformed trace header", ln);
            s.id = std::string(f[1]);
            continue;
        }
        if (f[0] != "R" && f[0] != "G") throw ParseError("unknown trace record", ln);
        std::string chain_id{f[1]};
        Chain* chain = nullptr;
        for (auto& c : s.chains)
            if (c.id == chain_id) chain = &c;
        if (!chain) {
            s.chains.push_back(Chain{chain_id, {}, {}});
            chain = &s.chains.back();
        }
        int pos = 0;
        if (!parse_int(f[2], pos)) throw ParseError("bad position", ln);
        if (f[0] == "G") {
            chain->gaps.push_back(pos);
            continue;
        }
        if (f.size() != 7) throw ParseError("malformed residue record", ln);
        Residue r;
        r.seq_pos = pos;
        r.icode = (f[3] == "-") ? 0 : f[3][0];
        if (!parse_double(f[4], r.ca.x) || !parse_double(f[5], r.ca.y) || !parse_double(f[6], r.ca.z))
            throw ParseError("malformed coordinate field", ln);
        chain->residues.push_back(r);
    }
    return s;
}

}  // namespace linkerscout
