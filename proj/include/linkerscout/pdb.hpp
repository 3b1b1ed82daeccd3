#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "linkerscout/common.hpp"
#include "linkerscout/structure.hpp"

namespace linkerscout {

namespace detail {

inline const std::set<std::string>& standard_residue_names() {
    static const std::set<std::string> names = {
        "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE",
        "LEU", "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL"};
    return names;
}

// Column slice, 1-based inclusive as in the PDB format description.
inline std::string_view pdb_cols(std::string_view line, std::size_t first, std::size_t last) {
    if (line.size() < first) return {};
    return line.substr(first - 1, std::min(last, line.size()) - first + 1);
}

struct CaRecord {
    char altloc;
    double occupancy;
    Vec3 ca;
};

}  // namespace detail

/// Parse a fixed-column PDB file into a Cα trace. Only ATOM records for the
/// twenty standard amino acids contribute; the first MODEL is read; among
/// duplicate altloc CA atoms the highest occupancy wins, ties resolved by
/// ascending altloc character. Residues seen without a retained CA, and
/// numbering holes between consecutive CA residues, are recorded as gaps.
inline StructureModel parse_pdb(std::string_view text, std::string structure_id = "") {
    using detail::pdb_cols;

    StructureModel model;
    model.id = std::move(structure_id);

    // (chain, seq_pos, icode) -> candidate CA records
    std::map<std::tuple<std::string, int, char>, std::vector<detail::CaRecord>> ca_records;
    // residues seen through any standard-residue ATOM record (gap detection)
    std::set<std::pair<std::string, int>> seen_positions;
    std::vector<std::string> chain_order;

    std::size_t ln = 0;
    std::size_t atom_count = 0;
    for (auto line : split_lines(text)) {
        ++ln;
        auto rec = pdb_cols(line, 1, 6);
        if (rec.substr(0, 6) == "ENDMDL") break;  // first model only
        if (model.id.empty() && rec.substr(0, 6) == "HEADER")
            model.id = std::string(trim(pdb_cols(line, 63, 66)));
        if (rec != "ATOM  ") continue;
        ++atom_count;

        auto res_name = trim(pdb_cols(line, 18, 20));
        if (!detail::standard_residue_names().count(std::string(res_name))) continue;

        std::string chain_id(pdb_cols(line, 22, 22));
        if (chain_id.empty()) chain_id = " ";
        int seq_pos = 0;
        if (!parse_int(pdb_cols(line, 23, 26), seq_pos))
            throw ParseError("malformed residue sequence number", ln);
        if (!std::count(chain_order.begin(), chain_order.end(), chain_id))
            chain_order.push_back(chain_id);
        seen_positions.insert({chain_id, seq_pos});

        auto atom_name = trim(pdb_cols(line, 13, 16));
        if (atom_name != "CA") continue;

        auto icode_field = pdb_cols(line, 27, 27);
        char icode = (icode_field.empty() || icode_field[0] == ' ') ? 0 : icode_field[0];
        auto altloc_field = pdb_cols(line, 17, 17);
        char altloc = altloc_field.empty() ? ' ' : altloc_field[0];

        Vec3 ca;
        if (!parse_double(pdb_cols(line, 31, 38), ca.x) ||
            !parse_double(pdb_cols(line, 39, 46), ca.y) ||
            !parse_double(pdb_cols(line, 47, 54), ca.z) || !is_finite(ca))
            throw ParseError("malformed coordinate field", ln);

        double occupancy = 1.0;
        parse_double(pdb_cols(line, 55, 60), occupancy);  // blank -> 1.0

        ca_records[{chain_id, seq_pos, icode}].push_back({altloc, occupancy, ca});
    }

    if (atom_count == 0) throw ParseError("no ATOM records");

    for (const auto& chain_id : chain_order) {
        Chain chain;
        chain.id = chain_id;
        std::set<int> ca_positions;
        for (const auto& [key, candidates] : ca_records) {
            if (std::get<0>(key) != chain_id) continue;
            const detail::CaRecord* best = &candidates.front();
            for (const auto& c : candidates) {
                if (c.occupancy > best->occupancy ||
                    (c.occupancy == best->occupancy && c.altloc < best->altloc))
                    best = &c;
            }
            chain.residues.push_back({std::get<1>(key), std::get<2>(key), best->ca});
            ca_positions.insert(std::get<1>(key));
        }
        // map iteration gives (seq_pos, icode) ascending order already
        std::set<int> gap_set;
        for (const auto& [cid, pos] : seen_positions)
            if (cid == chain_id && !ca_positions.count(pos)) gap_set.insert(pos);
        for (std::size_t i = 0; i + 1 < chain.residues.size(); ++i)
            for (int p = chain.residues[i].seq_pos + 1; p < chain.residues[i + 1].seq_pos; ++p)
                if (!ca_positions.count(p)) gap_set.insert(p);
        chain.gaps.assign(gap_set.begin(), gap_set.end());
        model.chains.push_back(std::move(chain));
    }

    return model;
}

/// Parse the domain-definition table: one row per chain,
/// "structure_id  chain_id  d1,d2,...,de" with '#' comments.
inline std::vector<DomainDefinition> parse_domain_definitions(std::string_view text) {
    std::vector<DomainDefinition> defs;
    std::set<std::pair<std::string, std::string>> seen;
    std::size_t ln = 0;
    for (auto line : split_lines(text)) {
        ++ln;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto fields = split_fields(t);
        if (fields.size() != 3) throw ParseError("expected 3 fields (structure, chain, endpoints)", ln);

        DomainDefinition d;
        d.structure_id = std::string(fields[0]);
        d.chain_id = std::string(fields[1]);
        for (auto tok : split(fields[2], ',')) {
            int v = 0;
            if (!parse_int(tok, v)) throw ParseError("non-integer endpoint '" + std::string(tok) + "'", ln);
            d.endpoints.push_back(v);
        }
        if (d.endpoints.size() < 2) throw ParseError("fewer than two endpoints", ln);
        for (std::size_t i = 0; i + 1 < d.endpoints.size(); ++i)
            if (d.endpoints[i] >= d.endpoints[i + 1])
                throw ParseError("endpoints not strictly increasing", ln);
        if (!seen.insert({d.structure_id, d.chain_id}).second)
            throw ParseError("duplicate entry for " + d.structure_id + " chain " + d.chain_id, ln);
        defs.push_back(std::move(d));
    }
    return defs;
}

}  // namespace linkerscout
