#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "linkerscout/common.hpp"
#include "linkerscout/scoring.hpp"

namespace linkerscout {

/// Contiguous stretch of a SUS profile, 1-based inclusive tetrapeptide
/// indices, with its summed score.
struct ScoredRange {
    int start = 0;
    int end = 0;
    double score = 0.0;
};

/// All maximal scoring subsequences of `values` (Ruzzo-Tompa), left to right.
/// A stretch qualifies when every nonempty proper prefix and suffix scores
/// strictly positive and no longer stretch with that property contains it;
/// such stretches are provably disjoint. Returns an empty list when nothing
/// scores above zero.
///
/// The scan keeps candidate subsequences on a stack with the cumulative score
/// before their start (L) and after their end (R); a new positive element
/// either stands alone or swallows the rightmost candidate with a smaller L,
/// repeatedly. Final scores are re-summed directly over each reported range
/// so they do not inherit rounding from the running cumulative.
inline std::vector<ScoredRange> maximal_scoring_subsequences(const std::vector<double>& values) {
    struct Cand {
        int start, end;  // 0-based inclusive
        double l, r;     // cumulative score before start / after end
    };
    std::vector<Cand> stack;
    double cum = 0.0;
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
        double x = values[idx];
        double before = cum;
        cum += x;
        if (x <= 0.0) continue;  // cannot begin a maximal stretch
        Cand cand{static_cast<int>(idx), static_cast<int>(idx), before, cum};
        for (;;) {
            // rightmost candidate whose L lies strictly below the new one
            std::size_t j = stack.size();
            while (j > 0 && stack[j - 1].l >= cand.l) --j;
            if (j == 0 || stack[j - 1].r >= cand.r) {
                stack.push_back(cand);
                break;
            }
            // the found candidate absorbs everything up to and including cand
            cand.start = stack[j - 1].start;
            cand.l = stack[j - 1].l;
            stack.resize(j - 1);
        }
    }

    std::vector<ScoredRange> out;
    out.reserve(stack.size());
    for (const Cand& c : stack) {
        double score = 0.0;
        for (int i = c.start; i <= c.end; ++i) score += values[static_cast<std::size_t>(i)];
        out.push_back({c.start + 1, c.end + 1, score});
    }
    return out;
}

enum class LinkerStatus { linker, no_linker };

/// Demarcation outcome for one LPR. Residue numbers use the chain's own
/// numbering; tetra_* are 1-based profile indices. The stretch fields are
/// meaningful only when status == linker.
struct LinkerCall {
    std::string structure_id;
    std::string chain_id;
    int boundary = 0;
    int k = 0;
    LinkerStatus status = LinkerStatus::no_linker;
    int tetra_start = 0;
    int tetra_end = 0;
    int start_res = 0;
    int end_res = 0;
    double cum_sus = 0.0;

    int lpr_start() const { return boundary - k + 1; }
    int lpr_end() const { return boundary + k; }
};

/// Tetrapeptide stretch [i..j] covers LPR-local residues i..j+3; map those to
/// chain numbering around boundary d.
inline std::pair<int, int> stretch_to_residues(int i, int j, int d, int k) {
    if (i < 1 || j < i || j > 2 * k - 3) throw std::invalid_argument("tetrapeptide range out of bounds");
    return {d - k + i, d - k + j + 3};
}

/// Pick the linker stretch: highest score wins; score ties go to the stretch
/// whose residue-space center sits nearest the domain boundary (local center
/// (i+j)/2 + 1.5 vs boundary center k + 0.5); remaining ties to the leftmost.
inline const ScoredRange& select_linker(const std::vector<ScoredRange>& subs, int k) {
    if (subs.empty()) throw std::invalid_argument("no positive stretch to select");
    const double boundary_center = static_cast<double>(k) + 0.5;
    const ScoredRange* best = &subs.front();
    auto center_gap = [&](const ScoredRange& r) {
        return std::fabs((r.start + r.end) / 2.0 + 1.5 - boundary_center);
    };
    for (const ScoredRange& r : subs) {
        if (r.score > best->score) {
            best = &r;
        } else if (r.score == best->score && &r != best) {
            double gr = center_gap(r), gb = center_gap(*best);
            if (gr < gb || (gr == gb && r.start < best->start)) best = &r;
        }
    }
    return *best;
}

inline LinkerCall demarcate_profile(const SusProfile& profile) {
    LinkerCall call;
    call.structure_id = profile.structure_id;
    call.chain_id = profile.chain_id;
    call.boundary = profile.boundary;
    call.k = profile.k;
    auto subs = maximal_scoring_subsequences(profile.values);
    if (subs.empty()) {
        call.status = LinkerStatus::no_linker;
        return call;
    }
    const ScoredRange& pick = select_linker(subs, profile.k);
    call.status = LinkerStatus::linker;
    call.tetra_start = pick.start;
    call.tetra_end = pick.end;
    call.cum_sus = pick.score;
    auto [a, b] = stretch_to_residues(pick.start, pick.end, profile.boundary, profile.k);
    call.start_res = a;
    call.end_res = b;
    return call;
}

// ---------------------------------------------------------------------------
// Primary output format. One row per internal boundary; stretch columns hold
// "-" on no_linker rows. cum_sus is printed with 4 decimals.

inline void write_linkers_tsv(const std::vector<LinkerCall>& calls, std::ostream& os) {
    os << "structure_id\tchain_id\tboundary\tlpr_start\tlpr_end\tstatus\tlinker_start\tlinker_end\tcum_sus\n";
    for (const LinkerCall& c : calls) {
        os << c.structure_id << "\t" << c.chain_id << "\t" << c.boundary << "\t" << c.lpr_start()
           << "\t" << c.lpr_end() << "\t";
        if (c.status == LinkerStatus::linker) {
            os << "linker\t" << c.start_res << "\t" << c.end_res << "\t" << fmt_fixed(c.cum_sus, 4)
               << "\n";
        } else {
            os << "no_linker\t-\t-\t-\n";
        }
    }
}

inline std::vector<LinkerCall> parse_linkers_tsv(std::string_view text) {
    std::vector<LinkerCall> calls;
    std::size_t ln = 0;
    for (auto line : split_lines(text)) {
        ++ln;
        auto t = trim(line);
        if (t.empty() || t.front() == '#' || (ln == 1 && t.substr(0, 12) == "structure_id")) continue;
        auto f = split(t, '\t');
        if (f.size() != 9) throw ParseError("expected 9 columns", ln);
        LinkerCall c;
        c.structure_id = std::string(f[0]);
        c.chain_id = std::string(f[1]);
        int lpr_start = 0, lpr_end = 0;
        if (!parse_int(f[2], c.boundary) || !parse_int(f[3], lpr_start) || !parse_int(f[4], lpr_end))
            throw ParseError("bad boundary or LPR column", ln);
        if (lpr_end - lpr_start + 1 != 2 * (lpr_end - c.boundary) || lpr_end <= c.boundary)
            throw ParseError("LPR columns inconsistent with boundary", ln);
        c.k = lpr_end - c.boundary;
        if (f[5] == "linker") {
            c.status = LinkerStatus::linker;
            double cum = 0.0;
            if (!parse_int(f[6], c.start_res) || !parse_int(f[7], c.end_res) ||
                !parse_double(f[8], cum))
                throw ParseError("bad linker columns", ln);
            c.cum_sus = cum;
            c.tetra_start = c.start_res - (c.boundary - c.k);
            c.tetra_end = c.end_res - (c.boundary - c.k) - 3;
        } else if (f[5] == "no_linker") {
            c.status = LinkerStatus::no_linker;
        } else {
            throw ParseError("unknown status '" + std::string(f[5]) + "'", ln);
        }
        calls.push_back(std::move(c));
    }
    return calls;
}

}  // namespace linkerscout
