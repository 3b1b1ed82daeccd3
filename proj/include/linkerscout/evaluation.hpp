#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "linkerscout/common.hpp"
#include "linkerscout/demarcation.hpp"

namespace linkerscout {

/// Literature-reported linker annotation.
struct GoldLinker {
    std::string structure_id;
    std::string chain_id;
    int start_res = 0;
    int end_res = 0;
    std::string citation;
};

/// TSV: structure_id, chain_id, start, end, citation ('#' comments allowed;
/// the citation may contain spaces, so columns are tab-separated).
inline std::vector<GoldLinker> parse_gold_tsv(std::string_view text) {
    std::vector<GoldLinker> golds;
    std::size_t ln = 0;
    for (auto line : split_lines(text)) {
        ++ln;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto f = split(t, '\t');
        if (f.size() < 4) throw ParseError("expected at least 4 columns", ln);
        GoldLinker g;
        g.structure_id = std::string(trim(f[0]));
        g.chain_id = std::string(trim(f[1]));
        if (!parse_int(f[2], g.start_res) || !parse_int(f[3], g.end_res))
            throw ParseError("bad residue range", ln);
        if (g.start_res > g.end_res) throw ParseError("start exceeds end", ln);
        if (f.size() > 4) g.citation = std::string(trim(f[4]));
        golds.push_back(std::move(g));
    }
    return golds;
}

/// Inclusive integer residue interval.
struct ResidueRange {
    int start = 0;
    int end = 0;

    long length() const { return static_cast<long>(end) - start + 1; }
};

inline long range_intersection(ResidueRange a, ResidueRange b) {
    long lo = std::max(a.start, b.start), hi = std::min(a.end, b.end);
    return hi >= lo ? hi - lo + 1 : 0;
}

struct ConfusionCounts {
    long tp = 0;
    long fp = 0;
    long fn = 0;

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

/// Residue-wise confusion between one prediction and one gold annotation:
/// tp = |pred ∩ gold|, fp = |pred \ gold|, fn = |gold \ pred|.
inline ConfusionCounts residue_confusion(ResidueRange pred, ResidueRange gold) {
    long tp = range_intersection(pred, gold);
    return {tp, pred.length() - tp, gold.length() - tp};
}

/// Precision/recall/F1 with honest undefined values: an empty denominator
/// yields NA, never a conventional zero.
struct Prf {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

inline Prf prf(const ConfusionCounts& c) {
    Prf out;
    if (c.tp + c.fp > 0) out.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0) out.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (out.precision && out.recall && *out.precision + *out.recall > 0.0)
        out.f1 = 2.0 * *out.precision * *out.recall / (*out.precision + *out.recall);
    return out;
}

/// True iff the cut point lies inside the gold linker, endpoints inclusive.
inline bool cutpoint_hit(int point, ResidueRange gold) {
    return gold.start <= point && point <= gold.end;
}

enum class AgreementBand { reasonable, medium, weak, disagree };

inline const char* band_name(AgreementBand b) {
    switch (b) {
        case AgreementBand::reasonable: return "reasonable";
        case AgreementBand::medium: return "medium";
        case AgreementBand::weak: return "weak";
        default: return "disagree";
    }
}

struct Agreement {
    double fraction = 0.0;  // Jaccard over residue sets
    AgreementBand band = AgreementBand::disagree;
};

/// Jaccard agreement |a ∩ b| / |a ∪ b| with the banded reading:
/// reasonable > 0.75 ≥ medium > 0.40 ≥ weak > 0 = disagree.
inline Agreement overlap_agreement(ResidueRange a, ResidueRange b) {
    long inter = range_intersection(a, b);
    long uni = a.length() + b.length() - inter;
    Agreement out;
    out.fraction = uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
    if (out.fraction > 0.75)
        out.band = AgreementBand::reasonable;
    else if (out.fraction > 0.40)
        out.band = AgreementBand::medium;
    else if (out.fraction > 0.0)
        out.band = AgreementBand::weak;
    return out;
}

enum class AggregationMode { micro, macro };

/// One gold annotation joined to its nearest prediction.
struct EvalRow {
    std::string structure_id;
    std::string chain_id;
    int boundary = 0;
    ResidueRange pred;
    ResidueRange gold;
    bool no_linker = false;  // joined prediction made no call; excluded from sums
    ConfusionCounts counts;
    Prf scores;
    bool cut_hit = false;
    Agreement agreement;
    std::string citation;
};

struct EvalReport {
    std::vector<EvalRow> rows;            // one per joined gold annotation
    std::vector<GoldLinker> unmatched;    // golds with no prediction row at all
    int no_linker_joined = 0;
    int cutpoint_hits = 0;                // over joined rows
    ConfusionCounts totals;               // pooled counts (unmatched golds count as fn)
    Prf micro;                            // from pooled counts
    Prf macro_avg;                        // mean of defined per-row scores
    AggregationMode mode = AggregationMode::micro;

    const Prf& aggregate() const { return mode == AggregationMode::micro ? micro : macro_avg; }
    bool joins_complete() const { return unmatched.empty(); }
};

/// Score predictions against gold annotations. Each gold row joins the
/// prediction sharing (structure_id, chain_id) whose boundary is nearest to
/// the gold interval (distance 0 when the boundary falls inside it; ties go
/// to the smaller boundary). Golds joined to a no_linker call are tallied but
/// contribute nothing to the confusion sums; golds with no prediction row are
/// join failures and surface as pure false negatives.
inline EvalReport evaluate_run(const std::vector<LinkerCall>& preds,
                               const std::vector<GoldLinker>& golds,
                               AggregationMode mode = AggregationMode::micro) {
    EvalReport report;
    report.mode = mode;

    std::map<std::pair<std::string, std::string>, std::vector<const LinkerCall*>> by_chain;
    for (const LinkerCall& p : preds) by_chain[{p.structure_id, p.chain_id}].push_back(&p);

    std::map<const LinkerCall*, const GoldLinker*> taken;
    double macro_p = 0, macro_r = 0, macro_f = 0;
    int n_p = 0, n_r = 0, n_f = 0;

    for (const GoldLinker& g : golds) {
        auto it = by_chain.find({g.structure_id, g.chain_id});
        if (it == by_chain.end()) {
            report.unmatched.push_back(g);
            report.totals.fn += ResidueRange{g.start_res, g.end_res}.length();
            continue;
        }
        auto gap = [&](const LinkerCall* p) {
            if (p->boundary < g.start_res) return static_cast<long>(g.start_res) - p->boundary;
            if (p->boundary > g.end_res) return static_cast<long>(p->boundary) - g.end_res;
            return 0L;
        };
        const LinkerCall* best = it->second.front();
        for (const LinkerCall* p : it->second) {
            long gp = gap(p), gb = gap(best);
            if (gp < gb || (gp == gb && p->boundary < best->boundary)) best = p;
        }
        auto [prev, inserted] = taken.emplace(best, &g);
        if (!inserted)
            throw std::invalid_argument("duplicate gold rows for " + g.structure_id + " chain " +
                                        g.chain_id + " boundary " + std::to_string(best->boundary));

        EvalRow row;
        row.structure_id = g.structure_id;
        row.chain_id = g.chain_id;
        row.boundary = best->boundary;
        row.gold = {g.start_res, g.end_res};
        row.citation = g.citation;
        row.cut_hit = cutpoint_hit(best->boundary, row.gold);
        if (row.cut_hit) ++report.cutpoint_hits;
        if (best->status == LinkerStatus::no_linker) {
            row.no_linker = true;
            ++report.no_linker_joined;
        } else {
            row.pred = {best->start_res, best->end_res};
            row.counts = residue_confusion(row.pred, row.gold);
            row.scores = prf(row.counts);
            row.agreement = overlap_agreement(row.pred, row.gold);
            report.totals += row.counts;
            if (row.scores.precision) { macro_p += *row.scores.precision; ++n_p; }
            if (row.scores.recall) { macro_r += *row.scores.recall; ++n_r; }
            if (row.scores.f1) { macro_f += *row.scores.f1; ++n_f; }
        }
        report.rows.push_back(std::move(row));
    }

    report.micro = prf(report.totals);
    if (n_p) report.macro_avg.precision = macro_p / n_p;
    if (n_r) report.macro_avg.recall = macro_r / n_r;
    if (n_f) report.macro_avg.f1 = macro_f / n_f;
    return report;
}

inline std::string prf_str(const std::optional<double>& v) {
    return v ? fmt_fixed(*v, 4) : "NA";
}

/// Machine-readable mirror of the evaluation report.
inline void write_eval_tsv(const EvalReport& report, bool agreement, std::ostream& os) {
    os << "structure_id\tchain_id\tboundary\tpred\tgold\ttp\tfp\tfn\tprecision\trecall\tf1\tcut_hit";
    if (agreement) os << "\tjaccard\tband";
    os << "\n";
    for (const EvalRow& r : report.rows) {
        os << r.structure_id << "\t" << r.chain_id << "\t" << r.boundary << "\t";
        if (r.no_linker)
            os << "no_linker\t";
        else
            os << r.pred.start << "-" << r.pred.end << "\t";
        os << r.gold.start << "-" << r.gold.end << "\t";
        if (r.no_linker)
            os << "-\t-\t-\tNA\tNA\tNA";
        else
            os << r.counts.tp << "\t" << r.counts.fp << "\t" << r.counts.fn << "\t"
               << prf_str(r.scores.precision) << "\t" << prf_str(r.scores.recall) << "\t"
               << prf_str(r.scores.f1);
        os << "\t" << (r.cut_hit ? 1 : 0);
        if (agreement) {
            if (r.no_linker)
                os << "\tNA\tNA";
            else
                os << "\t" << fmt_fixed(r.agreement.fraction, 4) << "\t" << band_name(r.agreement.band);
        }
        os << "\n";
    }
}

}  // namespace linkerscout
