#pragma once

#include <atomic>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "linkerscout/clustering.hpp"
#include "linkerscout/common.hpp"
#include "linkerscout/demarcation.hpp"
#include "linkerscout/invariants.hpp"
#include "linkerscout/lpr.hpp"
#include "linkerscout/matrix.hpp"
#include "linkerscout/parallel.hpp"
#include "linkerscout/pca.hpp"
#include "linkerscout/scoring.hpp"
#include "linkerscout/structure.hpp"

namespace linkerscout {

struct PipelineConfig {
    int k = 6;
    int fragment_length = 4;  // fixed in v1; kept explicit so outputs record it
    ComponentPolicy pc_policy = ComponentPolicy::variance(0.99);
    int inconsistency_depth = 2;
    double inconsistency_cutoff = 1.15;
    std::string linkage = "ward";
    unsigned threads = 1;

    void validate() const {
        if (k < 2) throw std::invalid_argument("k must be >= 2");
        if (fragment_length != 4) throw std::invalid_argument("fragment length is fixed at 4");
        if (inconsistency_depth < 1) throw std::invalid_argument("inconsistency depth must be >= 1");
        if (inconsistency_cutoff <= 0.0) throw std::invalid_argument("inconsistency cutoff must be > 0");
        if (linkage != "ward") throw std::invalid_argument("unsupported linkage '" + linkage + "'");
    }
};

/// Everything one batch run produces, kept in registry row order: tetrapeptide
/// row r of every matrix is tetrapeptides[r].
struct RunArtifacts {
    std::vector<Lpr> lprs;
    std::vector<Tetrapeptide> tetrapeptides;
    std::vector<std::size_t> lpr_first_row;  // per LPR, row of its first tetrapeptide
    FeatureMatrix invariants;
    FeatureMatrix standardized;
    FeatureMatrix projected;
    PcaModel pca;
    int m = 0;  // selected component count
    Dendrogram dendrogram;
    std::vector<double> coefficients;
    ClusterAssignment assignment;
    std::vector<ClusterScore> scores;
    std::vector<SusProfile> profiles;
    std::vector<LinkerCall> calls;
    std::uint64_t dataset_hash = 0;
};

/// Content hash over the validated inputs and config, recorded in run
/// metadata: scores are transductive (they depend on the whole batch), so
/// outputs must never be mistaken for per-protein-independent predictions.
inline std::uint64_t dataset_content_hash(const std::vector<ValidatedEntry>& entries,
                                          const PipelineConfig& cfg) {
    std::ostringstream buf;
    buf << "k=" << cfg.k << ";frag=" << cfg.fragment_length << ";pc=" << cfg.pc_policy.str()
        << ";depth=" << cfg.inconsistency_depth << ";cutoff=" << fmt_g17(cfg.inconsistency_cutoff)
        << ";linkage=" << cfg.linkage << "\n";
    for (const ValidatedEntry& e : entries) {
        buf << e.structure_id << "\t" << e.chain_id;
        for (int d : e.endpoints) buf << "\t" << d;
        buf << "\n";
        for (const Residue& r : e.chain.residues)
            buf << r.seq_pos << "," << (r.icode ? r.icode : '-') << "," << fmt_g17(r.ca.x) << ","
                << fmt_g17(r.ca.y) << "," << fmt_g17(r.ca.z) << "\n";
    }
    return fnv1a(buf.str());
}

/// Run the whole batch-transductive pipeline: extract LPRs, discretize,
/// compute invariants, standardize, project, cluster, score, and demarcate.
/// Any stage failure is rethrown with the stage name attached.
inline RunArtifacts run_pipeline(const std::vector<ValidatedEntry>& entries,
                                 const PipelineConfig& cfg) {
    cfg.validate();
    if (entries.size() < 2)
        throw std::invalid_argument("pipeline needs at least 2 validated entries");

    auto stage = [](const char* name, auto&& fn) -> decltype(fn()) {
        try {
            return fn();
        } catch (const std::exception& e) {
            throw std::runtime_error("stage " + std::string(name) + ": " + e.what());
        }
    };

    RunArtifacts art;
    art.dataset_hash = dataset_content_hash(entries, cfg);

    stage("extract", [&] {
        for (const ValidatedEntry& e : entries)
            for (int boundary : e.internal_boundaries()) art.lprs.push_back(extract_lpr(e, boundary, cfg.k));
    });

    stage("discretize", [&] {
        for (const Lpr& lpr : art.lprs) {
            art.lpr_first_row.push_back(art.tetrapeptides.size());
            auto tetras = discretize_lpr(lpr);
            art.tetrapeptides.insert(art.tetrapeptides.end(), tetras.begin(), tetras.end());
        }
    });

    stage("invariants", [&] {
        std::vector<std::string> row_ids(art.tetrapeptides.size());
        for (std::size_t i = 0; i < art.tetrapeptides.size(); ++i)
            row_ids[i] = art.tetrapeptides[i].lpr_ref + ":" + std::to_string(art.tetrapeptides[i].index);
        std::vector<std::string> cols(invariant_labels().begin(), invariant_labels().end());
        art.invariants = FeatureMatrix(std::move(row_ids), std::move(cols));
        parallel_for(art.tetrapeptides.size(), cfg.threads, [&](std::size_t i) {
            GiVector g = compute_invariants(art.tetrapeptides[i]);
            for (int j = 0; j < kInvariantCount; ++j)
                art.invariants.at(i, static_cast<std::size_t>(j)) = g[j];
        });
    });

    StandardizeResult sr;
    stage("standardize", [&] { sr = standardize(art.invariants); });
    art.standardized = sr.z;

    stage("pca", [&] {
        art.pca = fit_pca(sr);
        art.m = select_components(art.pca, cfg.pc_policy);
        art.projected = transform(art.standardized, art.pca, art.m);
    });

    stage("cluster", [&] {
        art.dendrogram = hac_ward(art.projected);
        art.coefficients = inconsistency(art.dendrogram, cfg.inconsistency_depth);
        art.assignment = cut_dendrogram(art.dendrogram, art.coefficients, cfg.inconsistency_cutoff);
    });

    stage("score", [&] {
        auto evalues = cluster_evalues(art.assignment);
        auto sus = sus_scores(evalues);
        art.scores = cluster_score_table(art.assignment, evalues, sus);
        art.profiles.resize(art.lprs.size());
        parallel_for(art.lprs.size(), cfg.threads, [&](std::size_t i) {
            art.profiles[i] = build_profile(art.lprs[i], art.lpr_first_row[i], art.assignment, sus);
        });
    });

    stage("demarcate", [&] {
        art.calls.resize(art.profiles.size());
        parallel_for(art.profiles.size(), cfg.threads,
                     [&](std::size_t i) { art.calls[i] = demarcate_profile(art.profiles[i]); });
    });

    return art;
}

// ---------------------------------------------------------------------------
// Run metadata: flat key/value TSV holding the config and the dataset hash.
// Feeding the file back as config reproduces the run byte for byte.

inline void write_run_meta(const PipelineConfig& cfg, std::uint64_t dataset_hash, int m,
                           std::ostream& os) {
    os << "k\t" << cfg.k << "\n"
       << "fragment_length\t" << cfg.fragment_length << "\n"
       << "pc_policy\t" << cfg.pc_policy.str() << "\n"
       << "selected_components\t" << m << "\n"
       << "inconsistency_depth\t" << cfg.inconsistency_depth << "\n"
       << "inconsistency_cutoff\t" << fmt_g17(cfg.inconsistency_cutoff) << "\n"
       << "linkage\t" << cfg.linkage << "\n"
       << "dataset_hash\t" << dataset_hash << "\n";
}

inline std::map<std::string, std::string> read_run_meta(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::size_t ln = 0;
    for (auto line : split_lines(text)) {
        ++ln;
        if (trim(line).empty()) continue;
        auto f = split(line, '\t');
        if (f.size() != 2) throw ParseError("expected key<TAB>value", ln);
        kv[std::string(f[0])] = std::string(f[1]);
    }
    return kv;
}

inline PipelineConfig config_from_meta(const std::map<std::string, std::string>& kv) {
    PipelineConfig cfg;
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto* v = get("k"))
        if (!parse_int(*v, cfg.k)) throw ParseError("bad k in run metadata");
    if (auto* v = get("fragment_length"))
        if (!parse_int(*v, cfg.fragment_length)) throw ParseError("bad fragment_length");
    if (auto* v = get("pc_policy")) cfg.pc_policy = ComponentPolicy::parse(*v);
    if (auto* v = get("inconsistency_depth"))
        if (!parse_int(*v, cfg.inconsistency_depth)) throw ParseError("bad inconsistency_depth");
    if (auto* v = get("inconsistency_cutoff"))
        if (!parse_double(*v, cfg.inconsistency_cutoff)) throw ParseError("bad inconsistency_cutoff");
    if (auto* v = get("linkage")) cfg.linkage = *v;
    return cfg;
}

/// Matrix persistence for audit artifacts: header row with column labels,
/// then one row per tetrapeptide, 17 significant digits.
inline void write_matrix_tsv(const FeatureMatrix& m, std::ostream& os) {
    os << "row_id";
    for (const auto& c : m.col_labels) os << "\t" << c;
    os << "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << m.row_ids[r];
        for (std::size_t c = 0; c < m.cols(); ++c) os << "\t" << fmt_g17(m.at(r, c));
        os << "\n";
    }
}

}  // namespace linkerscout
