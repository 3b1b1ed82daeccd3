// linker-scout: structure-based domain-linker demarcation pipeline.
//
// Subcommands:
//   demarcate        run the full batch pipeline over a PDB directory
//   evaluate         score a linkers.tsv against gold annotations
//   cluster-stats    cluster-size histogram of a finished run (needs --audit)
//   dump-invariants  debug dump of the per-tetrapeptide invariant matrix

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "linkerscout/linkerscout.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace linkerscout;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

fs::path find_structure_file(const fs::path& pdb_dir, const std::string& id) {
    for (const char* pattern : {"%s.pdb", "%s.ent", "pdb%s.ent"}) {
        char name[256];
        std::snprintf(name, sizeof name, pattern, id.c_str());
        fs::path p = pdb_dir / name;
        if (fs::exists(p)) return p;
    }
    throw std::runtime_error("no structure file for '" + id + "' in " + pdb_dir.string());
}

unsigned resolve_threads(unsigned flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("LINKER_SCOUT_THREADS")) {
        int v = 0;
        if (parse_int(env, v) && v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

struct LoadResult {
    std::vector<ValidatedEntry> entries;
    std::vector<std::array<std::string, 3>> rejections;  // structure, chain, reason
};

LoadResult load_dataset(const fs::path& pdb_dir, const fs::path& domains_path, int k) {
    LoadResult out;
    auto defs = parse_domain_definitions(read_file(domains_path));
    std::map<std::string, StructureModel> models;
    for (const auto& d : defs) {
        if (!models.count(d.structure_id)) {
            auto path = find_structure_file(pdb_dir, d.structure_id);
            models.emplace(d.structure_id, parse_pdb(read_file(path), d.structure_id));
        }
        auto result = validate_entry(models.at(d.structure_id), d, k);
        if (result.accepted())
            out.entries.push_back(std::move(*result.entry));
        else
            out.rejections.push_back({d.structure_id, d.chain_id, result.reason});
    }
    return out;
}

json call_to_json(const LinkerCall& c) {
    json j{{"structure_id", c.structure_id}, {"chain_id", c.chain_id}, {"boundary", c.boundary},
           {"lpr_start", c.lpr_start()},     {"lpr_end", c.lpr_end()}};
    if (c.status == LinkerStatus::linker) {
        j["status"] = "linker";
        j["linker_start"] = c.start_res;
        j["linker_end"] = c.end_res;
        j["cum_sus"] = c.cum_sus;
    } else {
        j["status"] = "no_linker";
    }
    return j;
}

int cmd_demarcate(const fs::path& pdb_dir, const fs::path& domains_path, const fs::path& out_dir,
                  const PipelineConfig& cfg, bool audit, bool as_json) {
    auto loaded = load_dataset(pdb_dir, domains_path, cfg.k);
    fs::create_directories(out_dir);

    if (!loaded.rejections.empty()) {
        std::ostringstream rej;
        rej << "structure_id\tchain_id\treason\n";
        for (const auto& r : loaded.rejections) {
            rej << r[0] << "\t" << r[1] << "\t" << r[2] << "\n";
            std::cerr << "rejected " << r[0] << " chain " << r[1] << ": " << r[2] << "\n";
        }
        write_file(out_dir / "rejections.tsv", rej.str());
    }
    if (loaded.entries.size() < 2)
        throw std::runtime_error("fewer than 2 validated entries; nothing to cluster");

    RunArtifacts art = run_pipeline(loaded.entries, cfg);

    std::ostringstream linkers;
    write_linkers_tsv(art.calls, linkers);
    write_file(out_dir / "linkers.tsv", linkers.str());

    std::ostringstream meta;
    write_run_meta(cfg, art.dataset_hash, art.m, meta);
    write_file(out_dir / "run_meta.tsv", meta.str());

    if (as_json) {
        json rows = json::array();
        for (const LinkerCall& c : art.calls) rows.push_back(call_to_json(c));
        write_file(out_dir / "linkers.json", rows.dump(2) + "\n");
    }

    if (audit) {
        fs::path adir = out_dir / "audit";
        fs::create_directories(adir);
        auto dump = [&](const char* name, auto&& writer) {
            std::ostringstream buf;
            writer(buf);
            write_file(adir / name, buf.str());
        };
        dump("invariants.tsv", [&](std::ostream& os) { write_matrix_tsv(art.invariants, os); });
        dump("standardized.tsv", [&](std::ostream& os) { write_matrix_tsv(art.standardized, os); });
        dump("projected.tsv", [&](std::ostream& os) { write_matrix_tsv(art.projected, os); });
        dump("pca_model.txt", [&](std::ostream& os) { save_pca_model(art.pca, os); });
        dump("dendrogram.tsv",
             [&](std::ostream& os) { write_dendrogram_tsv(art.dendrogram, art.coefficients, os); });
        dump("assignment.tsv", [&](std::ostream& os) {
            write_assignment_tsv(art.invariants.row_ids, art.assignment, os);
        });
        dump("cluster_scores.tsv", [&](std::ostream& os) { write_cluster_scores_tsv(art.scores, os); });
        dump("profiles.tsv", [&](std::ostream& os) {
            os << "lpr\tboundary\tk";
            for (int i = 1; i <= 2 * cfg.k - 3; ++i) os << "\tu" << i;
            os << "\n";
            for (const SusProfile& p : art.profiles) {
                os << p.structure_id << ":" << p.chain_id << ":" << p.boundary << "\t" << p.boundary
                   << "\t" << p.k;
                for (double u : p.values) os << "\t" << fmt_g17(u);
                os << "\n";
            }
        });
    }

    std::cout << "entries " << loaded.entries.size() << ", rejected " << loaded.rejections.size()
              << ", LPRs " << art.lprs.size() << ", tetrapeptides " << art.tetrapeptides.size()
              << ", PCs " << art.m << ", clusters " << art.assignment.n_clusters() << ", calls "
              << art.calls.size() << "\n";
    return loaded.rejections.empty() ? 0 : 2;
}

json prf_to_json(const Prf& p) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return {{"precision", opt(p.precision)}, {"recall", opt(p.recall)}, {"f1", opt(p.f1)}};
}

int cmd_evaluate(const fs::path& pred_path, const fs::path& gold_path, const fs::path& out_path,
                 bool agreement, bool macro, bool as_json) {
    auto preds = parse_linkers_tsv(read_file(pred_path));
    auto golds = parse_gold_tsv(read_file(gold_path));
    auto mode = macro ? AggregationMode::macro : AggregationMode::micro;
    EvalReport report = evaluate_run(preds, golds, mode);

    if (!out_path.empty()) {
        std::ostringstream buf;
        write_eval_tsv(report, agreement, buf);
        write_file(out_path, buf.str());
    }

    if (as_json) {
        json j{{"rows", json::array()},
               {"no_linker", report.no_linker_joined},
               {"unmatched_gold", report.unmatched.size()},
               {"cutpoint_hits", report.cutpoint_hits},
               {"mode", macro ? "macro" : "micro"},
               {"micro", prf_to_json(report.micro)},
               {"macro", prf_to_json(report.macro_avg)},
               {"totals", {{"tp", report.totals.tp}, {"fp", report.totals.fp}, {"fn", report.totals.fn}}}};
        for (const EvalRow& r : report.rows) {
            json row{{"structure_id", r.structure_id}, {"chain_id", r.chain_id},
                     {"boundary", r.boundary},         {"gold", {r.gold.start, r.gold.end}},
                     {"cut_hit", r.cut_hit},           {"no_linker", r.no_linker}};
            if (!r.no_linker) {
                row["pred"] = {r.pred.start, r.pred.end};
                row["tp"] = r.counts.tp;
                row["fp"] = r.counts.fp;
                row["fn"] = r.counts.fn;
                if (agreement) {
                    row["jaccard"] = r.agreement.fraction;
                    row["band"] = band_name(r.agreement.band);
                }
            }
            j["rows"].push_back(std::move(row));
        }
        std::cout << j.dump(2) << "\n";
    } else {
        write_eval_tsv(report, agreement, std::cout);
        std::cout << "# joined " << report.rows.size() << ", no_linker " << report.no_linker_joined
                  << ", unmatched_gold " << report.unmatched.size() << ", cutpoint_hits "
                  << report.cutpoint_hits << "\n";
        std::cout << "# totals tp " << report.totals.tp << " fp " << report.totals.fp << " fn "
                  << report.totals.fn << "\n";
        const Prf& agg = report.aggregate();
        std::cout << "# " << (macro ? "macro" : "micro") << " precision " << prf_str(agg.precision)
                  << " recall " << prf_str(agg.recall) << " f1 " << prf_str(agg.f1) << "\n";
    }

    for (const GoldLinker& g : report.unmatched)
        std::cerr << "unmatched gold: " << g.structure_id << " chain " << g.chain_id << " "
                  << g.start_res << "-" << g.end_res << "\n";
    return report.joins_complete() ? 0 : 2;
}

int cmd_cluster_stats(const fs::path& run_dir) {
    fs::path scores_path = run_dir / "audit" / "cluster_scores.tsv";
    if (!fs::exists(scores_path))
        throw std::runtime_error("missing audit artifact " + scores_path.string() +
                                 " (re-run demarcate with --audit)");
    std::map<long, long> histogram;
    long clusters = 0, members = 0;
    std::size_t ln = 0;
    for (auto line : split_lines(read_file(scores_path))) {
        ++ln;
        if (ln == 1 || trim(line).empty()) continue;  // header
        auto f = split(line, '\t');
        int size = 0;
        if (f.size() < 2 || !parse_int(f[1], size)) throw ParseError("bad cluster size row", ln);
        ++histogram[size];
        ++clusters;
        members += size;
    }
    std::cout << "size\tcount\n";
    for (const auto& [size, count] : histogram) std::cout << size << "\t" << count << "\n";
    std::cout << "# clusters " << clusters << ", members " << members << "\n";
    return 0;
}

int cmd_dump_invariants(const fs::path& pdb_dir, const fs::path& domains_path, int k,
                        const fs::path& out_path) {
    auto loaded = load_dataset(pdb_dir, domains_path, k);
    for (const auto& r : loaded.rejections)
        std::cerr << "rejected " << r[0] << " chain " << r[1] << ": " << r[2] << "\n";

    std::ostringstream buf;
    buf << "lpr\tindex";
    for (const auto& label : invariant_labels()) buf << "\t" << label;
    buf << "\n";
    for (const ValidatedEntry& e : loaded.entries) {
        for (int boundary : e.internal_boundaries()) {
            Lpr lpr = extract_lpr(e, boundary, k);
            for (const Tetrapeptide& t : discretize_lpr(lpr)) {
                GiVector g = compute_invariants(t);
                buf << t.lpr_ref << "\t" << t.index;
                for (int j = 0; j < kInvariantCount; ++j) buf << "\t" << fmt_fixed(g[j], 6);
                buf << "\n";
            }
        }
    }
    if (out_path.empty())
        std::cout << buf.str();
    else
        write_file(out_path, buf.str());
    return loaded.rejections.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"structure-based domain-linker demarcation"};
    app.require_subcommand(1);

    std::string pdb_dir, domains, out, pred, gold, run_dir, pc_policy = "variance:0.99";
    int k = 6, depth = 2;
    double cutoff = 1.15;
    unsigned threads = 0;
    bool audit = false, as_json = false, agreement = false, macro = false;

    auto* dem = app.add_subcommand("demarcate", "run the pipeline and write linkers.tsv");
    dem->add_option("--pdb-dir", pdb_dir, "directory with structure files")->required();
    dem->add_option("--domains", domains, "domain-definition TSV")->required();
    dem->add_option("--out", out, "output directory")->required();
    dem->add_option("--k", k, "LPR half-width (window = 2k residues)");
    dem->add_option("--pc-policy", pc_policy, "variance:<theta> or fixed:<m>");
    dem->add_option("--inconsistency-depth", depth, "dendrogram inconsistency depth");
    dem->add_option("--inconsistency-cutoff", cutoff, "dendrogram cut threshold");
    dem->add_option("--threads", threads, "worker threads (default: LINKER_SCOUT_THREADS or all cores)");
    dem->add_flag("--audit", audit, "write intermediate artifacts");
    dem->add_flag("--json", as_json, "also write linkers.json");

    auto* eva = app.add_subcommand("evaluate", "score predictions against gold linkers");
    eva->add_option("pred", pred, "linkers.tsv from demarcate")->required();
    eva->add_option("gold", gold, "gold TSV: structure, chain, start, end, citation")->required();
    eva->add_option("--out", out, "write the machine-readable report TSV here");
    eva->add_flag("--agreement", agreement, "add Jaccard agreement columns");
    eva->add_flag("--macro", macro, "macro-average per-row scores (default: micro)");
    eva->add_flag("--json", as_json, "print the report as JSON");

    auto* sta = app.add_subcommand("cluster-stats", "cluster-size histogram of a run directory");
    sta->add_option("run_dir", run_dir, "output directory of a demarcate --audit run")->required();

    auto* dmp = app.add_subcommand("dump-invariants", "print the tetrapeptide invariant matrix");
    dmp->add_option("--pdb-dir", pdb_dir, "directory with structure files")->required();
    dmp->add_option("--domains", domains, "domain-definition TSV")->required();
    dmp->add_option("--k", k, "LPR half-width");
    dmp->add_option("--out", out, "write TSV here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dem->parsed()) {
            PipelineConfig cfg;
            cfg.k = k;
            cfg.pc_policy = ComponentPolicy::parse(pc_policy);
            cfg.inconsistency_depth = depth;
            cfg.inconsistency_cutoff = cutoff;
            cfg.threads = resolve_threads(threads);
            cfg.validate();
            return cmd_demarcate(pdb_dir, domains, out, cfg, audit, as_json);
        }
        if (eva->parsed()) return cmd_evaluate(pred, gold, out, agreement, macro, as_json);
        if (sta->parsed()) return cmd_cluster_stats(run_dir);
        if (dmp->parsed()) return cmd_dump_invariants(pdb_dir, domains, k, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
