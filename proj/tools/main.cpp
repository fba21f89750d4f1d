// Command-line front end: every workflow of the toolkit as a subcommand
// with deterministic, optionally machine-readable output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ingleton/circuits.hpp"
#include "ingleton/essential.hpp"
#include "ingleton/inference.hpp"
#include "ingleton/model.hpp"

using nlohmann::json;
using namespace ingleton;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

CIStructure parse_structure_token(const std::string& token) {
    if (token == "L0") return structure_L0();
    if (token == "L1") return structure_L1();
    if (token == "L2") return structure_L2();
    if (token == "L") return structure_L();
    if (token == "EMPTY") return CIStructure{};
    if (token == "FULL") return CIStructure{(1u << kNumStatements) - 1};
    std::vector<std::string> parts;
    std::stringstream ss(token);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) parts.push_back(item);
    return structure_from_strings(parts);
}

const std::vector<CIStatement>& assumptions_25() {
    static const std::vector<CIStatement> a = {CIStatement(VarX, VarZ, var_bit(VarU)),
                                               CIStatement(VarY, VarZ, var_bit(VarU))};
    return a;
}

int cmd_verify_dist(const std::string& file, bool json_out) {
    JointTable t = table_from_json(load_json(file));
    CIStructure ci = ci_structure(t);
    EntropyVector h = entropy_vector(t);

    json out;
    out["file"] = file;
    out["support_size"] = t.support_size();
    out["common_denominator"] = t.common_denominator().str();
    out["ci_structure"] = ci.strings();
    out["ingleton"] = json::array();
    for (const IngletonLabels& L : all_ingleton_labels()) {
        LinFunctional f = ingleton_functional(L);
        SignCertificate cert = exact_sign(f, t);
        json entry{{"labels", L.str()}, {"value", eval(f, h)}, {"certificate", certificate_to_json(cert)}};
        out["ingleton"].push_back(entry);
    }
    if (json_out) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::printf("distribution: %s (support %d, common denominator %s)\n", file.c_str(),
                t.support_size(), t.common_denominator().str().c_str());
    std::printf("CI structure (%d):", ci.size());
    for (const std::string& s : ci.strings()) std::printf(" %s", s.c_str());
    std::printf("\n");
    for (const auto& entry : out["ingleton"])
        std::printf("ingleton(%s): sign %+d  value %.6g\n", entry["labels"].get<std::string>().c_str(),
                    entry["certificate"]["sign"].get<int>(), entry["value"].get<double>());
    return 0;
}

int cmd_masks(bool verify, bool json_out) {
    std::vector<MaskIdentity> ids = mask_identities();
    bool all_ok = true;
    json out = json::array();
    for (const MaskIdentity& id : ids) {
        bool ok = !verify || id.verify();
        all_ok = all_ok && ok;
        out.push_back({{"label", id.label}, {"identity", id.str()}, {"verified", ok}});
    }
    if (verify) {
        auto [l1, r1] = score1_rearrangement();
        auto [l2, r2] = score2_rearrangement();
        out.push_back({{"label", "score.1"}, {"identity", l1.str() + " == " + r1.str()}, {"verified", l1 == r1}});
        out.push_back({{"label", "score.2"}, {"identity", l2.str() + " == " + r2.str()}, {"verified", l2 == r2}});
        all_ok = all_ok && l1 == r1 && l2 == r2;
    }
    if (json_out) {
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& entry : out) {
            std::printf("%-10s %s", entry["label"].get<std::string>().c_str(),
                        entry["identity"].get<std::string>().c_str());
            if (verify) std::printf("  [%s]", entry["verified"].get<bool>() ? "ok" : "FAILED");
            std::printf("\n");
        }
    }
    return all_ok ? 0 : 1;
}

int cmd_circuits(bool count_only, const std::string& out_file, unsigned threads, bool json_out) {
    FunctionalMatrix m = functional_matrix();
    std::vector<Circuit> cs = circuits(m.rows, threads);
    CircuitCensus c = census(cs);
    if (!out_file.empty()) {
        std::string csv;
        for (const Circuit& v : cs) csv += circuit_csv_line(v, m.col_names) + "\n";
        write_file(out_file, csv);
    }
    if (json_out)
        std::cout << json{{"total", c.total}, {"ingleton", c.through_ingleton}, {"shortest", c.shortest}}.dump()
                  << "\n";
    else
        std::printf("total=%zu ingleton=%zu shortest=%zu\n", c.total, c.through_ingleton, c.shortest);
    (void)count_only;
    return 0;
}

int cmd_search(long max_b, long max_d, int inflate, unsigned threads, bool json_out) {
    SearchBounds bounds = default_search_bounds(inflate, max_b, max_d);
    std::vector<SearchCandidate> found = search_rational(bounds, threads);
    if (json_out) {
        std::cout << search_results_json(found).dump(2) << "\n";
        return 0;
    }
    for (const SearchCandidate& c : found)
        std::printf("p1011=%ld/%ld p1111=%ld/%ld p0110=%s sign=%d\n", c.a, c.b, c.c, c.d,
                    rational_str(c.p0110).c_str(), c.certificate.sign);
    std::printf("verified counterexamples: %zu\n", found.size());
    return 0;
}

int cmd_heatmap(int res, double x_lo, double x_hi, double y_lo, double y_hi,
                const std::string& out_file, unsigned threads) {
    std::string csv = heatmap_csv(heatmap(x_lo, x_hi, y_lo, y_hi, res, threads));
    if (out_file.empty())
        std::cout << csv;
    else
        write_file(out_file, csv);
    return 0;
}

int cmd_essential(const std::string& family_file, int order, int sample_count,
                  std::uint64_t seed, bool json_out) {
    if (sample_count > 0) {
        std::vector<CurveFamily> fams = sample_families(seed, sample_count);
        int certs = 0;
        std::optional<json> first;
        for (const CurveFamily& fam : fams) {
            JointTable limit = limit_table(fam);
            bool ok = true;
            for (const CIStatement& s : assumptions_25()) ok = ok && holds_exact(limit, s);
            if (!ok) continue;
            if (auto cert = prove_essential(assumptions_25(), fam, order)) {
                ++certs;
                if (!first)
                    first = json{{"family", family_to_json(fam)}, {"certificate", certificate_to_json(*cert)}};
            }
        }
        if (json_out)
            std::cout << json{{"sampled", sample_count},
                              {"certificates", certs},
                              {"first", first ? *first : json(nullptr)}}
                             .dump(2)
                      << "\n";
        else
            std::printf("sampled %d families: %d certificates\n", sample_count, certs);
        return certs > 0 ? 0 : 1;
    }

    CurveFamily fam = family_file.empty() ? reference_family() : family_from_json(load_json(family_file));
    auto cert = prove_essential(assumptions_25(), fam, order);
    if (json_out) {
        json out{{"family", family_to_json(fam)},
                 {"certificate", cert ? certificate_to_json(*cert) : json(nullptr)}};
        std::cout << out.dump(2) << "\n";
    } else if (cert) {
        std::printf("essential: certificate at order %d, log-eps coefficient %s\n", cert->order,
                    rational_str(cert->d).c_str());
        for (std::size_t i = 0; i < cert->assumption_coeffs.size(); ++i)
            std::printf("  assumption %s: order-%d coefficient %s\n",
                        assumptions_25()[i].str().c_str(), cert->order,
                        cert->assumption_coeffs[i].str().c_str());
    } else {
        std::printf("inconclusive\n");
    }
    return cert ? 0 : 1;
}

int cmd_closure(const std::string& db_file, std::vector<std::string> interval, bool sym,
                unsigned threads, bool json_out) {
    AntecedentDB db = db_from_json(load_json(db_file));
    std::optional<std::pair<CIStructure, CIStructure>> iv;
    if (!interval.empty()) {
        if (interval.size() != 2) throw std::runtime_error("--interval needs two bounds");
        iv = {parse_structure_token(interval[0]), parse_structure_token(interval[1])};
    }
    std::vector<CIStructure> before = enumerate_uncovered(without_new_records(db), iv, sym, threads);
    std::vector<CIStructure> after = enumerate_uncovered(db, iv, sym, threads);

    if (json_out) {
        json out{{"before", before.size()}, {"after", after.size()}, {"pending", db.pending_sources.size()}};
        out["uncovered"] = json::array();
        for (const CIStructure& s : after) out["uncovered"].push_back(s.strings());
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::printf("uncovered before=%zu after=%zu\n", before.size(), after.size());
    if (!after.empty() && after.size() <= 64)
        for (const CIStructure& s : after) std::printf("  %s\n", s.str().c_str());
    if (!db.pending_sources.empty())
        std::printf("note: %zu external counterexamples pending transcription; full-lattice results are incomplete without them\n",
                    db.pending_sources.size());
    return 0;
}

int cmd_score(const std::string& file, bool rho1, bool rho2, bool json_out) {
    JointTable t = table_from_json(load_json(file));
    if (!rho1 && !rho2) rho1 = rho2 = true;
    json out;
    if (rho1) out["rho1"] = score(t, Score::Rho1);
    if (rho2) out["rho2"] = score(t, Score::Rho2);
    if (json_out) {
        std::cout << out.dump() << "\n";
    } else {
        if (rho1) std::printf("rho1 = %.10g\n", out["rho1"].get<double>());
        if (rho2) std::printf("rho2 = %.10g\n", out["rho2"].get<double>());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification toolkit for conditional Ingleton inequalities"};
    app.require_subcommand(1);

    bool json_out = false;
    int threads_flag = 0;
    app.add_flag("--json", json_out, "machine-readable output");
    app.add_option("--threads", threads_flag, "worker threads (default: cores, or INGLETON_THREADS)");

    int rc = 0;

    auto* verify = app.add_subcommand("verify-dist", "verify a distribution file");
    std::string verify_file;
    verify->add_option("file", verify_file, "distribution JSON")->required();
    verify->callback([&] { rc = cmd_verify_dist(verify_file, json_out); });

    auto* masks = app.add_subcommand("masks", "print the mask identities");
    bool masks_verify = false;
    masks->add_flag("--verify", masks_verify, "check every identity exactly");
    masks->callback([&] { rc = cmd_masks(masks_verify, json_out); });

    auto* circ = app.add_subcommand("circuits", "enumerate circuits of the functional matrix");
    bool circ_count = false;
    std::string circ_out;
    circ->add_flag("--count", circ_count, "print the census only");
    circ->add_option("--out", circ_out, "write circuits as CSV");
    circ->callback([&] { rc = cmd_circuits(circ_count, circ_out, resolve_threads(threads_flag), json_out); });

    auto* search = app.add_subcommand("search", "search for rational counterexamples");
    long max_b = 99, max_d = 11;
    int inflate = 10;
    search->add_option("--max-b", max_b, "denominator bound for p1011");
    search->add_option("--max-d", max_d, "denominator bound for p1111");
    search->add_option("--inflate", inflate, "box inflation in percent");
    search->callback([&] { rc = cmd_search(max_b, max_d, inflate, resolve_threads(threads_flag), json_out); });

    auto* heat = app.add_subcommand("heatmap", "score map over the (p1111, p1011) plane");
    int res = 64;
    double x_lo = 0.02, x_hi = 0.5, y_lo = 0.002, y_hi = 0.05;
    std::string heat_out;
    heat->add_option("--res", res, "grid resolution per axis");
    heat->add_option("--xmin", x_lo, "p1111 lower bound");
    heat->add_option("--xmax", x_hi, "p1111 upper bound");
    heat->add_option("--ymin", y_lo, "p1011 lower bound");
    heat->add_option("--ymax", y_hi, "p1011 upper bound");
    heat->add_option("--out", heat_out, "CSV output file (default stdout)");
    heat->callback([&] { rc = cmd_heatmap(res, x_lo, x_hi, y_lo, y_hi, heat_out, resolve_threads(threads_flag)); });

    auto* ess = app.add_subcommand("essential", "essential-conditionality certificates");
    std::string ess_family;
    int ess_order = 4, ess_sample = 0;
    std::uint64_t ess_seed = 0;
    ess->add_option("--family", ess_family, "curve family JSON (default: built-in witness)");
    ess->add_option("--order", ess_order, "series truncation order");
    ess->add_option("--sample", ess_sample, "sample this many random families");
    ess->add_option("--seed", ess_seed, "sampling seed");
    ess->callback([&] { rc = cmd_essential(ess_family, ess_order, ess_sample, ess_seed, json_out); });

    auto* closure = app.add_subcommand("closure", "coverage scan over CI structures");
    std::string db_file = "data/classification.json";
    std::vector<std::string> interval;
    bool sym = false;
    closure->add_option("--db", db_file, "classification database JSON");
    closure->add_option("--interval", interval, "restrict to the lattice interval [lo, hi]")->expected(2);
    closure->add_flag("--sym", sym, "deduplicate up to symmetry");
    closure->callback([&] { rc = cmd_closure(db_file, interval, sym, resolve_threads(threads_flag), json_out); });

    auto* sc = app.add_subcommand("score", "non-Ingleton scores of a distribution");
    std::string score_file;
    bool rho1 = false, rho2 = false;
    sc->add_option("file", score_file, "distribution JSON")->required();
    sc->add_flag("--rho1", rho1, "print rho1 only");
    sc->add_flag("--rho2", rho2, "print rho2 only");
    sc->callback([&] { rc = cmd_score(score_file, rho1, rho2, json_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
