#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ingleton/ci.hpp"
#include "ingleton/dist.hpp"
#include "ingleton/entropy.hpp"
#include "ingleton/ingleton_expr.hpp"
#include "ingleton/parallel.hpp"

namespace ingleton {

struct InconsistentDB : std::runtime_error {
    explicit InconsistentDB(const std::string& what) : std::runtime_error(what) {}
};

/// A distribution (or citation) whose CI structure refutes every subset as
/// a sufficient assumption set.  Records carrying a table are re-verified;
/// records without one are trusted and flagged as external in reports.
struct CounterexampleRecord {
    CIStructure ci_set;
    std::string source;
    std::optional<JointTable> table;
    bool is_new = false;  // excluded from the "before" closure scan
};

struct IntervalClaim {
    CIStructure lo, hi;
    std::string source;
};

struct AntecedentDB {
    std::vector<CIStructure> antecedents;  // assumption sets known to imply box >= 0
    std::vector<CounterexampleRecord> counterexamples;
    std::vector<IntervalClaim> intervals;       // bracketing claims, informational
    std::vector<std::string> pending_sources;   // counterexamples awaiting transcription
};

/// The ten inclusion-minimal assumption sets of the classification,
/// expanded under the Ingleton symmetry group (14 singletons + 14 pairs).
inline std::vector<CIStructure> theorem_antecedents() {
    using S = CIStatement;
    const VarSet X = var_bit(VarX), Y = var_bit(VarY), Z = var_bit(VarZ), U = var_bit(VarU);
    const std::vector<std::vector<S>> generators = {
        {S(VarZ, VarU, 0)},                            // 1.1
        {S(VarX, VarZ, 0)},                            // 1.2
        {S(VarX, VarZ, Y)},                            // 1.3
        {S(VarX, VarY, Z | U)},                        // 1.4
        {S(VarX, VarZ, Y | U)},                        // 1.5
        {S(VarX, VarY, 0), S(VarX, VarY, Z)},          // 2.1
        {S(VarX, VarY, Z), S(VarY, VarU, Z)},          // 2.2
        {S(VarX, VarZ, U), S(VarX, VarU, Z)},          // 2.3
        {S(VarX, VarZ, U), S(VarZ, VarU, X)},          // 2.4
        {S(VarX, VarZ, U), S(VarY, VarZ, U)},          // 2.5
    };
    std::set<CIStructure> out;
    for (const auto& gen : generators) {
        CIStructure base;
        for (const S& s : gen) base.insert(s);
        for (const VarPerm& p : ingleton_symmetry_group()) out.insert(apply_permutation(base, p));
    }
    return {out.begin(), out.end()};
}

inline std::vector<CIStructure> symmetry_orbit(const CIStructure& s) {
    std::set<CIStructure> orbit;
    for (const VarPerm& p : ingleton_symmetry_group()) orbit.insert(apply_permutation(s, p));
    return {orbit.begin(), orbit.end()};
}

/// Copy of the database with the records that settle the open cases
/// removed; closure reports compare scans before and after them.
inline AntecedentDB without_new_records(AntecedentDB db) {
    std::erase_if(db.counterexamples, [](const CounterexampleRecord& ce) { return ce.is_new; });
    return db;
}

enum class Verdict { Implies, Refuted, Unknown };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Implies: return "IMPLIES";
        case Verdict::Refuted: return "REFUTED";
        default: return "UNKNOWN";
    }
}

inline Verdict covered(const CIStructure& s, const AntecedentDB& db) {
    bool implies = false, refuted = false;
    for (const CIStructure& a : db.antecedents)
        if (a.subset_of(s)) { implies = true; break; }
    for (const CounterexampleRecord& ce : db.counterexamples)
        if (s.subset_of(ce.ci_set)) { refuted = true; break; }
    if (implies && refuted)
        throw InconsistentDB("structure " + s.str() + " is both implied and refuted");
    return implies ? Verdict::Implies : (refuted ? Verdict::Refuted : Verdict::Unknown);
}

/// A db is sound only if no antecedent is contained in a counterexample's
/// CI set; anything between the two would be both implied and refuted.
inline void check_consistent(const AntecedentDB& db) {
    for (const CIStructure& a : db.antecedents)
        for (const CounterexampleRecord& ce : db.counterexamples)
            if (a.subset_of(ce.ci_set))
                throw InconsistentDB("antecedent " + a.str() + " lies below counterexample " +
                                     ce.ci_set.str() + " (" + ce.source + ")");
}

/// Exhaustive scan for structures not settled by the database: the whole
/// 2^24 lattice, or the sub-lattice between lo and hi.  Replaces the SAT
/// formulation by a direct bitmask sweep.
inline std::vector<CIStructure> enumerate_uncovered(
    const AntecedentDB& db, std::optional<std::pair<CIStructure, CIStructure>> interval = {},
    bool dedupe_symmetry = false, unsigned threads = 1) {
    check_consistent(db);

    std::vector<std::uint32_t> ante, refu;
    for (const CIStructure& a : db.antecedents) ante.push_back(a.bits);
    for (const CounterexampleRecord& ce : db.counterexamples) refu.push_back(ce.ci_set.bits);

    auto unknown = [&](std::uint32_t s) {
        for (std::uint32_t a : ante)
            if ((a & ~s) == 0) return false;
        for (std::uint32_t m : refu)
            if ((s & ~m) == 0) return false;
        return true;
    };

    std::vector<std::uint32_t> hits;
    if (interval) {
        const std::uint32_t lo = interval->first.bits, hi = interval->second.bits;
        if ((lo & ~hi) != 0) throw std::invalid_argument("interval lower bound exceeds upper bound");
        const std::uint32_t free = hi & ~lo;
        // iterate all submasks of `free` in increasing order
        std::uint32_t sub = 0;
        while (true) {
            if (unknown(lo | sub)) hits.push_back(lo | sub);
            if (sub == free) break;
            sub = (sub - free) & free;  // next submask
        }
        std::sort(hits.begin(), hits.end());
    } else {
        constexpr std::uint32_t kTotal = 1u << kNumStatements;
        constexpr std::uint32_t kChunk = 1u << 18;
        constexpr std::uint32_t kNumChunks = kTotal / kChunk;
        std::vector<std::vector<std::uint32_t>> partial(kNumChunks);
        parallel_for(kNumChunks, threads, [&](std::size_t chunk) {
            const std::uint32_t begin = std::uint32_t(chunk) * kChunk;
            for (std::uint32_t s = begin; s < begin + kChunk; ++s)
                if (unknown(s)) partial[chunk].push_back(s);
        });
        for (const auto& p : partial) hits.insert(hits.end(), p.begin(), p.end());
    }

    if (dedupe_symmetry) {
        // keep the first representative of each orbit present in the result
        std::array<std::array<int, kNumStatements>, 4> perm_map;
        for (int p = 0; p < 4; ++p)
            for (int n = 0; n < kNumStatements; ++n)
                perm_map[p][n] = statement_index(
                    apply_permutation(enumerate_elementary()[n], ingleton_symmetry_group()[p]));
        std::set<std::uint32_t> seen;
        std::vector<std::uint32_t> kept;
        for (std::uint32_t s : hits) {
            bool dup = false;
            for (int p = 0; p < 4 && !dup; ++p) {
                std::uint32_t image = 0;
                for (int n = 0; n < kNumStatements; ++n)
                    if (s >> n & 1) image |= 1u << perm_map[p][n];
                dup = seen.count(image) != 0;
            }
            if (!dup) {
                seen.insert(s);
                kept.push_back(s);
            }
        }
        hits = std::move(kept);
    }

    std::vector<CIStructure> out;
    out.reserve(hits.size());
    for (std::uint32_t bits : hits) out.push_back(CIStructure{bits});
    return out;
}

// ---------------------------------------------------------------------------
// Database file format.

inline AntecedentDB db_from_json(const nlohmann::json& j, bool verify_tables = true) {
    AntecedentDB db;
    for (const auto& a : j.value("antecedents", nlohmann::json::array()))
        db.antecedents.push_back(structure_from_strings(a.get<std::vector<std::string>>()));
    for (const auto& ce : j.value("counterexamples", nlohmann::json::array())) {
        CounterexampleRecord rec;
        rec.ci_set = structure_from_strings(ce.at("ci_set").get<std::vector<std::string>>());
        rec.source = ce.value("source", "");
        rec.is_new = ce.value("new", false);
        if (ce.contains("atoms")) {
            rec.table = table_from_json(nlohmann::json{{"atoms", ce["atoms"]}});
            if (verify_tables) {
                if (ci_structure(*rec.table) != rec.ci_set)
                    throw InconsistentDB("counterexample table has CI structure " +
                                         ci_structure(*rec.table).str() + ", record claims " +
                                         rec.ci_set.str());
                if (exact_sign(ingleton_xyzu(), *rec.table).sign != -1)
                    throw InconsistentDB("counterexample table does not violate the Ingleton inequality: " +
                                         rec.source);
            }
        }
        db.counterexamples.push_back(std::move(rec));
    }
    for (const auto& iv : j.value("intervals", nlohmann::json::array()))
        db.intervals.push_back({structure_from_strings(iv.at("lo").get<std::vector<std::string>>()),
                                structure_from_strings(iv.at("hi").get<std::vector<std::string>>()),
                                iv.value("source", "")});
    for (const auto& p : j.value("pending", nlohmann::json::array()))
        db.pending_sources.push_back(p.value("source", ""));
    return db;
}

inline nlohmann::json db_to_json(const AntecedentDB& db) {
    nlohmann::json out;
    out["antecedents"] = nlohmann::json::array();
    for (const CIStructure& a : db.antecedents) out["antecedents"].push_back(a.strings());
    out["counterexamples"] = nlohmann::json::array();
    for (const CounterexampleRecord& ce : db.counterexamples) {
        nlohmann::json rec{{"ci_set", ce.ci_set.strings()}, {"source", ce.source}};
        if (ce.table) rec["atoms"] = table_to_json(*ce.table)["atoms"];
        if (ce.is_new) rec["new"] = true;
        out["counterexamples"].push_back(rec);
    }
    out["intervals"] = nlohmann::json::array();
    for (const IntervalClaim& iv : db.intervals)
        out["intervals"].push_back(
            {{"lo", iv.lo.strings()}, {"hi", iv.hi.strings()}, {"source", iv.source}});
    out["pending"] = nlohmann::json::array();
    for (const std::string& s : db.pending_sources)
        out["pending"].push_back(nlohmann::json{{"source", s}});
    return out;
}

}  // namespace ingleton
