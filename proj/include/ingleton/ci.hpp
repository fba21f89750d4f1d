#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ingleton/dist.hpp"
#include "ingleton/entropy.hpp"
#include "ingleton/vars.hpp"

namespace ingleton {

/// Elementary conditional independence statement i _|_ j | K with singletons
/// i < j and K disjoint from both.
struct CIStatement {
    int i = 0;
    int j = 1;
    VarSet K = 0;

    CIStatement() = default;
    CIStatement(int i_, int j_, VarSet K_) : i(std::min(i_, j_)), j(std::max(i_, j_)), K(K_) {
        if (i == j) throw std::invalid_argument("CI statement needs distinct variables");
        if (K & (var_bit(i) | var_bit(j)))
            throw std::invalid_argument("conditioning set overlaps {i,j}");
    }

    bool operator==(const CIStatement&) const = default;
    auto operator<=>(const CIStatement&) const = default;

    std::string str() const {
        return std::string(1, kVarNames[i]) + "⊥" + std::string(1, kVarNames[j]) + "|" +
               subset_name(K);
    }
};

inline CIStatement statement_from_str(const std::string& s) {
    auto perp = s.find("⊥");
    if (perp == std::string::npos || perp == 0) throw std::invalid_argument("bad CI statement: " + s);
    VarSet left = subset_from_name(s.substr(0, perp));
    auto bar = s.find('|', perp);
    std::string rest = s.substr(perp + 3, bar == std::string::npos ? std::string::npos : bar - perp - 3);
    VarSet right = subset_from_name(rest);
    if (set_size(left) != 1 || set_size(right) != 1)
        throw std::invalid_argument("bad CI statement: " + s);
    VarSet K = bar == std::string::npos ? 0 : subset_from_name(s.substr(bar + 1));
    return CIStatement(std::countr_zero(left), std::countr_zero(right), K);
}

inline constexpr int kNumStatements = 24;

/// All 24 elementary statements, sorted by (i, j, K-mask).
inline const std::array<CIStatement, kNumStatements>& enumerate_elementary() {
    static const std::array<CIStatement, kNumStatements> all = [] {
        std::array<CIStatement, kNumStatements> out{};
        int n = 0;
        for (int i = 0; i < kNumVars; ++i)
            for (int j = i + 1; j < kNumVars; ++j) {
                VarSet rest = kFullSet & ~(var_bit(i) | var_bit(j));
                std::vector<VarSet> ks;
                for (VarSet K = 0; K <= kFullSet; ++K)
                    if ((K & ~rest) == 0) ks.push_back(K);
                // K already enumerated in increasing mask order
                for (VarSet K : ks) out[n++] = CIStatement(i, j, K);
            }
        return out;
    }();
    return all;
}

inline int statement_index(const CIStatement& s) {
    const auto& all = enumerate_elementary();
    for (int n = 0; n < kNumStatements; ++n)
        if (all[n] == s) return n;
    throw std::logic_error("statement not found");
}

/// delta(i,j|K) = h(iK) + h(jK) - h(ijK) - h(K)
inline LinFunctional delta_functional(const CIStatement& s) {
    LinFunctional f;
    f[s.K | var_bit(s.i)] += 1;
    f[s.K | var_bit(s.j)] += 1;
    f[s.K | var_bit(s.i) | var_bit(s.j)] -= 1;
    f[s.K] -= 1;
    return f;
}

/// Algebraic CI test: for every assignment of K, the 2x2 slice matrix of
/// p(x_i, x_j, K=k) with the remaining variables marginalized out must have
/// vanishing determinant.
inline bool holds_exact(const JointTable& t, const CIStatement& s) {
    int kvars[2], nk = 0;
    for (int v = 0; v < kNumVars; ++v)
        if (s.K & var_bit(v)) kvars[nk++] = v;

    for (int kass = 0; kass < (1 << nk); ++kass) {
        Rational cell[2][2] = {{0, 0}, {0, 0}};
        for (int a = 0; a < kNumAtoms; ++a) {
            bool match = true;
            for (int r = 0; r < nk; ++r)
                if (atom_state(a, kvars[r]) != ((kass >> r) & 1)) { match = false; break; }
            if (match) cell[atom_state(a, s.i)][atom_state(a, s.j)] += t.atom(a);
        }
        if (cell[0][0] * cell[1][1] != cell[0][1] * cell[1][0]) return false;
    }
    return true;
}

/// A set of elementary CI statements as a 24-bit mask in the canonical
/// enumeration order.
struct CIStructure {
    std::uint32_t bits = 0;

    static CIStructure of(std::initializer_list<CIStatement> stmts) {
        CIStructure s;
        for (const CIStatement& st : stmts) s.insert(st);
        return s;
    }

    bool contains(int idx) const { return bits >> idx & 1; }
    bool contains(const CIStatement& s) const { return contains(statement_index(s)); }
    void insert(const CIStatement& s) { bits |= 1u << statement_index(s); }
    void insert(int idx) { bits |= 1u << idx; }
    int size() const { return std::popcount(bits); }
    bool subset_of(const CIStructure& o) const { return (bits & ~o.bits) == 0; }

    bool operator==(const CIStructure&) const = default;
    auto operator<=>(const CIStructure&) const = default;

    std::vector<std::string> strings() const {
        std::vector<std::string> out;
        for (int n = 0; n < kNumStatements; ++n)
            if (contains(n)) out.push_back(enumerate_elementary()[n].str());
        return out;
    }

    std::string str() const {
        std::string out = "{";
        for (const std::string& s : strings()) {
            if (out.size() > 1) out += ", ";
            out += s;
        }
        return out + "}";
    }
};

inline CIStructure structure_from_strings(const std::vector<std::string>& names) {
    CIStructure s;
    for (const std::string& n : names) s.insert(statement_from_str(n));
    return s;
}

/// Relabeling of the four variables; statements are re-canonicalized.
using VarPerm = std::array<int, kNumVars>;

inline CIStatement apply_permutation(const CIStatement& s, const VarPerm& p) {
    VarSet K = 0;
    for (int v = 0; v < kNumVars; ++v)
        if (s.K & var_bit(v)) K |= var_bit(p[v]);
    return CIStatement(p[s.i], p[s.j], K);
}

inline CIStructure apply_permutation(const CIStructure& s, const VarPerm& p);

inline CIStructure ci_structure(const JointTable& t) {
    CIStructure s;
    for (int n = 0; n < kNumStatements; ++n)
        if (holds_exact(t, enumerate_elementary()[n])) s.insert(n);
    return s;
}

// The bracketing assumption sets of the formerly open classification cases.
inline CIStructure structure_L0() {
    return CIStructure::of({CIStatement(VarX, VarZ, var_bit(VarU)), CIStatement(VarY, VarU, var_bit(VarZ))});
}
inline CIStructure structure_L1() {
    CIStructure s = structure_L0();
    s.insert(CIStatement(VarZ, VarU, var_bit(VarX) | var_bit(VarY)));
    return s;
}
inline CIStructure structure_L2() {
    CIStructure s = structure_L0();
    s.insert(CIStatement(VarX, VarY, 0));
    return s;
}
inline CIStructure structure_L() {
    CIStructure s = structure_L1();
    s.bits |= structure_L2().bits;
    return s;
}

inline CIStructure apply_permutation(const CIStructure& s, const VarPerm& p) {
    CIStructure out;
    for (int n = 0; n < kNumStatements; ++n)
        if (s.contains(n)) out.insert(apply_permutation(enumerate_elementary()[n], p));
    return out;
}

}  // namespace ingleton
