#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ingleton/ci.hpp"
#include "ingleton/entropy.hpp"
#include "ingleton/vars.hpp"

namespace ingleton {

/// Labeling ((A,B),(C,D)) of the Ingleton expression box(AB|CD); invariant
/// under A<->B and C<->D, so pairs are stored sorted.
struct IngletonLabels {
    int a, b, c, d;

    IngletonLabels(int a_, int b_, int c_, int d_)
        : a(std::min(a_, b_)), b(std::max(a_, b_)), c(std::min(c_, d_)), d(std::max(c_, d_)) {
        if ((var_bit(a) | var_bit(b) | var_bit(c) | var_bit(d)) != kFullSet)
            throw std::invalid_argument("Ingleton labels must be a permutation of X,Y,Z,U");
    }

    bool operator==(const IngletonLabels&) const = default;

    std::string str() const {
        return std::string{kVarNames[a], kVarNames[b]} + "|" + std::string{kVarNames[c], kVarNames[d]};
    }
};

/// box(AB|CD) = h(AC)+h(AD)+h(BC)+h(BD)+h(CD)-h(AB)-h(C)-h(D)-h(ACD)-h(BCD)
inline LinFunctional ingleton_functional(const IngletonLabels& L) {
    LinFunctional f;
    f[var_bit(L.a) | var_bit(L.c)] += 1;
    f[var_bit(L.a) | var_bit(L.d)] += 1;
    f[var_bit(L.b) | var_bit(L.c)] += 1;
    f[var_bit(L.b) | var_bit(L.d)] += 1;
    f[var_bit(L.c) | var_bit(L.d)] += 1;
    f[var_bit(L.a) | var_bit(L.b)] -= 1;
    f[var_bit(L.c)] -= 1;
    f[var_bit(L.d)] -= 1;
    f[var_bit(L.a) | var_bit(L.c) | var_bit(L.d)] -= 1;
    f[var_bit(L.b) | var_bit(L.c) | var_bit(L.d)] -= 1;
    return f;
}

inline LinFunctional ingleton_xyzu() {
    return ingleton_functional(IngletonLabels(VarX, VarY, VarZ, VarU));
}

/// The six distinct Ingleton expressions over all label permutations.
inline std::vector<IngletonLabels> all_ingleton_labels() {
    std::vector<IngletonLabels> out;
    for (int a = 0; a < kNumVars; ++a)
        for (int b = a + 1; b < kNumVars; ++b) {
            int rest[2], n = 0;
            for (int v = 0; v < kNumVars; ++v)
                if (v != a && v != b) rest[n++] = v;
            out.emplace_back(a, b, rest[0], rest[1]);
        }
    return out;
}

/// The order-4 group {id, X<->Y, Z<->U, both} fixing box(XY|ZU).
inline const std::array<VarPerm, 4>& ingleton_symmetry_group() {
    static const std::array<VarPerm, 4> group = {
        VarPerm{VarX, VarY, VarZ, VarU},
        VarPerm{VarY, VarX, VarZ, VarU},
        VarPerm{VarX, VarY, VarU, VarZ},
        VarPerm{VarY, VarX, VarU, VarZ},
    };
    return group;
}

/// One signed term of a difference-expression combination.
struct MaskTerm {
    int coeff;
    CIStatement stmt;
};

inline LinFunctional expand_terms(const std::vector<MaskTerm>& terms) {
    LinFunctional f;
    for (const MaskTerm& t : terms) f += t.coeff * delta_functional(t.stmt);
    return f;
}

inline bool verify_identity(const LinFunctional& lhs, const std::vector<MaskTerm>& rhs) {
    return lhs == expand_terms(rhs);
}

inline std::vector<MaskTerm> apply_permutation(const std::vector<MaskTerm>& terms, const VarPerm& p) {
    std::vector<MaskTerm> out;
    out.reserve(terms.size());
    for (const MaskTerm& t : terms) out.push_back({t.coeff, apply_permutation(t.stmt, p)});
    return out;
}

/// Canonical key of a term combination, for orbit and set comparisons.
inline std::vector<std::pair<int, int>> term_key(const std::vector<MaskTerm>& terms) {
    std::vector<std::pair<int, int>> key;
    key.reserve(terms.size());
    for (const MaskTerm& t : terms) key.emplace_back(statement_index(t.stmt), t.coeff);
    std::sort(key.begin(), key.end());
    return key;
}

/// An identity writing the Ingleton expression as a signed integer
/// combination of difference expressions.
struct MaskIdentity {
    std::string label;
    LinFunctional lhs;
    std::vector<MaskTerm> rhs;

    bool verify() const { return verify_identity(lhs, rhs); }

    std::string str() const {
        std::string out = "box(XY|ZU) =";
        bool first = true;
        for (const MaskTerm& t : rhs) {
            out += t.coeff < 0 ? " - " : (first ? " " : " + ");
            out += "d(" + t.stmt.str() + ")";
            first = false;
        }
        return out;
    }
};

namespace detail {
inline CIStatement st(int i, int j, VarSet K = 0) { return CIStatement(i, j, K); }
}  // namespace detail

/// The five mask identities M.1 - M.5 together with the two six-term masks
/// tailored to the models L1 and L2.
inline std::vector<MaskIdentity> mask_identities() {
    using detail::st;
    const VarSet X = var_bit(VarX), Y = var_bit(VarY), Z = var_bit(VarZ), U = var_bit(VarU);
    const LinFunctional box = ingleton_xyzu();
    return {
        {"M.1", box, {{1, st(VarZ, VarU, X)}, {1, st(VarZ, VarU, Y)}, {1, st(VarX, VarY)}, {-1, st(VarZ, VarU)}}},
        {"M.2", box, {{1, st(VarZ, VarU, Y)}, {1, st(VarX, VarZ, U)}, {1, st(VarX, VarY)}, {-1, st(VarX, VarZ)}}},
        {"M.3", box, {{1, st(VarX, VarY, Z)}, {1, st(VarX, VarZ, U)}, {1, st(VarZ, VarU, Y)}, {-1, st(VarX, VarZ, Y)}}},
        {"M.4", box, {{1, st(VarX, VarY, Z)}, {1, st(VarX, VarY, U)}, {1, st(VarZ, VarU, X | Y)}, {-1, st(VarX, VarY, Z | U)}}},
        {"M.5", box, {{1, st(VarX, VarY, Z)}, {1, st(VarX, VarZ, U)}, {1, st(VarZ, VarU, X | Y)}, {-1, st(VarX, VarZ, Y | U)}}},
        {"mask.1", box,
         {{1, st(VarX, VarY, Z | U)},
          {1, st(VarX, VarZ, U)},
          {-1, st(VarX, VarZ, Y | U)},
          {1, st(VarY, VarU, Z)},
          {-1, st(VarY, VarU, X | Z)},
          {1, st(VarZ, VarU, X | Y)}}},
        {"mask.2", box,
         {{1, st(VarX, VarY)},
          {-1, st(VarX, VarZ)},
          {1, st(VarX, VarZ, U)},
          {-1, st(VarY, VarU)},
          {1, st(VarY, VarU, Z)},
          {1, st(VarZ, VarU)}}},
    };
}

/// Rearrangements of the six-term masks: under the respective CI models the
/// right-hand side vanishes, leaving -box equal to a short score.  Returned
/// as exact coefficient identities lhs == rhs.
inline std::pair<LinFunctional, LinFunctional> score1_rearrangement() {
    using detail::st;
    const VarSet X = var_bit(VarX), Y = var_bit(VarY), Z = var_bit(VarZ), U = var_bit(VarU);
    LinFunctional lhs = ingleton_xyzu() +
                        expand_terms({{1, st(VarX, VarZ, Y | U)}, {1, st(VarY, VarU, X | Z)}, {-1, st(VarX, VarY, Z | U)}});
    LinFunctional rhs =
        expand_terms({{1, st(VarX, VarZ, U)}, {1, st(VarY, VarU, Z)}, {1, st(VarZ, VarU, X | Y)}});
    return {lhs, rhs};
}

inline std::pair<LinFunctional, LinFunctional> score2_rearrangement() {
    using detail::st;
    const VarSet Z = var_bit(VarZ), U = var_bit(VarU);
    LinFunctional lhs = ingleton_xyzu() +
                        expand_terms({{1, st(VarX, VarZ)}, {1, st(VarY, VarU)}, {-1, st(VarZ, VarU)}});
    LinFunctional rhs = expand_terms({{1, st(VarX, VarY)}, {1, st(VarX, VarZ, U)}, {1, st(VarY, VarU, Z)}});
    return {lhs, rhs};
}

}  // namespace ingleton
