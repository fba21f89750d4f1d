#pragma once

#include <array>
#include <bit>
#include <stdexcept>
#include <string>

namespace ingleton {

// The four random variables, in their fixed order.
enum Var : int { VarX = 0, VarY = 1, VarZ = 2, VarU = 3 };

inline constexpr int kNumVars = 4;
inline constexpr int kNumSubsets = 16;
inline constexpr int kNumAtoms = 16;
inline constexpr char kVarNames[kNumVars + 1] = "XYZU";

// Subsets of {X,Y,Z,U} are 4-bit masks with X = bit 0, ..., U = bit 3.
using VarSet = unsigned;

inline constexpr VarSet var_bit(int v) { return 1u << v; }
inline constexpr VarSet kFullSet = 0xF;

inline int set_size(VarSet s) { return std::popcount(s); }

inline std::string subset_name(VarSet s) {
    std::string out;
    for (int v = 0; v < kNumVars; ++v)
        if (s & var_bit(v)) out += kVarNames[v];
    return out;
}

inline VarSet subset_from_name(const std::string& name) {
    VarSet s = 0;
    for (char ch : name) {
        int v = 0;
        while (v < kNumVars && kVarNames[v] != ch) ++v;
        if (v == kNumVars) throw std::invalid_argument("unknown variable: " + std::string(1, ch));
        s |= var_bit(v);
    }
    return s;
}

// Atoms are joint states (i,j,k,l) of (X,Y,Z,U), keyed by the bit-string
// "ijkl" with X leftmost.  As an index, the string is read as binary, so
// X occupies the most significant bit.
inline constexpr int atom_state(int atom, int var) { return (atom >> (3 - var)) & 1; }

inline std::string atom_name(int atom) {
    std::string s(4, '0');
    for (int v = 0; v < kNumVars; ++v) s[v] = char('0' + atom_state(atom, v));
    return s;
}

inline int atom_from_name(const std::string& name) {
    if (name.size() != 4) throw std::invalid_argument("atom key must be 4 bits: " + name);
    int a = 0;
    for (char ch : name) {
        if (ch != '0' && ch != '1') throw std::invalid_argument("atom key must be 4 bits: " + name);
        a = a * 2 + (ch - '0');
    }
    return a;
}

/// Projects an atom onto the variables in I; the result indexes a marginal
/// cell, bit r holding the state of the r-th smallest variable of I.
inline int project_atom(int atom, VarSet I) {
    int cell = 0, r = 0;
    for (int v = 0; v < kNumVars; ++v) {
        if (!(I & var_bit(v))) continue;
        cell |= atom_state(atom, v) << r;
        ++r;
    }
    return cell;
}

}  // namespace ingleton
