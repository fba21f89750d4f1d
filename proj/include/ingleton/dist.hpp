#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ingleton/numeric.hpp"
#include "ingleton/vars.hpp"

namespace ingleton {

struct NegativeAtom : std::runtime_error {
    explicit NegativeAtom(const std::string& what) : std::runtime_error(what) {}
};
struct NotNormalized : std::runtime_error {
    explicit NotNormalized(const std::string& what) : std::runtime_error(what) {}
};

/// A joint distribution of four binary random variables with exact rational
/// atomic probabilities.  Immutable after construction.
class JointTable {
  public:
    static JointTable make(std::array<Rational, kNumAtoms> atoms) {
        Rational sum = 0;
        for (int a = 0; a < kNumAtoms; ++a) {
            if (atoms[a] < 0)
                throw NegativeAtom("atom " + atom_name(a) + " is negative: " + rational_str(atoms[a]));
            sum += atoms[a];
        }
        if (sum != 1)
            throw NotNormalized("atoms sum to " + rational_str(sum) + ", expected 1");
        return JointTable(std::move(atoms));
    }

    const Rational& atom(int a) const { return atoms_[a]; }
    const Rational& atom(const std::string& key) const { return atoms_[atom_from_name(key)]; }
    const std::array<Rational, kNumAtoms>& atoms() const { return atoms_; }

    int support_size() const {
        return int(std::count_if(atoms_.begin(), atoms_.end(), [](const Rational& r) { return r != 0; }));
    }

    /// Least common denominator of all atoms.
    Integer common_denominator() const {
        Integer d = 1;
        for (const Rational& a : atoms_) d = boost::multiprecision::lcm(d, denominator(a));
        return d;
    }

    bool operator==(const JointTable&) const = default;

  private:
    explicit JointTable(std::array<Rational, kNumAtoms> atoms) : atoms_(std::move(atoms)) {}
    std::array<Rational, kNumAtoms> atoms_;
};

inline JointTable make_table(std::array<Rational, kNumAtoms> atoms) {
    return JointTable::make(std::move(atoms));
}

/// Marginal distribution of the subvector X_I; cells are indexed by
/// project_atom of the joint states.
struct MarginalTable {
    VarSet variables = 0;
    std::vector<Rational> cells;  // size 2^|variables|

    const Rational& cell(int idx) const { return cells[idx]; }
};

inline MarginalTable marginal(const JointTable& t, VarSet I) {
    MarginalTable m;
    m.variables = I;
    m.cells.assign(size_t(1) << set_size(I), Rational(0));
    for (int a = 0; a < kNumAtoms; ++a) m.cells[project_atom(a, I)] += t.atom(a);
    return m;
}

/// The 16-atom rational distribution that witnesses an Ingleton violation
/// under the CI structure {X_|_Y, X_|_Z|U, Y_|_U|Z, Z_|_U|XY}.
inline const JointTable& paper_example() {
    static const JointTable table = [] {
        std::array<Rational, kNumAtoms> a{};
        a[atom_from_name("0000")] = Rational(20, 77);
        a[atom_from_name("0100")] = Rational(20, 693);
        a[atom_from_name("0101")] = Rational(4, 99);
        a[atom_from_name("0110")] = Rational(10, 693);
        a[atom_from_name("0111")] = Rational(2, 99);
        a[atom_from_name("1000")] = Rational(20, 693);
        a[atom_from_name("1001")] = Rational(40, 99);
        a[atom_from_name("1010")] = Rational(1, 693);
        a[atom_from_name("1011")] = Rational(2, 99);
        a[atom_from_name("1111")] = Rational(2, 11);
        return JointTable::make(a);
    }();
    return table;
}

// JSON distribution file: {"atoms": {"ijkl": "num/den", ...}}, omitted keys
// are zero.  Non-canonical rationals are normalized, never rejected.
inline nlohmann::json table_to_json(const JointTable& t) {
    nlohmann::json atoms = nlohmann::json::object();
    for (int a = 0; a < kNumAtoms; ++a)
        if (t.atom(a) != 0) atoms[atom_name(a)] = rational_str(t.atom(a));
    return nlohmann::json{{"atoms", atoms}};
}

inline JointTable table_from_json(const nlohmann::json& j) {
    if (!j.contains("atoms") || !j["atoms"].is_object())
        throw std::invalid_argument("distribution file: missing \"atoms\" object");
    std::array<Rational, kNumAtoms> atoms{};
    for (const auto& [key, val] : j["atoms"].items())
        atoms[atom_from_name(key)] = parse_rational(val.get<std::string>());
    return JointTable::make(std::move(atoms));
}

}  // namespace ingleton
