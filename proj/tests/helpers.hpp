#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "ingleton/dist.hpp"
#include "ingleton/model.hpp"

namespace testutil {

using namespace ingleton;

/// Random rational table with a common denominator <= max_den, via random
/// cut points so the atoms sum to exactly 1.
inline JointTable random_table(std::mt19937_64& rng, long max_den = 120) {
    long den = 2 + long(rng() % std::uint64_t(max_den - 1));
    std::vector<long> cuts{0, den};
    for (int i = 0; i < kNumAtoms - 1; ++i) cuts.push_back(long(rng() % std::uint64_t(den + 1)));
    std::sort(cuts.begin(), cuts.end());
    std::array<Rational, kNumAtoms> atoms;
    for (int a = 0; a < kNumAtoms; ++a) atoms[a] = Rational(cuts[a + 1] - cuts[a], den);
    return make_table(std::move(atoms));
}

inline Rational random_unit_rational(std::mt19937_64& rng, long max_den = 120) {
    long den = 3 + long(rng() % std::uint64_t(max_den - 2));
    long num = 1 + long(rng() % std::uint64_t(den - 1));
    return Rational(num, den);
}

/// Rejection-samples a rational point of the support-constrained model.
inline ParamPoint random_t1_point(std::mt19937_64& rng) {
    for (;;) {
        ParamPoint pt{random_unit_rational(rng), random_unit_rational(rng), random_unit_rational(rng)};
        if (membership_T1(pt)) return pt;
    }
}

/// Relabels the two states of one variable.
inline JointTable flip_variable(const JointTable& t, int var) {
    std::array<Rational, kNumAtoms> atoms;
    for (int a = 0; a < kNumAtoms; ++a) atoms[a ^ (1 << (3 - var))] = t.atom(a);
    return make_table(std::move(atoms));
}

inline JointTable uniform_independent_bits() {
    std::array<Rational, kNumAtoms> atoms;
    atoms.fill(Rational(1, 16));
    return make_table(std::move(atoms));
}

}  // namespace testutil
