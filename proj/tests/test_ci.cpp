#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <tuple>

#include "ingleton/ci.hpp"
#include "ingleton/essential.hpp"
#include "helpers.hpp"

using namespace ingleton;

TEST_CASE("enumeration of elementary statements", "[ci]") {
    const auto& all = enumerate_elementary();
    REQUIRE(all.size() == 24);
    // sorted by (i, j, K-mask)
    for (int n = 1; n < kNumStatements; ++n) {
        auto key = [](const CIStatement& s) { return std::tuple(s.i, s.j, s.K); };
        CHECK(key(all[n - 1]) < key(all[n]));
    }
    CIStatement xy_zu(VarX, VarY, var_bit(VarZ) | var_bit(VarU));
    CHECK(std::count(all.begin(), all.end(), xy_zu) == 1);
    CIStatement zu_xy(VarZ, VarU, var_bit(VarX) | var_bit(VarY));
    CHECK(std::count(all.begin(), all.end(), zu_xy) == 1);
}

TEST_CASE("statement strings round-trip", "[ci]") {
    CHECK(CIStatement(VarX, VarZ, var_bit(VarU)).str() == "X⊥Z|U");
    CHECK(CIStatement(VarX, VarY, 0).str() == "X⊥Y|");
    for (const CIStatement& s : enumerate_elementary()) CHECK(statement_from_str(s.str()) == s);
    CHECK(statement_from_str("X⊥Y") == CIStatement(VarX, VarY, 0));  // bar optional on parse
}

TEST_CASE("delta functionals", "[ci]") {
    LinFunctional f = delta_functional(CIStatement(VarX, VarY, 0));
    CHECK(f[var_bit(VarX)] == 1);
    CHECK(f[var_bit(VarY)] == 1);
    CHECK(f[var_bit(VarX) | var_bit(VarY)] == -1);
    CHECK(f[0] == -1);

    LinFunctional g = delta_functional(CIStatement(VarX, VarZ, var_bit(VarU)));
    CHECK(g[var_bit(VarX) | var_bit(VarU)] == 1);
    CHECK(g[var_bit(VarZ) | var_bit(VarU)] == 1);
    CHECK(g[var_bit(VarX) | var_bit(VarZ) | var_bit(VarU)] == -1);
    CHECK(g[var_bit(VarU)] == -1);

    for (const CIStatement& s : enumerate_elementary()) {
        LinFunctional d = delta_functional(s);
        int nonzero = 0, total = 0;
        for (int i = 0; i < kNumSubsets; ++i) {
            nonzero += d.coeff[i] != 0;
            total += d.coeff[i];
        }
        CHECK(nonzero == 4);
        CHECK(total == 0);
    }
}

TEST_CASE("exact CI test on the reference distribution", "[ci]") {
    const JointTable& t = paper_example();
    CIStatement zu_xy(VarZ, VarU, var_bit(VarX) | var_bit(VarY));
    CHECK(holds_exact(t, zu_xy));
    // the defining products of Z_|_U|XY
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            auto p = [&](int k, int l) {
                return t.atom(8 * i + 4 * j + 2 * k + l);
            };
            CHECK(p(0, 0) * p(1, 1) == p(0, 1) * p(1, 0));
        }
    CHECK_FALSE(holds_exact(t, CIStatement(VarX, VarU, 0)));
}

TEST_CASE("ci_structure of known tables", "[ci]") {
    CHECK(ci_structure(paper_example()) == structure_L());

    CIStructure all_ind = ci_structure(testutil::uniform_independent_bits());
    CHECK(all_ind.size() == 24);

    // two independent uniform bits and two constants
    std::array<Rational, kNumAtoms> atoms{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) atoms[8 * i + 4 * j] = Rational(1, 4);
    CHECK(ci_structure(make_table(atoms)).size() == 24);

    // the eps = 0 endpoint of the witness curve satisfies both assumptions
    CIStructure limit = ci_structure(limit_table(reference_family()));
    CHECK(limit.contains(CIStatement(VarX, VarZ, var_bit(VarU))));
    CHECK(limit.contains(CIStatement(VarY, VarZ, var_bit(VarU))));
}

TEST_CASE("structure string serialization", "[ci]") {
    CIStructure l = structure_L();
    std::vector<std::string> strs = l.strings();
    REQUIRE(strs.size() == 4);
    CHECK(strs[0] == "X⊥Y|");
    CHECK(structure_from_strings(strs) == l);
}

TEST_CASE("ci_structure invariant under state relabeling", "[ci]") {
    std::mt19937_64 rng(41);
    for (int n = 0; n < 25; ++n) {
        JointTable t = testutil::random_table(rng);
        int var = int(rng() % 4);
        CHECK(ci_structure(t) == ci_structure(testutil::flip_variable(t, var)));
    }
    for (int var = 0; var < 4; ++var)
        CHECK(ci_structure(paper_example()) ==
              ci_structure(testutil::flip_variable(paper_example(), var)));
}

TEST_CASE("variable permutations act on statements", "[ci]") {
    VarPerm swap_xy{VarY, VarX, VarZ, VarU};
    CHECK(apply_permutation(CIStatement(VarX, VarZ, var_bit(VarU)), swap_xy) ==
          CIStatement(VarY, VarZ, var_bit(VarU)));
    CHECK(apply_permutation(CIStatement(VarX, VarY, var_bit(VarZ)), swap_xy) ==
          CIStatement(VarX, VarY, var_bit(VarZ)));
}
