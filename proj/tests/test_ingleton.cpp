#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ingleton/circuits.hpp"
#include "ingleton/ingleton_expr.hpp"

using namespace ingleton;

TEST_CASE("ingleton functional coefficients", "[ingleton]") {
    LinFunctional box = ingleton_xyzu();
    const VarSet X = var_bit(VarX), Y = var_bit(VarY), Z = var_bit(VarZ), U = var_bit(VarU);
    CHECK(box[X | Z] == 1);
    CHECK(box[X | U] == 1);
    CHECK(box[Y | Z] == 1);
    CHECK(box[Y | U] == 1);
    CHECK(box[Z | U] == 1);
    CHECK(box[X | Y] == -1);
    CHECK(box[Z] == -1);
    CHECK(box[U] == -1);
    CHECK(box[X | Z | U] == -1);
    CHECK(box[Y | Z | U] == -1);
    int nonzero = 0;
    for (int i = 0; i < kNumSubsets; ++i) nonzero += box.coeff[i] != 0;
    CHECK(nonzero == 10);
}

TEST_CASE("labels are invariant under pair swaps", "[ingleton]") {
    CHECK(ingleton_functional(IngletonLabels(VarY, VarX, VarU, VarZ)) == ingleton_xyzu());
    CHECK(all_ingleton_labels().size() == 6);
    std::set<std::array<int, kNumSubsets>> distinct;
    for (const IngletonLabels& L : all_ingleton_labels()) distinct.insert(ingleton_functional(L).coeff);
    CHECK(distinct.size() == 6);
}

TEST_CASE("mask identities verify exactly", "[ingleton]") {
    for (const MaskIdentity& id : mask_identities()) {
        INFO(id.label);
        CHECK(id.verify());
    }

    // a perturbed identity must fail
    MaskIdentity m1 = mask_identities()[0];
    m1.rhs[3].coeff = +1;  // flip the sign of the negative term
    CHECK_FALSE(m1.verify());
}

TEST_CASE("score rearrangements are exact coefficient identities", "[ingleton]") {
    auto [l1, r1] = score1_rearrangement();
    CHECK(l1 == r1);
    auto [l2, r2] = score2_rearrangement();
    CHECK(l2 == r2);
}

TEST_CASE("functional matrix shape and content", "[ingleton]") {
    FunctionalMatrix m = functional_matrix();
    REQUIRE(m.rows.size() == 16);
    REQUIRE(m.rows[0].size() == 25);
    LinFunctional box = ingleton_xyzu();
    for (int r = 0; r < kNumSubsets; ++r) CHECK(m.rows[r][kIngletonColumn] == box.coeff[r]);
    for (const auto& row : m.rows)
        for (long long v : row) CHECK((v >= -1 && v <= 1));
    CHECK(matrix_rank(m.rows) == 11);
}

TEST_CASE("circuits of small matrices", "[ingleton]") {
    // identity matrix: no dependencies at all
    IntMatrix id = {{1, 0}, {0, 1}};
    CHECK(circuits(id).empty());

    // duplicated column: one circuit of support 2
    IntMatrix dup = {{1, 2, 1}, {0, 3, 0}};
    std::vector<Circuit> cs = circuits(dup);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].coeffs == std::vector<long long>{1, 0, -1});

    // zero column: a singleton circuit
    IntMatrix zero = {{1, 0}, {2, 0}};
    cs = circuits(zero);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].coeffs == std::vector<long long>{0, 1});

    // 2x3 full-rank-2 generic matrix: every 3-subset minimally dependent
    IntMatrix generic = {{1, 0, 1}, {0, 1, 1}};
    cs = circuits(generic);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].coeffs == std::vector<long long>{1, 1, -1});

    // scaling: kernel vectors are made coprime with positive lead
    IntMatrix scaled = {{2, 4}, {6, 12}};
    cs = circuits(scaled);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].coeffs == std::vector<long long>{2, -1});
}

TEST_CASE("circuit invariants on a mid-size matrix", "[ingleton]") {
    // first 10 columns of the functional matrix
    FunctionalMatrix fm = functional_matrix();
    IntMatrix m(fm.rows.size());
    for (size_t r = 0; r < fm.rows.size(); ++r)
        m[r] = std::vector<long long>(fm.rows[r].begin(), fm.rows[r].begin() + 10);
    std::vector<Circuit> cs = circuits(m);
    REQUIRE(!cs.empty());
    for (const Circuit& c : cs) {
        // kernel property
        for (size_t r = 0; r < m.size(); ++r) {
            long long dot = 0;
            for (size_t j = 0; j < m[r].size(); ++j) dot += m[r][j] * c.coeffs[j];
            CHECK(dot == 0);
        }
        // canonical form
        long long g = 0, lead = 0;
        for (long long x : c.coeffs) {
            g = std::gcd(g, x);
            if (lead == 0) lead = x;
        }
        CHECK(g == 1);
        CHECK(lead > 0);
    }
    // inclusion-minimality of supports
    for (const Circuit& a : cs)
        for (const Circuit& b : cs)
            if (a.support != b.support) CHECK((a.support & b.support) != a.support);
    // threading does not change the result
    CHECK(circuits(m, 4) == cs);

    // these columns never touch the Ingleton column, so no masks arise
    CHECK_THROWS_AS(shortest_masks(cs), NoIngletonColumn);
}

namespace {

// reference implementation: a set of columns is a circuit iff it is
// dependent and every proper subset is independent
std::set<std::uint64_t> brute_force_circuit_supports(const IntMatrix& m) {
    const int ncols = int(m[0].size());
    auto rank_of = [&](std::uint64_t sel) {
        IntMatrix sub(m.size());
        for (size_t r = 0; r < m.size(); ++r)
            for (int j = 0; j < ncols; ++j)
                if (sel >> j & 1) sub[r].push_back(m[r][j]);
        return matrix_rank(sub);
    };
    std::set<std::uint64_t> out;
    for (std::uint64_t sel = 1; sel < (1ull << ncols); ++sel) {
        int size = std::popcount(sel);
        if (rank_of(sel) == size) continue;  // independent
        bool minimal = true;
        for (int j = 0; j < ncols && minimal; ++j)
            if (sel >> j & 1) {
                std::uint64_t sub = sel & ~(1ull << j);
                minimal = std::popcount(sub) == rank_of(sub);
            }
        if (minimal) out.insert(sel);
    }
    return out;
}

}  // namespace

TEST_CASE("enumeration agrees with brute force on random matrices", "[ingleton]") {
    std::mt19937_64 rng(271828);
    for (int trial = 0; trial < 40; ++trial) {
        int nrows = 2 + int(rng() % 4), ncols = 3 + int(rng() % 6);
        IntMatrix m(nrows, std::vector<long long>(ncols));
        for (auto& row : m)
            for (long long& v : row) v = (long long)(rng() % 5) - 2;
        std::vector<Circuit> cs = circuits(m);
        std::set<std::uint64_t> got;
        for (const Circuit& c : cs) {
            got.insert(c.support);
            for (int r = 0; r < nrows; ++r) {
                long long dot = 0;
                for (int j = 0; j < ncols; ++j) dot += m[r][j] * c.coeffs[j];
                REQUIRE(dot == 0);
            }
        }
        REQUIRE(got.size() == cs.size());
        CHECK(got == brute_force_circuit_supports(m));
    }
}

TEST_CASE("csv export lists nonzero columns in order", "[ingleton]") {
    Circuit c;
    c.coeffs = {1, 0, -2};
    c.support = 0b101;
    CHECK(circuit_csv_line(c, {"a", "b", "c"}) == "a:1,c:-2");
}
