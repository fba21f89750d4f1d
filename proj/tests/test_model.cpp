#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ingleton/ci.hpp"
#include "ingleton/model.hpp"
#include "helpers.hpp"

using namespace ingleton;
using Catch::Matchers::WithinAbs;

namespace {

// The degree-12 discriminant numerator as displayed, one (coef, a-exp,
// c-exp) triple per term; b- and d-exponents are complementary to 8 and 12.
// Test oracle for the symbolic derivation.
const std::vector<std::array<long long, 3>>& display_terms() {
    static const std::vector<std::array<long long, 3>> terms = {
        {1, 0, 12},  {10, 1, 11},  {-2, 0, 11}, {41, 2, 10}, {-16, 1, 10}, {1, 0, 10},
        {88, 3, 9},  {-46, 2, 9},  {6, 1, 9},   {104, 4, 8}, {-44, 3, 8},  {11, 2, 8},
        {64, 5, 7},  {44, 4, 7},   {2, 3, 7},   {-2, 2, 7},  {16, 6, 6},   {136, 5, 6},
        {-6, 4, 6},  {-14, 3, 6},  {112, 6, 5}, {26, 5, 5},  {-42, 4, 5},  {32, 7, 4},
        {68, 6, 4},  {-70, 5, 4},  {1, 4, 4},   {56, 7, 3},  {-68, 6, 3},  {4, 5, 3},
        {16, 8, 2},  {-36, 7, 2},  {6, 6, 2},   {-8, 8, 1},  {4, 7, 1},    {1, 8, 0}};
    return terms;
}

Integer display_value(const Integer& a, const Integer& b, const Integer& c, const Integer& d) {
    Integer out = 0;
    for (const auto& [coef, i, j] : display_terms()) {
        Integer t = coef;
        t *= boost::multiprecision::pow(a, unsigned(i));
        t *= boost::multiprecision::pow(b, unsigned(8 - i));
        t *= boost::multiprecision::pow(c, unsigned(j));
        t *= boost::multiprecision::pow(d, unsigned(12 - j));
        out += t;
    }
    return out;
}

}  // namespace

TEST_CASE("parametrization reproduces the reference table", "[model]") {
    ParamPoint pt{Rational(10, 693), Rational(2, 99), Rational(2, 11)};
    JointTable t = param_to_table(pt);
    CHECK(t == paper_example());
    // derived quantities along the way
    CHECK(t.atom("1001") == Rational(40, 99));
    CHECK(t.atom("0101") == Rational(4, 99));
}

TEST_CASE("model membership", "[model]") {
    CHECK(membership_T1(ParamPoint{Rational(10, 693), Rational(2, 99), Rational(2, 11)}));
    CHECK_FALSE(membership_T1(ParamPoint{Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
    CHECK_FALSE(membership_T1(ParamPoint{Rational(3, 2), Rational(1, 4), Rational(1, 4)}));
    CHECK(membership_T1(ParamPoint{Rational(1, 16), Rational(1, 16), Rational(1, 16)}));
    CHECK_THROWS_AS(param_to_table(ParamPoint{Rational(1, 2), Rational(1, 2), Rational(1, 2)}),
                    OutsideModel);
}

TEST_CASE("parametrized tables satisfy the defining CI statements", "[model]") {
    std::mt19937_64 rng(11);
    const CIStatement xz_u(VarX, VarZ, var_bit(VarU)), yu_z(VarY, VarU, var_bit(VarZ)),
        zu_xy(VarZ, VarU, var_bit(VarX) | var_bit(VarY));
    for (int n = 0; n < 25; ++n) {
        JointTable t = param_to_table(testutil::random_t1_point(rng));
        CHECK(holds_exact(t, xz_u));
        CHECK(holds_exact(t, yu_z));
        CHECK(holds_exact(t, zu_xy));
    }
}

TEST_CASE("independence constraint residual", "[model]") {
    CHECK(xy_constraint_residual(ParamPoint{Rational(10, 693), Rational(2, 99), Rational(2, 11)}) == 0);
    CHECK(xy_constraint_residual(ParamPoint{Rational(1, 6), Rational(1, 160), Rational(1, 8)}) ==
          Rational(-13063303, 3774873600000));

    // residual zero iff the image table satisfies X_|_Y
    std::mt19937_64 rng(5);
    const CIStatement xy(VarX, VarY, 0);
    for (int n = 0; n < 50; ++n) {
        ParamPoint pt = testutil::random_t1_point(rng);
        CHECK((xy_constraint_residual(pt) == 0) == holds_exact(param_to_table(pt), xy));
    }
}

TEST_CASE("discriminant numerator matches the displayed polynomial", "[model]") {
    CHECK(discriminant_numerator(2, 99, 2, 11) == Integer("937129691803487846400"));
    CHECK(isqrt(Integer("937129691803487846400")) == Integer("30612574080"));
    CHECK(is_perfect_square(Integer("937129691803487846400")));
    CHECK_FALSE(is_perfect_square(Integer(2)));

    // coefficient-by-coefficient agreement of the symbolic expansion
    const Poly<2>& dp = discriminant_poly();
    CHECK(dp.terms.size() == display_terms().size());
    for (const auto& [coef, i, j] : display_terms())
        CHECK(dp.coefficient({int(i), int(j)}) == coef);
    CHECK(dp.degree_in(0) == 8);
    CHECK(dp.degree_in(1) == 12);

    // and on 100 random integer tuples
    std::mt19937_64 rng(17);
    for (int n = 0; n < 100; ++n) {
        Integer b = 2 + rng() % 200, d = 2 + rng() % 200;
        Integer a = 1 + rng() % (b.convert_to<unsigned long long>() - 1);
        Integer c = 1 + rng() % (d.convert_to<unsigned long long>() - 1);
        CHECK(discriminant_numerator(a, b, c, d) == display_value(a, b, c, d));
    }
}

TEST_CASE("discriminant denominator is the square (b^4 d^6)^2", "[model]") {
    std::mt19937_64 rng(23);
    for (int n = 0; n < 30; ++n) {
        long b = 2 + long(rng() % 60), d = 2 + long(rng() % 60);
        long a = 1 + long(rng() % (b - 1)), c = 1 + long(rng() % (d - 1));
        Rational y(a, b), z(c, d);
        std::array<Rational, 2> yz{y, z};
        Rational disc = discriminant_poly().eval(yz);
        Integer b4d6 = boost::multiprecision::pow(denominator(y), 4) *
                       boost::multiprecision::pow(denominator(z), 6);
        CHECK(disc == Rational(discriminant_numerator(numerator(y), denominator(y), numerator(z),
                                                      denominator(z)),
                               b4d6 * b4d6));
    }
}

TEST_CASE("quadratic solution at the found point", "[model]") {
    P0110Solution sol = solve_p0110(Rational(2, 99), Rational(2, 11));
    CHECK(sol.disc_num == Integer("937129691803487846400"));
    REQUIRE(sol.exact);
    REQUIRE(sol.roots.size() == 2);
    CHECK(sol.roots[0] == Rational(10, 693));
    CHECK(sol.roots[1] == Rational(40, 99));
    REQUIRE(sol.f.has_value());
    CHECK(*sol.f == Rational(10, 693));  // both roots lie in the model; the smaller is f

    // roots == rational_part +- sqrt_multiple * sqrt(disc_num)
    Rational spread = sol.sqrt_multiple * Rational(isqrt(sol.disc_num));
    CHECK(sol.roots[0] + sol.roots[1] == 2 * sol.rational_part);
    CHECK(sol.roots[1] - sol.roots[0] == 2 * spread);

    // substituting the roots back kills the residual
    for (const Rational& r : sol.roots)
        CHECK(xy_constraint_residual(ParamPoint{r, Rational(2, 99), Rational(2, 11)}) == 0);
}

TEST_CASE("quadratic solution error cases", "[model]") {
    CHECK_THROWS_AS(solve_p0110(Rational(1, 2), Rational(0)), DegenerateQuadratic);
    CHECK_THROWS_AS(solve_p0110(Rational(1, 30), Rational(1, 15)), NegativeDiscriminant);
}

TEST_CASE("rational counterexample search", "[model]") {
    std::vector<SearchCandidate> found = search_rational(default_search_bounds(), 2);
    bool hit = false;
    for (const SearchCandidate& c : found) {
        CHECK(c.certificate.sign == -1);
        // the model equations plus the vanishing residual force all four statements
        CHECK(structure_L().subset_of(ci_structure(c.table)));
        if (c.a == 2 && c.b == 99 && c.c == 2 && c.d == 11 && c.p0110 == Rational(10, 693)) {
            hit = true;
            CHECK(c.table == paper_example());
        }
    }
    CHECK(hit);
    // candidates are sorted by (b, d, a, c)
    for (size_t i = 1; i < found.size(); ++i)
        CHECK(std::tie(found[i - 1].b, found[i - 1].d, found[i - 1].a, found[i - 1].c) <=
              std::tie(found[i].b, found[i].d, found[i].a, found[i].c));
}

TEST_CASE("non-Ingleton scores", "[model]") {
    const JointTable& t = paper_example();
    CHECK_THAT(score(t, Score::Rho2), WithinAbs(0.00757886, 1e-6));
    CHECK_THAT(score(t, Score::Rho1) - score(t, Score::Rho2), WithinAbs(0.0, 1e-12));

    // rho1 equals -box on the model (the first rearrangement under its CI set)
    std::mt19937_64 rng(31);
    for (int n = 0; n < 20; ++n) {
        JointTable m = param_to_table(testutil::random_t1_point(rng));
        CHECK_THAT(score(m, Score::Rho1) + eval(ingleton_xyzu(), entropy_vector(m)),
                   WithinAbs(0.0, 1e-10));
    }

    ParamPoint opt{parse_rational("36179/100000"), parse_rational("1463/100000"),
                   parse_rational("27455/100000")};
    CHECK_THAT(score(opt, Score::Rho1), WithinAbs(0.0198, 2e-4));
}

TEST_CASE("heatmap classification", "[model]") {
    auto [status, sc] = classify_point(2.0 / 11, 2.0 / 99);
    CHECK(status == CellStatus::Pos);
    CHECK_THAT(sc, WithinAbs(0.00757886, 1e-6));

    auto [bad, nan_score] = classify_point(1.0 / 15, 1.0 / 30);  // negative discriminant
    CHECK(bad == CellStatus::Invalid);
    CHECK(std::isnan(nan_score));

    std::vector<HeatmapCell> grid = heatmap(0.02, 0.5, 0.002, 0.05, 9, 2);
    CHECK(grid.size() == 81);
    std::string csv = heatmap_csv(grid);
    CHECK(csv.rfind("p1111,p1011,status,score\n", 0) == 0);
    bool any_pos = false, any_invalid = false;
    for (const HeatmapCell& c : grid) {
        any_pos = any_pos || c.status == CellStatus::Pos;
        any_invalid = any_invalid || c.status == CellStatus::Invalid;
    }
    CHECK(any_pos);
    CHECK(any_invalid);
}

TEST_CASE("score optimization", "[model]") {
    OptimizeResult max = optimize_score(ParamPointF{1.0 / 16, 1.0 / 16, 1.0 / 16}, Score::Rho1,
                                        OptimizeMode::Max);
    CHECK(max.value >= 0.019);
    CHECK_THAT(max.value, WithinAbs(0.0198, 0.002));

    Box3 box = score_box();
    OptimizeResult min = optimize_score(
        ParamPointF{(box.lo[0] + box.hi[0]) / 2, (box.lo[1] + box.hi[1]) / 2, (box.lo[2] + box.hi[2]) / 2},
        Score::Rho1, OptimizeMode::Min, box);
    CHECK(min.value > 0.0);

    CHECK_THROWS_AS(optimize_score(ParamPointF{0.9, 0.9, 0.9}, Score::Rho1, OptimizeMode::Max),
                    StartOutsideRegion);

    // a constant objective converges to the start point
    NelderMead<3> nm;
    auto [pt, val] = nm.minimize([](const std::array<double, 3>&) { return 7.0; },
                                 {0.25, 0.25, 0.25});
    CHECK(val == 7.0);
    CHECK_THAT(pt[0], WithinAbs(0.25, 1e-6));
}
