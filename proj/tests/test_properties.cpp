#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ingleton/ci.hpp"
#include "ingleton/entropy.hpp"
#include "ingleton/ingleton_expr.hpp"
#include "helpers.hpp"

using namespace ingleton;

// Cross-module checks on random rational tables; the acceptance suite runs
// the same properties at full scale.

TEST_CASE("entropy vectors are polymatroids", "[properties]") {
    std::mt19937_64 rng(1);
    for (int n = 0; n < 200; ++n)
        CHECK(is_polymatroid(entropy_vector(testutil::random_table(rng)), 1e-9));
}

TEST_CASE("conditional mutual information is non-negative, zero iff CI", "[properties]") {
    std::mt19937_64 rng(2);
    for (int n = 0; n < 60; ++n) {
        JointTable t = testutil::random_table(rng, 60);
        for (const CIStatement& s : enumerate_elementary()) {
            SignCertificate cert = exact_sign(delta_functional(s), t);
            CHECK(cert.sign >= 0);
            CHECK((cert.sign == 0) == holds_exact(t, s));
        }
    }
}

TEST_CASE("float sign agrees with the exact sign away from zero", "[properties]") {
    std::mt19937_64 rng(3);
    std::vector<LinFunctional> fns = {ingleton_xyzu()};
    for (const CIStatement& s : enumerate_elementary()) fns.push_back(delta_functional(s));
    for (int n = 0; n < 40; ++n) {
        JointTable t = testutil::random_table(rng, 60);
        EntropyVector h = entropy_vector(t);
        for (const LinFunctional& f : fns) {
            double v = eval(f, h);
            if (std::abs(v) > 1e-9)
                CHECK((v > 0 ? 1 : -1) == exact_sign(f, t).sign);
        }
    }
}
