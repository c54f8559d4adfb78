#include "support.hpp"

#include "nsac/errors.hpp"
#include "nsac/potential.hpp"

using namespace nsac;

TEST_CASE("quartic well values") {
    const DoubleWell w = quartic_well();
    CHECK(w.eval_F(1.0) == 0.0);
    CHECK(w.eval_F(-1.0) == 0.0);
    CHECK(w.eval_F(0.0) == 0.25);
    CHECK(w.eval_Fprime(0.0) == 0.0);
    CHECK(w.eval_Fprime(2.0) == 6.0);
    CHECK(w.lipschitz_constant() == 11.0);
    CHECK_NOTHROW(validate_well(w));
}

TEST_CASE("narrow interval gives L = 2") {
    const DoubleWell w = quartic_well(-1.0, 1.0);
    CHECK(w.lipschitz_constant() == 2.0);
    // The wells sit on the endpoints, which the strict ordering rejects.
    CHECK_THROWS_AS(validate_well(w), ValidationError);
    CHECK_THROWS_AS(quartic_well(-0.5, 2.0), ValidationError);
    CHECK_THROWS_AS(make_well("log", -2.0, 2.0), ValidationError);
    CHECK(make_well("quartic", -3.0, 3.0).lipschitz_constant() == 26.0);
}

TEST_CASE("derivative matches central differences of F") {
    const DoubleWell w = quartic_well();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(w.f1 - 1.0, w.f2 + 1.0);
    const double h = 1e-6;
    for (int i = 0; i < 1000; ++i) {
        const double c = d(rng);
        const double fd = (w.eval_F(c + h) - w.eval_F(c - h)) / (2 * h);
        const double exact = w.eval_Fprime(c);
        CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("sampled Lipschitz quotient stays below L") {
    for (auto [f1, f2] : {std::pair{-2.0, 2.0}, std::pair{-1.0, 1.0}, std::pair{-1.5, 3.0}}) {
        const DoubleWell w = quartic_well(f1, f2);
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> d(f1, f2);
        double sup = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double a = d(rng), b = d(rng);
            if (a == b) continue;
            sup = std::max(sup, std::abs(w.eval_Fprime(a) - w.eval_Fprime(b)) / std::abs(a - b));
        }
        CHECK(sup <= w.lipschitz_constant());
        CHECK(sup >= 0.8 * w.lipschitz_constant());
    }
}

TEST_CASE("extension keeps F' globally Lipschitz") {
    const DoubleWell w = quartic_well();
    for (double c : {-10.0, -5.0, 5.0, 10.0}) {
        const double q = std::abs(w.eval_Fprime(c) - w.eval_Fprime(c > 0 ? 2.0 : -2.0)) / (std::abs(c) - 2.0);
        CHECK(q == doctest::Approx(11.0));
    }
    // continuity at the endpoints
    CHECK(w.eval_F(2.0 + 1e-12) == doctest::Approx(w.eval_F(2.0)));
    CHECK(w.eval_Fprime(-2.0 - 1e-12) == doctest::Approx(w.eval_Fprime(-2.0)));
}

TEST_CASE("F is nonnegative and monotone outside the wells") {
    const DoubleWell w = quartic_well();
    for (double c = w.f1 - 1.0; c <= w.f2 + 1.0; c += 1e-3) {
        CHECK(w.eval_F(c) >= 0.0);
        if (c < w.y1 - 1e-9) CHECK(w.eval_Fprime(c) < 0.0);
        if (c > w.y2 + 1e-9) CHECK(w.eval_Fprime(c) > 0.0);
    }
    CHECK(std::abs(w.eval_Fprime(w.y1)) <= 1e-12);
    CHECK(std::abs(w.eval_Fprime(w.y2)) <= 1e-12);
}

TEST_CASE("validate_well catches broken records") {
    DoubleWell w = quartic_well();
    w.y1 = -0.5;
    CHECK_THROWS_AS(validate_well(w), ValidationError);
    w = quartic_well();
    w.lipschitz = 0.0;
    CHECK_THROWS_AS(validate_well(w), ValidationError);
    w = quartic_well();
    w.f2 = 0.9;
    CHECK_THROWS_AS(validate_well(w), ValidationError);
}
