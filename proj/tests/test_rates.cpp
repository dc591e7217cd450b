#include <cmath>
#include <random>

#include <doctest.h>

#include "cascade/rates.hpp"
#include "support/generators.hpp"

using namespace cascade;

TEST_CASE("derive: documented values") {
    {
        RateParams p{.gamma1 = 0.5, .gamma3 = 0.5, .gamma2 = 1.0, .gamma4 = 1.0};
        const auto d = derive(p);
        CHECK(d.gamma == 1.0);
        CHECK(d.a0 == 2.0);
        CHECK(d.gamma_a == 0.0);
        CHECK(d.a_mix == 0.0);
    }
    {
        RateParams p{.gamma1 = 0.5, .gamma3 = 0.5, .gamma2 = 1.0, .gamma4 = 1.0,
                     .gamma_ab = 2.0, .gamma_ba = 2.0};
        const auto d = derive(p);
        CHECK(d.a0 == 6.0);
        CHECK(d.gamma_a == 0.0);
        CHECK(d.a_mix == 4.0);
    }
    {
        RateParams p{.gamma1 = 0.5, .gamma3 = 0.5, .gamma2 = 1.0, .gamma4 = 3.0,
                     .gamma_ab = 1.0, .gamma_ba = 0.0};
        const auto d = derive(p);
        CHECK(d.gamma_a == 3.0);
        CHECK(d.a_mix == 3.0);
        CHECK(d.a0 == 5.0);
    }
}

TEST_CASE("derive rejects invalid rates naming the field") {
    RateParams p{.gamma1 = 0.5, .gamma3 = 0.5, .gamma2 = 1.0};
    p.gamma4 = -1.0;
    try {
        derive(p);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "gamma4");
    }
    RateParams dead{.gamma1 = 0.0, .gamma3 = 0.0, .gamma2 = 1.0};
    CHECK_THROWS_AS(derive(dead), ValidationError);
    RateParams nan{.gamma1 = 1.0, .delta = std::nan("")};
    CHECK_THROWS_AS(derive(nan), ValidationError);
    // negative splitting is physical
    RateParams neg{.gamma1 = 1.0, .delta = -3.0};
    CHECK_NOTHROW(derive(neg));
}

TEST_CASE("a0^2 - A^2 identity and ordering invariants") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 1000; ++i) {
        const auto p = testing::random_params(rng);
        const auto d = derive(p);
        const double lhs = d.a0 * d.a0 - d.a_mix * d.a_mix;
        const double rhs = 4.0 * (p.gamma2 * p.gamma4 + p.gamma2 * p.gamma_ab + p.gamma4 * p.gamma_ba);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * d.a0 * d.a0);
        CHECK(d.gap_product == doctest::Approx(rhs).epsilon(1e-15));
        CHECK(d.a0 > d.a_mix);
        CHECK(d.a_mix >= std::abs(d.gamma_a));
    }
}

TEST_CASE("derive is scale covariant") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.01, 100.0);
    for (int i = 0; i < 200; ++i) {
        const auto p = testing::random_params(rng);
        const double s = u(rng);
        RateParams q = p;
        q.gamma1 *= s;
        q.gamma3 *= s;
        q.gamma2 *= s;
        q.gamma4 *= s;
        q.gamma_ab *= s;
        q.gamma_ba *= s;
        const auto a = derive(p);
        const auto b = derive(q);
        CHECK(b.gamma == doctest::Approx(s * a.gamma).epsilon(1e-14));
        CHECK(b.a0 == doctest::Approx(s * a.a0).epsilon(1e-14));
        CHECK(std::abs(b.gamma_a - s * a.gamma_a) <= 1e-13 * s * a.a0);
        CHECK(b.a_mix == doctest::Approx(s * a.a_mix).epsilon(1e-13));
    }
}

TEST_CASE("normalize_to_gamma divides by gamma and is idempotent") {
    RateParams p{.gamma1 = 1.0, .gamma3 = 1.0, .gamma2 = 2.0, .gamma4 = 4.0, .gamma_ab = 1.0,
                 .gamma_ba = 0.5, .delta = 6.0, .pump_rate = 0.2};
    const auto n = normalize_to_gamma(p);
    CHECK(n.gamma1 == 0.5);
    CHECK(n.gamma3 == 0.5);
    CHECK(n.gamma2 == 1.0);
    CHECK(n.gamma4 == 2.0);
    CHECK(n.gamma_ab == 0.5);
    CHECK(n.gamma_ba == 0.25);
    CHECK(n.delta == 3.0);
    CHECK(n.pump_rate == 0.1);
    CHECK(normalize_to_gamma(n) == n);

    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        auto q = testing::random_params(rng);
        q.gamma1 *= 3.7;
        const auto once = normalize_to_gamma(q);
        CHECK(derive(once).gamma == doctest::Approx(1.0).epsilon(1e-15));
        const auto twice = normalize_to_gamma(once);
        CHECK(twice.gamma2 == doctest::Approx(once.gamma2).epsilon(1e-15));
        CHECK(twice.delta == doctest::Approx(once.delta).epsilon(1e-15));
    }
}

TEST_CASE("JSON ingestion") {
    const auto doc = nlohmann::json::parse(R"({"gamma1": 0.5, "gamma3": 0.5, "gamma2": 1,
                                               "gamma_ab": 0.25, "delta": -2})");
    const auto p = params_from_json(doc);
    CHECK(p.gamma1 == 0.5);
    CHECK(p.gamma2 == 1.0);
    CHECK(p.gamma4 == 0.0);
    CHECK(p.gamma_ab == 0.25);
    CHECK(p.gamma_ba == 0.0);
    CHECK(p.delta == -2.0);
    CHECK(p.pump_rate == 0.0);
    CHECK(params_from_json(params_to_json(p)) == p);

    CHECK_THROWS_AS(params_from_json(nlohmann::json::parse(R"({"gamma1": 1})")), ValidationError);
    CHECK_THROWS_AS(params_from_json(nlohmann::json::parse(R"({"gamma1": 1, "gamma3": 0, "Gamma2": 1})")),
                    ValidationError);
    CHECK_THROWS_AS(params_from_json(nlohmann::json::parse(R"({"gamma1": 1, "gamma3": "x"})")),
                    ValidationError);
    CHECK_THROWS_AS(params_from_json(nlohmann::json::parse(R"({"gamma1": -1, "gamma3": 0})")),
                    ValidationError);
    CHECK_THROWS_AS(params_from_json(nlohmann::json::parse("[1, 2]")), ValidationError);
}
