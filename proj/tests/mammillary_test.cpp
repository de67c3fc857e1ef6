#include <doctest.h>

#include <cmath>
#include <random>

#include "mamreal/mammillary.hpp"
#include "oracles.hpp"

using namespace mamreal;

namespace {

// Inner three-compartment transfer function of the printed PK-PD example:
// the numerator divided by its gain, the denominator deflated by the
// fastest pole.
TransferFunctiond inner_three() {
    return TransferFunctiond::normalize(
        Polynomiald{1, 0.0011713169642857144, 6.517857142857143e-08},
        Polynomiald{1, 0.0083553766622446873, 5.4318704110700657e-06, 1.9629966223326437e-10});
}

double round4(double x) { return std::round(x * 1e4) / 1e4; }

bool has_failure(const ConditionReport<double>& r, const std::string& id) {
    const auto* e = r.find(id);
    return e != nullptr && e->status == Status::Fail;
}

}  // namespace

TEST_CASE("three-compartment example") {
    const auto h = inner_three();
    const auto r = check_conditions(h);
    CHECK(r.verdict == Verdict::UniquePositiveRealization);
    const auto r3 = check_conditions3(h);
    CHECK(r3.verdict == Verdict::UniquePositiveRealization);

    const auto* signs = r3.find("alpha_sign_pattern");
    REQUIRE(signs != nullptr);
    REQUIRE(signs->witnesses.size() == 3);
    CHECK(signs->witnesses[0].value > 0);
    CHECK(signs->witnesses[1].value < 0);
    CHECK(signs->witnesses[2].value > 0);

    // Printed to four decimals.
    const auto p = realize(h);
    CHECK(round4(p.k10) == doctest::Approx(0.0030));
    CHECK(round4(p.k_to_center[0]) == doctest::Approx(0.0001));
    CHECK(round4(p.k_to_center[1]) == doctest::Approx(0.0011));
    CHECK(round4(p.k_from_center[0]) == doctest::Approx(0.0015));
    CHECK(round4(p.k_from_center[1]) == doctest::Approx(0.0027));
}

TEST_CASE("realize and realize3 agree") {
    const auto a = realize(inner_three());
    const auto b = realize3(inner_three());
    CHECK(oracle::max_relative_error(b, a) < 1e-12);

    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        const auto h = transfer_function(oracle::random_mammillary(rng, 3));
        CHECK(oracle::max_relative_error(realize3(h), realize(h)) < 1e-12);
    }
}

TEST_CASE("two-compartment example") {
    const auto p = realize(TransferFunctiond::normalize(Polynomiald{1, 1}, Polynomiald{1, 3, 1}));
    CHECK(p.k10 == doctest::Approx(1.0));
    CHECK(p.k_to_center[0] == doctest::Approx(1.0));
    CHECK(p.k_from_center[0] == doctest::Approx(1.0));
    CHECK(build_mammillary(p).A.isApprox((Eigen::Matrix2d() << -2, 1, 1, -1).finished()));
}

TEST_CASE("realization without positivity") {
    const auto h = TransferFunctiond::normalize(Polynomiald{1, -3, 2}, Polynomiald{1, 6, 11, 6});
    const auto r = check_conditions(h);
    CHECK(r.verdict == Verdict::UniqueRealization);
    CHECK(has_failure(r, "numerator_roots_negative"));
    const auto p = realize(h);
    CHECK_FALSE(p.all_positive());
    CHECK(coefficient_residual(transfer_function(p), h) < 1e-8);
}

TEST_CASE("refusals") {
    const Polynomiald den{1, 6, 11, 6};
    SUBCASE("complex numerator roots") {
        const auto h = TransferFunctiond::normalize(Polynomiald{1, 1, 1}, den);
        CHECK(has_failure(check_conditions(h), "numerator_roots_real"));
        CHECK_THROWS_AS(realize(h), ConditionsFailed);
    }
    SUBCASE("root at the origin") {
        const auto h = TransferFunctiond::normalize(Polynomiald{1, 0}, Polynomiald{1, 3, 1});
        CHECK(has_failure(check_conditions(h), "numerator_roots_nonzero"));
    }
    SUBCASE("nearly coincident roots") {
        const auto h = TransferFunctiond::normalize(from_roots({-0.5, -0.5 * (1 + 1e-9)}), den);
        CHECK(has_failure(check_conditions(h), "numerator_roots_simple"));
        try {
            realize(h);
            FAIL("expected ConditionsFailed");
        } catch (const ConditionsFailed& e) {
            CHECK(std::find(e.failed().begin(), e.failed().end(), "numerator_roots_simple") != e.failed().end());
        }
    }
    SUBCASE("wrong order for the closed form") {
        const auto h = TransferFunctiond::normalize(Polynomiald{1, 1, 1, 1}, Polynomiald{1, 1, 1, 1, 1});
        CHECK_THROWS_AS(check_conditions3(h), WrongOrder);
        CHECK_THROWS_AS(realize3(h), WrongOrder);
    }
}

TEST_CASE("flipping the sign of alpha(z2)") {
    // alpha - 2 k12 s (s - z3) keeps alpha(0) and alpha(z3) and negates alpha(z2).
    const auto h = inner_three();
    const auto p = realize3(h);
    const double z3 = -p.k_to_center[1];
    const auto den = h.den() - (2 * p.k_from_center[0]) * Polynomiald{1, -z3, 0};
    const auto flipped = TransferFunctiond::normalize(h.num(), den);
    const auto r = check_conditions3(flipped);
    CHECK(has_failure(r, "alpha_sign_pattern"));
    CHECK(r.verdict == Verdict::UniqueRealization);
    const auto q = realize3(flipped);
    CHECK(q.k_from_center[0] == doctest::Approx(-p.k_from_center[0]).epsilon(1e-9));
    CHECK(q.k_from_center[1] == doctest::Approx(p.k_from_center[1]).epsilon(1e-9));
}

TEST_CASE("order-3 checkers agree") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(-1, 1);
    std::bernoulli_distribution coin(0.5);
    int positive = 0, failed = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        TransferFunctiond h = TransferFunctiond::normalize(Polynomiald{1, 1}, Polynomiald{1, 1, 1, 1});
        if (coin(rng)) {
            auto p = oracle::random_mammillary(rng, 3);
            if (coin(rng)) p.k_from_center[std::size_t(trial % 2)] *= -1;
            if (coin(rng)) p.k10 *= -1;
            h = transfer_function(p);
        } else {
            h = TransferFunctiond::normalize(Polynomiald{1, u(rng), u(rng) * 0.3},
                                             Polynomiald{1, u(rng) + 1, u(rng) * 0.5 + 0.3, u(rng) * 0.1});
        }
        const auto a = check_conditions(h).verdict;
        const auto b = check_conditions3(h).verdict;
        CHECK(a == b);
        positive += a == Verdict::UniquePositiveRealization;
        failed += a != Verdict::UniquePositiveRealization;
    }
    // Both outcomes must be well represented for the comparison to mean anything.
    CHECK(positive > 1000);
    CHECK(failed > 1000);
}

TEST_CASE("positivity verdicts are sound") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 2000; ++trial) {
        auto p = oracle::random_mammillary(rng, 2 + trial % 5);
        if (trial % 3 == 0) p.k_from_center[0] = -p.k_from_center[0];
        if (trial % 5 == 0) p.k10 = -p.k10 * 0.1;
        const auto h = transfer_function(p);
        const auto r = realize_detailed(h);
        if (r.report.verdict == Verdict::UniquePositiveRealization) CHECK(r.params.all_positive());
        if (!r.params.all_positive()) CHECK(r.report.verdict != Verdict::UniquePositiveRealization);
        if (r.report.verdict == Verdict::UniquePositiveRealization && h.order() == 3) {
            const auto poles = h.poles();
            CHECK(poles.all_real());
            for (double v : poles.real_values()) CHECK(v < 0);
        }
    }
}

TEST_CASE("round trip and determinism") {
    std::mt19937_64 rng(59);
    double worst = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = oracle::random_mammillary(rng, 2 + trial % 5);
        const auto h = transfer_function(p);
        const auto a = realize(h);
        const auto b = realize(h);
        CHECK(a.k10 == b.k10);
        CHECK(a.k_to_center == b.k_to_center);
        CHECK(a.k_from_center == b.k_from_center);
        worst = std::max(worst, oracle::max_relative_error(a, p));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("distinct transfer functions give distinct parameters") {
    std::mt19937_64 rng(61);
    const auto p = oracle::random_mammillary(rng, 4);
    const auto q = oracle::random_mammillary(rng, 4);
    CHECK(oracle::max_relative_error(realize(transfer_function(p)), realize(transfer_function(q))) > 1e-3);
}

TEST_CASE("near cancellation is a warning") {
    const auto h = TransferFunctiond::normalize(from_roots({-0.5, -2.0}), from_roots({-0.5, -1.0, -3.0}));
    const auto r = check_conditions(h);
    CHECK(r.warnings.size() == 1);
}
