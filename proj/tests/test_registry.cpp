#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sepfn/registry.hpp"
#include "sepfn/sampling.hpp"

using namespace sepfn;
using Catch::Matchers::WithinRel;

TEST_CASE("matrix_ball_volume exact strings and numerics") {
    CHECK(matrix_ball_volume(4, 4).to_string() == "pi^12 / 315071454005160652800000");
    CHECK(matrix_ball_volume(4, 3).to_string() == "pi^10 / 384458588946432000");
    CHECK(matrix_ball_volume(6, 1).to_string() == "pi^9 / 1730063650258944000");
    CHECK(matrix_ball_volume(6, 2).to_string() ==
          "pi^15 / 298991549953302804677854494720000000");
    CHECK(matrix_ball_volume(1, 1).to_string() == "1");
    CHECK(matrix_ball_volume(1, 4).numeric() == 1.0);

    CHECK_THAT(matrix_ball_volume(4, 4).numeric(),
               WithinRel(std::pow(kPi, 12) / 315071454005160652800000.0, 1e-12));
    CHECK_THAT(matrix_ball_volume(4, 3).numeric(), WithinRel(2.43584e-13, 1e-4));
    CHECK_THAT(matrix_ball_volume(6, 1).numeric(), WithinRel(1.72301e-14, 1e-4));

    CHECK_THROWS_AS(matrix_ball_volume(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(matrix_ball_volume(4, 5), std::invalid_argument);
}

TEST_CASE("truncated-quaternionic volume equals its three-factor product") {
    const double p1 = 128.0 * std::pow(kPi, 8) / 105.0;
    const double p2 = 128.0 / 893025.0;
    const double p3 = 189.0 * kPi * kPi / 12696335643836416.0;
    CHECK_THAT(matrix_ball_volume(4, 3).numeric(), WithinRel(p1 * p2 * p3, 1e-12));
}

TEST_CASE("dirichlet_norm closed forms") {
    CHECK(dirichlet_norm(4, 4).to_string() == "1 / 40518448303132800");
    CHECK_THAT(dirichlet_norm(4, 1).numeric(), WithinRel(81.0 * kPi * kPi / 92897280.0, 1e-12));
    CHECK_THAT(dirichlet_norm(6, 1).numeric(),
               WithinRel(25.0 * std::pow(kPi, 3) / 1399771004732964864.0, 1e-12));
    CHECK_THROWS_AS(dirichlet_norm(5, 1), std::invalid_argument);
    CHECK_THROWS_AS(dirichlet_norm(4, 0), std::invalid_argument);
}

TEST_CASE("total volume factorizes through the diagonal sector") {
    // Lebesgue volume of the trace-one body = (simplex integral of the
    // diagonal weight) * (volume of the unit-diagonal feasible body).
    for (int beta : {1, 2, 3, 4}) {
        CHECK_THAT(matrix_ball_volume(4, beta).numeric(),
                   WithinRel(dirichlet_norm(4, beta).numeric() *
                                 feasible_volume(System::two_qubit, beta),
                             1e-12));
        CHECK_THAT(matrix_ball_volume(6, beta).numeric(),
                   WithinRel(dirichlet_norm(6, beta).numeric() *
                                 feasible_volume(System::qubit_qutrit, beta),
                             1e-12));
    }
}

TEST_CASE("PiRational arithmetic") {
    PiRational a = PiRational::integer(6) / PiRational::integer(35);
    PiRational b = PiRational::integer(-10);
    CHECK((a * b).to_string() == "-12 / 7");
    CHECK_THAT((a * b).numeric(), WithinRel(-12.0 / 7.0, 1e-15));
    CHECK(a.pow(2).to_string() == "36 / 1225");
    CHECK(PiRational::gamma_half(1).to_string() == "sqrt(pi)");
    CHECK(PiRational::gamma_half(5).to_string() == "sqrt(pi) * 3 / 4");  // Gamma(5/2)
    CHECK(PiRational::gamma_half(8).to_string() == "6");                 // Gamma(4)
    CHECK_THROWS_AS(PiRational::integer(0), std::invalid_argument);
    CHECK_THROWS_AS(PiRational::gamma_half(0), std::invalid_argument);
}

TEST_CASE("every catalog entry matches an independent evaluation") {
    const double pi2 = kPi * kPi;
    std::map<std::string, double> expect{
        {"two-qubit-R1-beta1", 135.0 * pi2 / 2176.0},
        {"two-qubit-R1-beta2", 24.0 / 71.0},
        {"two-qubit-R1-beta3", 160446825.0 * pi2 / 5679087616.0},
        {"two-qubit-R1-beta4", (24.0 / 71.0) * (24.0 / 71.0)},
        {"two-qubit-R2-beta1", 1024.0 / (135.0 * pi2)},
        {"two-qubit-R2-beta2", 71.0 / 99.0},
        {"two-qubit-R2-beta3", 726923214848.0 / (106376244975.0 * pi2)},
        {"two-qubit-R2-beta4", 125769.0 / 185725.0},
        {"two-qubit-prob-beta1", 8.0 / 17.0},
        {"two-qubit-prob-beta2", 8.0 / 33.0},
        {"two-qubit-prob-beta3", 128.0 / 663.0},
        {"two-qubit-prob-beta4", 72442944.0 / 936239725.0},
        {"quat-symmetric-point-mass", std::pow(kPi, 12) / 7776000.0},
        {"quat-volume", std::pow(kPi, 12) / 315071454005160652800000.0},
    };
    int seen = 0;
    for (const ConjectureEntry& e : conjecture_entries()) {
        CHECK(!e.name.empty());
        CHECK(!e.expression.empty());
        CHECK(std::isfinite(e.value));
        auto it = expect.find(e.name);
        if (it != expect.end()) {
            ++seen;
            CHECK_THAT(e.value, WithinRel(it->second, 1e-12));
        }
    }
    CHECK(seen == static_cast<int>(expect.size()));
}

TEST_CASE("catalog approximate anchors") {
    // Reference decimals quoted alongside the closed forms.
    std::map<std::string, double> approx{
        {"two-qubit-R2-beta1", 0.768540}, {"two-qubit-R2-beta3", 0.692379},
        {"two-qubit-prob-beta3", 0.193062}, {"two-qubit-prob-beta4", 0.0773765},
        {"qq-R2-beta1", 0.724715},        {"qq-R2-beta2", 0.692789},
        {"qq-R2-beta3", 0.681261},        {"qq-R2-beta4", 0.675902},
        {"quat-sep-volume", 2.26986e-19},
    };
    int seen = 0;
    for (const ConjectureEntry& e : conjecture_entries()) {
        auto it = approx.find(e.name);
        if (it == approx.end()) continue;
        ++seen;
        CHECK_THAT(e.value, WithinRel(it->second, 1e-5));
    }
    CHECK(seen == static_cast<int>(approx.size()));
}

TEST_CASE("two-qubit R2 from quadrature matches the closed forms") {
    for (int beta : {1, 2, 3, 4}) {
        R2Value r = r2_constant(System::two_qubit, beta);
        CHECK_THAT(r.value, WithinRel(r.closed_form, 1e-6));
    }
}

TEST_CASE("qubit-qutrit R2 from simplex sampling matches the closed forms") {
    for (int beta : {1, 2}) {
        R2Value r = r2_constant(System::qubit_qutrit, beta, 400000);
        CHECK_THAT(r.value, WithinRel(r.closed_form, 0.005));
        CHECK(r.note.find("eta") != std::string::npos);
    }
    CHECK_THROWS_AS(r2_constant(System::qubit_qutrit, 1, 100), std::invalid_argument);
}

TEST_CASE("R2 decreases monotonically in beta for both systems") {
    for (System sys : {System::two_qubit, System::qubit_qutrit})
        for (int beta = 1; beta < 4; ++beta)
            CHECK(r2_closed_form(sys, beta) > r2_closed_form(sys, beta + 1));
}

TEST_CASE("probability pipeline reproduces the exact products") {
    EstimateSummary r1;
    r1.n_samples = 1;
    r1.n_feasible = 1;

    r1.value = 135.0 * kPi * kPi / 2176.0;
    EstimateSummary p1 = pipeline_probability(System::two_qubit, 1, r1);
    CHECK_THAT(p1.value, WithinRel(8.0 / 17.0, 1e-14));
    CHECK(p1.conjecture == "8/17");

    r1.value = 24.0 / 71.0;
    EstimateSummary p2 = pipeline_probability(System::two_qubit, 2, r1);
    CHECK_THAT(p2.value, WithinRel(8.0 / 33.0, 1e-14));

    r1.value = (24.0 / 71.0) * (24.0 / 71.0);
    EstimateSummary p4 = pipeline_probability(System::two_qubit, 4, r1);
    CHECK_THAT(p4.value, WithinRel(72442944.0 / 936239725.0, 1e-14));
    CHECK(p4.conjecture == "72442944/936239725");

    // Linearity in R1 and error propagation.
    r1.value = 0.1;
    r1.std_error = 0.01;
    EstimateSummary a = pipeline_probability(System::two_qubit, 2, r1);
    r1.value = 0.3;
    r1.std_error = 0.03;
    EstimateSummary b = pipeline_probability(System::two_qubit, 2, r1);
    CHECK_THAT(b.value, WithinRel(3.0 * a.value, 1e-14));
    CHECK_THAT(b.std_error, WithinRel(3.0 * a.std_error, 1e-14));

    EstimateSummary q = pipeline_probability(System::qubit_qutrit, 1, r1);
    CHECK(q.conjecture.find("0.164125") != std::string::npos);

    CHECK_THROWS_AS(pipeline_probability(System::two_qubit, 0, r1), std::invalid_argument);
}
