#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sepfn/sepfit.hpp"

using namespace sepfn;

namespace {

// Table whose normalized values reproduce f on a lattice to ~1e-9.
SepFuncTable synthetic_qq_table(const std::vector<double>& axis,
                                const std::function<double(double)>& f) {
    SepFuncTable t;
    t.system = System::qubit_qutrit;
    t.beta = 1;
    t.n_samples = t.n_feasible = 1000000000LL;
    t.axis = axis;
    const std::size_t n = axis.size();
    t.separable_counts.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            t.separable_counts[i * n + j] =
                std::llround(f(axis[i] * axis[j]) * 1000000000.0);
    return t;
}

}  // namespace

TEST_CASE("reference_sepfunc closed-form spot values") {
    CHECK(reference_sepfunc({.model = SepModel::dyson_two_qubit, .beta = 2}, 1.0) == 1.0);
    CHECK_THAT(reference_sepfunc({.model = SepModel::dyson_two_qubit, .beta = 4}, 0.5),
               Catch::Matchers::WithinRel(std::pow(11.0 / 16.0, 4), 1e-14));
    CHECK(reference_sepfunc({.model = SepModel::qq_candidate}, 1.0) == 1.0);
    CHECK(reference_sepfunc({.model = SepModel::qq_candidate}, 0.0) == 0.0);
    CHECK_THROWS_AS(reference_sepfunc({.model = SepModel::qq_candidate}, -0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(reference_sepfunc({.model = SepModel::qq_candidate}, 1.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(reference_sepfunc({.model = SepModel::dyson_two_qubit, .beta = 0}, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        reference_sepfunc({.model = SepModel::qq_family, .gamma = -1.0, .theta = 1.0}, 0.5),
        std::invalid_argument);
}

TEST_CASE("two-parameter family at theta=1, gamma=5/2 collapses to the candidate") {
    for (int i = 0; i <= 100; ++i) {
        const double eta = i / 100.0;
        CHECK(reference_sepfunc({.model = SepModel::qq_family, .gamma = 2.5, .theta = 1.0},
                                eta) ==
              reference_sepfunc({.model = SepModel::qq_candidate}, eta));
    }
}

TEST_CASE("reference models are nondecreasing on [0,1]") {
    const ModelSpec specs[] = {{.model = SepModel::dyson_two_qubit, .beta = 1},
                               {.model = SepModel::dyson_two_qubit, .beta = 4},
                               {.model = SepModel::qq_candidate},
                               {.model = SepModel::qq_family, .gamma = 3.0, .theta = 0.7}};
    for (const ModelSpec& m : specs) {
        double prev = -1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double v = reference_sepfunc(m, i / 1000.0);
            CHECK(v >= prev - 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("dyson_check basics") {
    auto axis = uniform_grid(11);
    SepFuncTable t = synthetic_qq_table(axis, [](double e) { return 1.0 - std::pow(1.0 - e, 2.5); });
    DysonCheck same = dyson_check(t, t, 1);
    CHECK(same.rms == 0.0);
    CHECK(same.max_abs == 0.0);

    SepFuncTable other = synthetic_qq_table(uniform_grid(5), [](double e) { return e; });
    CHECK_THROWS_AS(dyson_check(t, other, 2), std::invalid_argument);
}

TEST_CASE("fit_family recovers a synthetic gamma exactly") {
    auto axis = uniform_grid(21);
    SepFuncTable t = synthetic_qq_table(axis, [](double e) { return 1.0 - std::pow(1.0 - e, 2.5); });
    FitParams one = fit_family(t, FitFamily::qq_one_param);
    CHECK_THAT(one.params[0], Catch::Matchers::WithinAbs(2.5, 1e-4));
    CHECK(one.sum_of_squares < 1e-12);

    FitParams two = fit_family(t, FitFamily::qq_two_param);
    CHECK_THAT(two.params[0], Catch::Matchers::WithinAbs(2.5, 0.01));
    CHECK_THAT(two.params[1], Catch::Matchers::WithinAbs(1.0, 0.01));
    CHECK(two.sum_of_squares <= 1e-10);

    // Optimizer sanity: no worse than the documented start.
    std::vector<double> xs, ys;
    sepfn::detail::fit_points(t, xs, ys);
    CHECK(two.sum_of_squares <=
          sepfn::detail::fit_ss(FitFamily::qq_two_param, xs, ys, {2.5, 1.0}) + 1e-15);
}

TEST_CASE("ss_curve has its minimum at the fitted parameter") {
    auto axis = uniform_grid(15);
    SepFuncTable t = synthetic_qq_table(axis, [](double e) { return 1.0 - std::pow(1.0 - e, 3.0); });
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(1.0 + i * 0.1);
    std::vector<double> ss = ss_curve(t, FitFamily::qq_one_param, grid);
    std::size_t best = 0;
    for (std::size_t i = 1; i < ss.size(); ++i)
        if (ss[i] < ss[best]) best = i;
    CHECK_THAT(grid[best], Catch::Matchers::WithinAbs(3.0, 0.05 + 1e-12));
}

TEST_CASE("fitting a sampled real qubit-qutrit table lands near gamma = 5/2") {
    ScanOptions o;
    o.workers = 4;
    o.key = 31;
    o.proposal_set = true;
    o.proposal = Proposal::direct;
    SepFuncTable t = scan_qubit_qutrit(1, 10000, uniform_grid(11), o);
    REQUIRE(t.usable());
    FitParams fit = fit_family(t, FitFamily::qq_one_param);
    CHECK(fit.params[0] > 2.0);
    CHECK(fit.params[0] < 3.0);
}

TEST_CASE("degenerate tables are rejected") {
    SepFuncTable t = synthetic_qq_table(uniform_grid(5), [](double) { return 0.0; });
    CHECK_THROWS_AS(fit_family(t, FitFamily::qq_one_param), std::invalid_argument);
}

TEST_CASE("fit report JSON carries family, params, and table metadata") {
    auto axis = uniform_grid(9);
    SepFuncTable t = synthetic_qq_table(axis, [](double e) { return 1.0 - std::pow(1.0 - e, 2.5); });
    FitParams fit = fit_family(t, FitFamily::qq_one_param);
    nlohmann::json j = fit_report_json(fit, t);
    CHECK(j["family"] == "qq-one-param");
    CHECK(j["params"].size() == 1);
    CHECK(j["ss"].get<double>() >= 0.0);
    CHECK(j["grid_size"] == 81);
    CHECK(j["table_metadata"]["system"] == "qubit-qutrit");
}
