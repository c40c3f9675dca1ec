#pragma once

// Low-dimensional density-matrix scenarios: a small number of free
// off-diagonal entries over a general diagonal, under the flat (HS) or the
// Bures metric. Each catalog entry carries a closed-form separability
// function of mu; reports integrate the printed volume elements to total and
// separable volumes and their ratio.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sepfn/quadrature.hpp"
#include "sepfn/special.hpp"

namespace sepfn {

enum class Scenario {
    hs_23_real,
    hs_23_complex,
    hs_23_trunc,
    hs_23_quat,
    hs_1423_real,
    hs_1423_complex,
    bures_23_real,
    bures_23_complex,
    bures_23_trunc,
    bures_23_quat,
    bures_1423_real,
    bures_1423_complex,
    bures_1423_quat
};

struct ScenarioSpec {
    Scenario name;
    const char* label;  // CLI/JSON identifier
    int beta;           // free components per entry
    bool bures;         // metric: false = flat (HS)
    bool two_pairs;     // one free pair (2,3) vs the pair (1,4),(2,3)
    // Constant relating the closed separability function's normalization to
    // the plain product of per-entry ball integrals (1 when they coincide).
    double c_scenario;
};

inline const std::vector<ScenarioSpec>& scenario_catalog() {
    static const std::vector<ScenarioSpec> cat = {
        {Scenario::hs_23_real, "hs-23-real", 1, false, false, 1.0},
        {Scenario::hs_23_complex, "hs-23-complex", 2, false, false, 1.0},
        {Scenario::hs_23_trunc, "hs-23-trunc", 3, false, false, 1.0},
        {Scenario::hs_23_quat, "hs-23-quat", 4, false, false, 1.0},
        {Scenario::hs_1423_real, "hs-1423-real", 1, false, true, 1.0},
        {Scenario::hs_1423_complex, "hs-1423-complex", 2, false, true, 1.0},
        {Scenario::bures_23_real, "bures-23-real", 1, true, false, 1.0},
        {Scenario::bures_23_complex, "bures-23-complex", 2, true, false, 1.0},
        // No full volume element exists for this one, so scenario_report
        // rejects it; its closed form carries (4 - sqrt(2) log(3+2 sqrt 2))/8.
        {Scenario::bures_23_trunc, "bures-23-trunc", 3, true, false,
         0.125 * (4.0 - std::sqrt(2.0) * std::log(3.0 + 2.0 * std::sqrt(2.0)))},
        {Scenario::bures_23_quat, "bures-23-quat", 4, true, false, 1.0},
        {Scenario::bures_1423_real, "bures-1423-real", 1, true, true, 1.0},
        {Scenario::bures_1423_complex, "bures-1423-complex", 2, true, true, 4.0},
        {Scenario::bures_1423_quat, "bures-1423-quat", 4, true, true, 1.0},
    };
    return cat;
}

inline const ScenarioSpec& scenario_spec(Scenario s) {
    for (const ScenarioSpec& sp : scenario_catalog())
        if (sp.name == s) return sp;
    throw std::invalid_argument("scenario_spec: unknown scenario");
}

inline Scenario scenario_from_name(const std::string& label) {
    for (const ScenarioSpec& sp : scenario_catalog())
        if (label == sp.label) return sp.name;
    throw std::invalid_argument("unknown scenario name: " + label);
}

/// Separability function, piecewise in mu, exactly as on record (including
/// the mu > 1 branches and any scenario constants).
inline double closed_sepfunc(Scenario s, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("closed_sepfunc: mu must be positive");
    const double m = std::min(mu, 1.0);
    const double w = std::min(1.0 / mu, 1.0);
    const double root = std::sqrt(std::max(0.0, 1.0 - m * m));
    switch (s) {
        case Scenario::hs_23_real: return 2.0 * m;
        case Scenario::hs_23_complex: return kPi * m * m;
        case Scenario::hs_23_trunc: return 4.0 * kPi * m * m * m / 3.0;
        case Scenario::hs_23_quat: return 0.5 * kPi * kPi * std::pow(m, 4);
        case Scenario::hs_1423_real: return 4.0 * m * w;
        case Scenario::hs_1423_complex: return kPi * kPi * m * m * w * w;
        case Scenario::bures_23_real: return 2.0 * std::asin(m);
        case Scenario::bures_23_complex: return 2.0 * kPi * (1.0 - root);
        case Scenario::bures_23_trunc: {
            const double k = 4.0 - std::sqrt(2.0) * std::log(3.0 + 2.0 * std::sqrt(2.0));
            return 0.25 * kPi * (std::asin(m) - m * root) * k;
        }
        case Scenario::bures_23_quat:
            return 2.0 * kPi * kPi * (2.0 - (2.0 + m * m) * root) / 3.0;
        case Scenario::bures_1423_real:
            return 2.0 * kPi * (mu <= 1.0 ? std::asin(m) : std::asin(w));
        case Scenario::bures_1423_complex:
            return 16.0 * kPi * kPi *
                   (1.0 - std::sqrt(std::max(0.0, 1.0 - std::min(mu, 1.0 / mu) *
                                                            std::min(mu, 1.0 / mu))));
        default: {  // bures_1423_quat
            const double t = std::min(mu, 1.0 / mu);
            const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
            return 8.0 * std::pow(kPi, 4) / 9.0 * (2.0 - (2.0 + t * t) * r);
        }
    }
}

/// closed_sepfunc divided by its value at mu = 1.
inline double closed_sepfunc_normalized(Scenario s, double mu) {
    return closed_sepfunc(s, mu) / closed_sepfunc(s, 1.0);
}

namespace detail {

/// Surface area of the unit sphere in `beta` dimensions.
inline double sphere_surface(int beta) {
    switch (beta) {
        case 1: return 2.0;
        case 2: return 2.0 * kPi;
        case 3: return 4.0 * kPi;
        default: return 2.0 * kPi * kPi;
    }
}

/// Numeric ball integral for one free entry: integrates 1 (flat metric) or
/// (1 - |x|^2)^{-1/2} (Bures) over the beta-ball of the given radius.
inline double entry_ball_numeric(int beta, bool bures, double radius) {
    if (radius <= 0.0) return 0.0;
    if (bures) {
        // r = sin(t) removes the (1 - r^2)^{-1/2} factor analytically.
        auto f = [&](double t) {
            return sphere_surface(beta) * std::pow(std::sin(t), beta - 1);
        };
        return integrate_1d(f, 0.0, std::asin(std::min(radius, 1.0)), 1e-11).value;
    }
    auto f = [&](double r) { return sphere_surface(beta) * std::pow(r, beta - 1); };
    return integrate_1d(f, 0.0, radius, 1e-11).value;
}

/// Closed form of the same ball integral.
inline double entry_ball(int beta, bool bures, double radius) {
    const double r = radius;
    if (r <= 0.0) return 0.0;
    if (!bures) return sphere_surface(beta) * std::pow(r, beta) / beta;
    const double q = std::sqrt(std::max(0.0, 1.0 - r * r));
    switch (beta) {
        case 1: return 2.0 * std::asin(r);
        case 2: return 2.0 * kPi * (1.0 - q);
        case 3: return 2.0 * kPi * (std::asin(r) - r * q);
        default: return 2.0 * kPi * kPi * (2.0 - (2.0 + r * r) * q) / 3.0;
    }
}

/// Off-diagonal separable measure at ratio mu, in the printed normalization:
/// the closed separability function for the PPT-capped region, or its
/// peak value (full ball, at mu = 1) when no cap applies.
inline double offdiag_measure(Scenario s, double mu, bool separable) {
    return closed_sepfunc(s, separable ? mu : 1.0);
}

/// Diagonal-sector factor for the single-pair scenarios, as a function of
/// rho11 = a, rho22 = b and mu. HS: Bloore scaling weight times
/// |d rho33/d mu|; Bures: the printed four-parameter volume elements.
inline double diag_factor_23(const ScenarioSpec& sp, double a, double b, double mu) {
    const double rest = 1.0 - a - b;
    if (a <= 0.0 || b <= 0.0 || rest <= 0.0) return 0.0;
    if (!sp.bures) {
        const double den = mu * mu * b + a;
        const double r3 = a * rest / den;
        const double r4 = rest - r3;
        if (r3 <= 0.0 || r4 <= 0.0) return 0.0;
        const double dr3 = 2.0 * mu * b * r3 / den;
        return std::pow(b * r3, 0.5 * sp.beta) * dr3;
    }
    const double t1 = b * mu * mu + a;
    const double t2 = a - a * a + mu * mu * b * b;
    switch (sp.beta) {
        case 1: return std::sqrt(a * b * rest) / (4.0 * t1 * std::sqrt(t2));
        case 2: return a * b * rest / (4.0 * t1 * t2);
        case 4: return a * a * b * b * rest * rest / (4.0 * t1 * t2 * t2);
        default:
            throw std::invalid_argument(
                "scenario_report: no volume element on record for the truncated Bures scenario");
    }
}

inline double diag_weight_1423(const ScenarioSpec& sp, double r1, double r2, double r3) {
    const double r4 = 1.0 - r1 - r2 - r3;
    if (r1 <= 0.0 || r2 <= 0.0 || r3 <= 0.0 || r4 <= 0.0) return 0.0;
    if (!sp.bures) return 0.125 * std::pow(r1 * r2 * r3 * r4, 0.5 * sp.beta);
    const double s = r2 + r3;
    return 0.125 * std::pow(r1 * r2 * r3 * r4, 0.5 * (sp.beta - 1)) /
           std::pow((1.0 - s) * s, 0.5 * sp.beta);
}

}  // namespace detail

/// Numeric re-derivation of the separability function on a mu grid: the
/// product of per-entry numeric ball integrals under the PPT radius caps,
/// times the catalog constant for scenarios whose closed form is normalized
/// differently from that product.
inline std::vector<double> derive_sepfunc_numeric(Scenario s, const std::vector<double>& grid) {
    const ScenarioSpec& sp = scenario_spec(s);
    std::vector<double> out;
    out.reserve(grid.size());
    for (double mu : grid) {
        if (!(mu > 0.0))
            throw std::invalid_argument("derive_sepfunc_numeric: grid must be positive");
        double v = detail::entry_ball_numeric(sp.beta, sp.bures, std::min(mu, 1.0));
        if (sp.two_pairs)
            v *= detail::entry_ball_numeric(sp.beta, sp.bures, std::min(1.0 / mu, 1.0));
        out.push_back(sp.c_scenario * v);
    }
    return out;
}

struct ScenarioReport {
    std::string scenario;
    double total_volume = 0.0;
    double separable_volume = 0.0;
    double probability = 0.0;
    double total_error = 0.0;
    double separable_error = 0.0;
    std::string note;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["scenario"] = scenario;
        j["total_volume"] = total_volume;
        j["separable_volume"] = separable_volume;
        j["probability"] = probability;
        j["total_error"] = total_error;
        j["separable_error"] = separable_error;
        if (!note.empty()) j["note"] = note;
        return j;
    }
};

/// Total and separable volumes by quadrature over the printed volume
/// elements; probability is their ratio (scenario constants cancel).
inline ScenarioReport scenario_report(Scenario s) {
    const ScenarioSpec& sp = scenario_spec(s);
    if (s == Scenario::bures_23_trunc)
        throw std::invalid_argument(
            "scenario_report: no volume element on record for the truncated Bures scenario");
    ScenarioReport rep;
    rep.scenario = sp.label;
    if (sp.c_scenario != 1.0)
        rep.note = "separability function carries the constant " +
                   std::to_string(sp.c_scenario) + " relative to the per-entry ball product";

    auto run = [&](bool separable, double rel_tol) -> QuadratureResult {
        if (sp.bures && !sp.two_pairs) {
            // Printed elements are given in (rho11, rho22, mu) coordinates:
            // outer integral over mu in (0,1] plus (1,inf) via mu -> 1/mu.
            auto g = [&](double mu) {
                auto f = [&](double a, double b) { return detail::diag_factor_23(sp, a, b, mu); };
                const double scale = std::max(std::abs(f(1.0 / 3.0, 1.0 / 3.0)) * 0.5, 1e-290);
                const double v =
                    integrate_2d(f, 0.0, 1.0, [](double) { return 0.0; },
                                 [](double x) { return 1.0 - x; }, rel_tol * 0.3, 400000,
                                 scale * rel_tol * 1e-3)
                        .value;
                return v * detail::offdiag_measure(s, mu, separable);
            };
            QuadratureResult lo = integrate_1d(g, 0.0, 1.0, rel_tol);
            QuadratureResult hi =
                integrate_1d([&](double t) { return g(1.0 / t) / (t * t); }, 0.0, 1.0, rel_tol);
            QuadratureResult r;
            r.value = lo.value + hi.value;
            r.abs_error_estimate = lo.abs_error_estimate + hi.abs_error_estimate;
            r.evaluations = lo.evaluations + hi.evaluations;
            r.converged = lo.converged && hi.converged;
            return r;
        }
        // 3-simplex over (rho11, rho22, rho33) = (x, y, z); the innermost
        // axis is split where mu crosses 1 so each piece stays smooth.
        long long evals = 0;
        auto point = [&](double x, double y, double z) {
            const double r4 = 1.0 - x - y - z;
            if (x <= 0.0 || y <= 0.0 || z <= 0.0 || r4 <= 0.0) return 0.0;
            const double w = sp.two_pairs ? detail::diag_weight_1423(sp, x, y, z)
                                          : std::pow(y * z, 0.5 * sp.beta);
            if (w == 0.0) return 0.0;
            const double mu = std::sqrt(x * r4 / (y * z));
            return w * detail::offdiag_measure(s, mu, separable);
        };
        // Much of the region is exponentially small; stop refining below a
        // fraction of the centroid value instead of chasing relative error.
        const double floor_scale =
            std::max(std::abs(point(0.25, 0.25, 0.25)), 1e-290) * rel_tol * 1e-3;
        auto inner = [&](double x, double y) {
            const double zmax = 1.0 - x - y;
            if (zmax <= 0.0) return 0.0;
            auto f = [&](double z) { return point(x, y, z); };
            const double zstar = x * (1.0 - x - y) / (x + y);
            double v = 0.0;
            if (separable && zstar > 0.0 && zstar < zmax) {
                auto r1 = integrate_1d(f, 0.0, zstar, rel_tol * 0.02, floor_scale, 400000);
                auto r2 = integrate_1d(f, zstar, zmax, rel_tol * 0.02, floor_scale, 400000);
                evals += r1.evaluations + r2.evaluations;
                v = r1.value + r2.value;
            } else {
                auto r = integrate_1d(f, 0.0, zmax, rel_tol * 0.02, floor_scale, 400000);
                evals += r.evaluations;
                v = r.value;
            }
            return v;
        };
        auto mid = [&](double x) {
            auto h = [&](double y) { return inner(x, y); };
            auto r = integrate_1d(h, 0.0, 1.0 - x, rel_tol * 0.1, floor_scale, 400000);
            evals += r.evaluations;
            return r.value;
        };
        QuadratureResult r = integrate_1d(mid, 0.0, 1.0, rel_tol, floor_scale, 400000);
        r.evaluations += evals;
        return r;
    };

    const bool mu_path = sp.bures && !sp.two_pairs;
    QuadratureResult tot = run(false, mu_path ? 2e-10 : 1e-9);
    QuadratureResult sep = run(true, !sp.bures ? 1e-9 : (mu_path ? 1e-7 : 1e-6));
    rep.total_volume = tot.value;
    rep.total_error = tot.abs_error_estimate;
    rep.separable_volume = sep.value;
    rep.separable_error = sep.abs_error_estimate;
    rep.probability = sep.value / tot.value;
    return rep;
}

/// Volume element of the five-parameter scenario with free (1,2) and (2,3)
/// real entries. Printed in non-factorized form; cataloged as an integrand
/// only (no report target exists for it).
inline double nonfactorized_1223_element(double r1, double r2, double x12, double x23,
                                         double mu) {
    if (r1 <= 0.0 || r2 <= 0.0 || r1 + r2 >= 1.0 || !(mu > 0.0)) return 0.0;
    const double a = -r1 * r1 * r2 * r2 * (r1 + r2 - 1.0) * ((mu * mu - 1.0) * r2 + 1.0);
    const double b = (r2 * mu * mu + r1) * (r2 * mu * mu + r1);
    const double c = x12 * x12 + x23 * x23 - 1.0;
    const double t2 = r1 - r1 * r1 + mu * mu * r2 * r2;
    const double d = (r1 + r2) * (x12 * x12 * r2 * b - ((mu * mu - 1.0) * r2 + 1.0) * t2);
    const double e = -x23 * x23 * r2 * (r1 + r2 - 1.0) * t2;
    const double ratio = a / (b * c * (d + e));
    return ratio > 0.0 ? 0.25 * std::sqrt(ratio) : 0.0;
}

}  // namespace sepfn
