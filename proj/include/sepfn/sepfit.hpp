#pragma once

// Reference separability-function models, table comparisons against powers of
// other tables, and least-squares fitting of the one- and two-parameter
// model families.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sepfn/scans.hpp"

namespace sepfn {

/// Closed-form models. Abscissa is mu for the two-qubit model and
/// eta = nu1*nu2 for the qubit-qutrit ones.
enum class SepModel { dyson_two_qubit, qq_candidate, qq_family };

struct ModelSpec {
    SepModel model = SepModel::dyson_two_qubit;
    int beta = 1;        // dyson_two_qubit
    double gamma = 2.5;  // qq_family
    double theta = 1.0;  // qq_family
};

/// Model value at x in [0,1]; every model equals 1 at x = 1.
inline double reference_sepfunc(const ModelSpec& m, double x) {
    if (!(x >= 0.0) || !(x <= 1.0))
        throw std::invalid_argument("reference_sepfunc: abscissa must lie in [0,1]");
    switch (m.model) {
        case SepModel::dyson_two_qubit: {
            if (m.beta < 1 || m.beta > 4)
                throw std::invalid_argument("reference_sepfunc: beta must be 1..4");
            return std::pow(0.5 * (3.0 - x * x) * x, m.beta);
        }
        case SepModel::qq_candidate:
            return 1.0 - std::pow(1.0 - x, 2.5);
        default: {
            if (!(m.gamma > 0.0) || !(m.theta > 0.0))
                throw std::invalid_argument("reference_sepfunc: gamma, theta must be positive");
            return 1.0 - std::pow(1.0 - std::pow(x, m.theta), m.gamma);
        }
    }
}

struct DysonCheck {
    double rms = 0.0;
    double max_abs = 0.0;
};

/// Pointwise comparison of normalized table_high against the power of
/// normalized table_low on a shared grid.
inline DysonCheck dyson_check(const SepFuncTable& low, const SepFuncTable& high, int power) {
    if (low.axis != high.axis || low.separable_counts.size() != high.separable_counts.size())
        throw std::invalid_argument("dyson_check: tables must share a grid");
    if (!low.usable() || !high.usable())
        throw std::invalid_argument("dyson_check: unusable table");
    DysonCheck r;
    const std::size_t n = low.separable_counts.size();
    for (std::size_t g = 0; g < n; ++g) {
        const double d = high.s_norm(g) - std::pow(low.s_norm(g), power);
        r.rms += d * d;
        r.max_abs = std::max(r.max_abs, std::abs(d));
    }
    r.rms = std::sqrt(r.rms / n);
    return r;
}

enum class FitFamily { qq_one_param, qq_two_param, power_of_r, power_of_vad };

struct FitParams {
    FitFamily family = FitFamily::qq_one_param;
    std::vector<double> params;
    double sum_of_squares = 0.0;
};

namespace detail {

inline double fit_model(FitFamily f, double x, const std::vector<double>& p) {
    switch (f) {
        case FitFamily::qq_one_param: return 1.0 - std::pow(1.0 - x, p[0]);
        case FitFamily::qq_two_param: return 1.0 - std::pow(1.0 - std::pow(x, p[1]), p[0]);
        case FitFamily::power_of_r: return std::pow(x, p[0]);
        default: return std::pow(1.0 - x, p[0]);  // power of (1 - abscissa)
    }
}

/// Table rows as (abscissa, normalized value): mu for two-qubit tables, the
/// lattice product nu1*nu2 for qubit-qutrit ones.
inline void fit_points(const SepFuncTable& t, std::vector<double>& xs, std::vector<double>& ys) {
    if (!t.usable()) throw std::invalid_argument("fit_family: degenerate table");
    if (t.system == System::two_qubit) {
        for (std::size_t g = 0; g < t.separable_counts.size(); ++g) {
            xs.push_back(t.axis[g]);
            ys.push_back(t.s_norm(g));
        }
        return;
    }
    const std::size_t n = t.axis.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            xs.push_back(t.axis[i] * t.axis[j]);
            ys.push_back(t.s_norm(i * n + j));
        }
}

inline double fit_ss(FitFamily f, const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::vector<double>& p) {
    double ss = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double d = ys[k] - fit_model(f, xs[k], p);
        ss += d * d;
    }
    return ss;
}

}  // namespace detail

/// Sum-of-squares along a caller-supplied parameter grid (second parameter
/// held at `theta` for the two-parameter family).
inline std::vector<double> ss_curve(const SepFuncTable& t, FitFamily family,
                                    const std::vector<double>& param_grid, double theta = 1.0) {
    std::vector<double> xs, ys;
    detail::fit_points(t, xs, ys);
    std::vector<double> out;
    out.reserve(param_grid.size());
    for (double g : param_grid) {
        std::vector<double> p{g};
        if (family == FitFamily::qq_two_param) p.push_back(theta);
        out.push_back(detail::fit_ss(family, xs, ys, p));
    }
    return out;
}

/// Least-squares fit: golden-section for one-parameter families, Nelder-Mead
/// from (gamma, theta) = (2.5, 1) for the two-parameter one. All grid points
/// weigh equally.
inline FitParams fit_family(const SepFuncTable& t, FitFamily family) {
    std::vector<double> xs, ys;
    detail::fit_points(t, xs, ys);
    FitParams r;
    r.family = family;
    auto ss = [&](const std::vector<double>& p) { return detail::fit_ss(family, xs, ys, p); };

    if (family != FitFamily::qq_two_param) {
        double a = 0.05, b = 20.0;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = ss({c}), fd = ss({d});
        for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = ss({c});
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = ss({d});
            }
        }
        const double x = 0.5 * (a + b);
        r.params = {x};
        r.sum_of_squares = ss({x});
        return r;
    }

    // Nelder-Mead in (gamma, theta) from the documented start.
    std::vector<std::vector<double>> s{{2.5, 1.0}, {2.9, 1.0}, {2.5, 1.3}};
    std::vector<double> fs{ss(s[0]), ss(s[1]), ss(s[2])};
    auto clamp = [](std::vector<double>& p) {
        p[0] = std::max(p[0], 1e-3);
        p[1] = std::max(p[1], 1e-3);
    };
    for (int it = 0; it < 400; ++it) {
        int hi = 0, lo = 0;
        for (int i = 1; i < 3; ++i) {
            if (fs[i] > fs[hi]) hi = i;
            if (fs[i] < fs[lo]) lo = i;
        }
        if (std::abs(fs[hi] - fs[lo]) < 1e-15) break;
        std::vector<double> cen{0.0, 0.0};
        for (int i = 0; i < 3; ++i)
            if (i != hi)
                for (int k = 0; k < 2; ++k) cen[k] += 0.5 * s[i][k];
        std::vector<double> refl{2.0 * cen[0] - s[hi][0], 2.0 * cen[1] - s[hi][1]};
        clamp(refl);
        double fr = ss(refl);
        if (fr < fs[lo]) {
            std::vector<double> exp_{3.0 * cen[0] - 2.0 * s[hi][0], 3.0 * cen[1] - 2.0 * s[hi][1]};
            clamp(exp_);
            const double fe = ss(exp_);
            if (fe < fr) {
                s[hi] = exp_;
                fs[hi] = fe;
            } else {
                s[hi] = refl;
                fs[hi] = fr;
            }
        } else if (fr < fs[hi]) {
            s[hi] = refl;
            fs[hi] = fr;
        } else {
            std::vector<double> con{0.5 * (cen[0] + s[hi][0]), 0.5 * (cen[1] + s[hi][1])};
            clamp(con);
            const double fco = ss(con);
            if (fco < fs[hi]) {
                s[hi] = con;
                fs[hi] = fco;
            } else {
                for (int i = 0; i < 3; ++i)
                    if (i != lo) {
                        for (int k = 0; k < 2; ++k) s[i][k] = 0.5 * (s[i][k] + s[lo][k]);
                        fs[i] = ss(s[i]);
                    }
            }
        }
    }
    int lo = 0;
    for (int i = 1; i < 3; ++i)
        if (fs[i] < fs[lo]) lo = i;
    r.params = s[lo];
    r.sum_of_squares = fs[lo];
    return r;
}

/// JSON fit report: {family, params, ss, grid_size, table_metadata}.
inline nlohmann::json fit_report_json(const FitParams& fit, const SepFuncTable& t) {
    static const char* names[] = {"qq-one-param", "qq-two-param", "power-of-r", "power-of-vad"};
    nlohmann::json j;
    j["family"] = names[static_cast<int>(fit.family)];
    j["params"] = fit.params;
    j["ss"] = fit.sum_of_squares;
    j["grid_size"] = t.separable_counts.size();
    j["table_metadata"] = {{"system", t.system == System::two_qubit ? "two-qubit" : "qubit-qutrit"},
                           {"beta", t.beta},
                           {"proposal", proposal_name(t.proposal)},
                           {"key", t.key},
                           {"n_samples", t.n_samples},
                           {"n_feasible", t.n_feasible}};
    return j;
}

}  // namespace sepfn
