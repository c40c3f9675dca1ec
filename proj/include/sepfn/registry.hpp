#pragma once

// Exact constants and conjectured values: the comprehensive matrix-ball
// volume formula, Dirichlet normalization constants of the diagonal sector,
// the R2 ratio integrals, and the R1*R2 probability pipeline.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sepfn/bloore.hpp"
#include "sepfn/estimate.hpp"
#include "sepfn/quadrature.hpp"
#include "sepfn/sobol.hpp"
#include "sepfn/sampling.hpp"

namespace sepfn {

/// Exact value of the form sign * (prod p^e) * pi^(pi_half/2), kept as a
/// prime-exponent map so arbitrarily large gamma-function products stay
/// exact. Only multiplication and division arise.
class PiRational {
  public:
    PiRational() = default;

    static PiRational integer(long long n) {
        if (n == 0) throw std::invalid_argument("PiRational: zero");
        PiRational r;
        if (n < 0) {
            r.sign_ = -1;
            n = -n;
        }
        r.mul_machine(n, 1);
        return r;
    }

    /// Gamma(twice_x/2) for twice_x >= 1: an exact rational for integer
    /// arguments, rational times sqrt(pi) for half-integer ones.
    static PiRational gamma_half(long long twice_x) {
        if (twice_x < 1) throw std::invalid_argument("PiRational: gamma argument must be >= 1/2");
        PiRational r;
        if (twice_x % 2 == 0) {
            for (long long k = 2; k < twice_x / 2; ++k) r.mul_machine(k, 1);
            return r;
        }
        // Gamma(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi)
        const long long m = twice_x / 2;
        r.pi_half_ = 1;
        for (long long k = 2; k <= 2 * m; ++k) r.mul_machine(k, 1);
        r.fac_[2] -= 2 * static_cast<int>(m);
        for (long long k = 2; k <= m; ++k) r.mul_machine(k, -1);
        return r;
    }

    PiRational& operator*=(const PiRational& o) {
        sign_ *= o.sign_;
        pi_half_ += o.pi_half_;
        for (auto [p, e] : o.fac_) {
            fac_[p] += e;
            if (fac_[p] == 0) fac_.erase(p);
        }
        return *this;
    }
    PiRational& operator/=(const PiRational& o) {
        sign_ *= o.sign_;
        pi_half_ -= o.pi_half_;
        for (auto [p, e] : o.fac_) {
            fac_[p] -= e;
            if (fac_[p] == 0) fac_.erase(p);
        }
        return *this;
    }
    friend PiRational operator*(PiRational a, const PiRational& b) { return a *= b; }
    friend PiRational operator/(PiRational a, const PiRational& b) { return a /= b; }

    PiRational pow(int k) const {
        PiRational r;
        r.sign_ = k % 2 == 0 ? 1 : sign_;
        r.pi_half_ = pi_half_ * k;
        for (auto [p, e] : fac_) r.fac_[p] = e * k;
        return r;
    }

    int pi_half_exponent() const { return pi_half_; }

    double numeric() const {
        double lg = 0.5 * pi_half_ * std::log(kPi);
        for (auto [p, e] : fac_) lg += e * std::log(static_cast<double>(p));
        return sign_ * std::exp(lg);
    }

    /// "pi^k * N / D" with exact decimal N, D (either factor omitted when 1;
    /// "sqrt(pi)" carries the half-power).
    std::string to_string() const {
        std::string head;
        if (pi_half_ != 0) {
            if (pi_half_ == 2)
                head += "pi";
            else if (pi_half_ % 2 == 0)
                head += "pi^" + std::to_string(pi_half_ / 2);
            else if (pi_half_ == 1)
                head += "sqrt(pi)";
            else
                head += "pi^(" + std::to_string(pi_half_) + "/2)";
        }
        std::vector<std::uint32_t> num{1}, den{1};
        for (auto [p, e] : fac_)
            for (int k = 0; k < std::abs(e); ++k)
                big_mul(e > 0 ? num : den, static_cast<std::uint32_t>(p));
        const std::string ns = big_str(num), ds = big_str(den);
        std::string out = head;
        if (ns != "1" || head.empty()) {
            if (!head.empty()) out += " * ";
            out += ns;
        }
        if (ds != "1") out += " / " + ds;
        return sign_ < 0 ? "-" + out : out;
    }

  private:
    int sign_ = 1;
    std::map<long long, int> fac_;  // prime -> exponent
    int pi_half_ = 0;               // power of sqrt(pi)

    void mul_machine(long long n, int dir) {
        for (long long p = 2; p * p <= n; ++p)
            while (n % p == 0) {
                fac_[p] += dir;
                if (fac_[p] == 0) fac_.erase(p);
                n /= p;
            }
        if (n > 1) {
            fac_[n] += dir;
            if (fac_[n] == 0) fac_.erase(n);
        }
    }

    // Little base-1e9 big integers; enough for multiply-by-small and print.
    static void big_mul(std::vector<std::uint32_t>& v, std::uint32_t m) {
        std::uint64_t carry = 0;
        for (auto& d : v) {
            const std::uint64_t t = static_cast<std::uint64_t>(d) * m + carry;
            d = static_cast<std::uint32_t>(t % 1000000000u);
            carry = t / 1000000000u;
        }
        while (carry != 0) {
            v.push_back(static_cast<std::uint32_t>(carry % 1000000000u));
            carry /= 1000000000u;
        }
    }
    static std::string big_str(const std::vector<std::uint32_t>& v) {
        std::string s = std::to_string(v.back());
        char buf[16];
        for (auto it = v.rbegin() + 1; it != v.rend(); ++it) {
            std::snprintf(buf, sizeof buf, "%09u", *it);
            s += buf;
        }
        return s;
    }
};

/// Total Lebesgue volume of the trace-one positive matrices of size n at
/// Dyson index beta:
///   pi^{beta n(n-1)/4} / Gamma(beta n(n-1)/2 + n) * prod_{i<n} Gamma(i beta/2 + 1).
inline PiRational matrix_ball_volume(int n, int beta) {
    if (n < 1) throw std::invalid_argument("matrix_ball_volume: n must be >= 1");
    if (beta < 1 || beta > 4) throw std::invalid_argument("matrix_ball_volume: beta must be 1..4");
    PiRational v;
    const long long pairs2 = static_cast<long long>(beta) * n * (n - 1);  // 2 * (beta n(n-1)/2)
    v = v / PiRational::gamma_half(pairs2 + 2LL * n);
    PiRational pi_pow;
    {
        // pi^{beta n(n-1)/4}: 2*exponent = pairs2/2
        PiRational p;
        p = PiRational::integer(1);
        // no direct setter; build via gamma(1/2)^k = pi^{k/2}
        for (long long k = 0; k < pairs2 / 2; ++k) p *= PiRational::gamma_half(1);
        pi_pow = p;
    }
    v *= pi_pow;
    for (int i = 1; i < n; ++i) v *= PiRational::gamma_half(static_cast<long long>(i) * beta + 2);
    return v;
}

/// Simplex integral of (prod_i rho_ii)^{(n-1) beta/2} over the unit simplex:
/// Gamma((n-1)beta/2 + 1)^n / Gamma(n(n-1)beta/2 + n).
inline PiRational dirichlet_norm(int n, int beta) {
    if (n != 4 && n != 6) throw std::invalid_argument("dirichlet_norm: n must be 4 or 6");
    if (beta < 1 || beta > 4) throw std::invalid_argument("dirichlet_norm: beta must be 1..4");
    const long long a = static_cast<long long>(n - 1) * beta + 2;  // 2*((n-1)beta/2 + 1)
    PiRational r = PiRational::gamma_half(a).pow(n);
    return r / PiRational::gamma_half(static_cast<long long>(n) * (n - 1) * beta + 2LL * n);
}

enum class ConjectureStatus { paper_conjecture, paper_exact, paper_estimate };

struct ConjectureEntry {
    std::string name;
    std::string expression;  // exact form as a human-readable string
    double value = 0.0;      // the expression evaluated in double precision
    ConjectureStatus status = ConjectureStatus::paper_exact;
    std::string context;

    nlohmann::json to_json() const {
        static const char* st[] = {"conjecture", "exact", "estimate"};
        return {{"name", name},
                {"expression", expression},
                {"value", value},
                {"status", st[static_cast<int>(status)]},
                {"context", context}};
    }
};

namespace detail {

inline double qq_r2_beta3() {
    // Two large cancelling terms; evaluate in extended precision.
    const long double pi = 3.14159265358979323846264338328L;
    const long double inner = -67294453713397888.0L + 5638997741091.0L * pi;
    const long double t2 =
        18446744073709551616.0L * inner / (71729672378917671400466262753675.0L * pi * pi);
    return static_cast<double>(-967504709.0L / 552123.0L - t2);
}

inline double qq_r2_beta4() {
    const long double log2 = 0.693147180559945309417232121458L;
    const long double num =
        192210846322598002116984324520591.0L - 277301145703236210250598232096768.0L * log2;
    return static_cast<double>(num / 501570554133080277487570824.0L);
}

}  // namespace detail

/// Closed-form R2 (ratio of the separability-function-weighted diagonal
/// integral to the unweighted one) on record for each system and beta.
inline double r2_closed_form(System sys, int beta) {
    if (beta < 1 || beta > 4) throw std::invalid_argument("r2_closed_form: beta must be 1..4");
    if (sys == System::two_qubit) {
        switch (beta) {
            case 1: return 1024.0 / (135.0 * kPi * kPi);
            case 2: return 71.0 / 99.0;
            case 3: return 726923214848.0 / (106376244975.0 * kPi * kPi);
            default: return 125769.0 / 185725.0;
        }
    }
    switch (beta) {
        case 1: return 1.0 - 4194304.0 / (4849845.0 * kPi);
        case 2: return (-44632342463.0 + 68578836480.0 * std::log(2.0)) / 4190140110.0;
        case 3: return detail::qq_r2_beta3();
        default: return detail::qq_r2_beta4();
    }
}

struct R2Value {
    System system = System::two_qubit;
    int beta = 1;
    double value = 0.0;        // computed from the integrals
    double closed_form = 0.0;  // registry value
    std::string note;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["system"] = system == System::two_qubit ? "two-qubit" : "qubit-qutrit";
        j["beta"] = beta;
        j["value"] = value;
        j["closed_form"] = closed_form;
        if (!note.empty()) j["note"] = note;
        return j;
    }
};

/// R2 computed from first principles. Two-qubit: quadrature of the ratio
/// 2 int_0^1 J_beta(mu) model(mu)^beta dmu over the Dirichlet normalization.
/// Qubit-qutrit: QMC average of model(eta)^beta under the Dirichlet law of
/// the diagonal weight, with the candidate extended to eta > 1 by the
/// symmetry eta -> 1/eta (recorded in the note).
inline R2Value r2_constant(System sys, int beta, long long n_samples = 400000) {
    if (beta < 1 || beta > 4) throw std::invalid_argument("r2_constant: beta must be 1..4");
    R2Value r;
    r.system = sys;
    r.beta = beta;
    r.closed_form = r2_closed_form(sys, beta);
    if (sys == System::two_qubit) {
        auto f = [&](double mu) {
            const double s = std::pow(0.5 * (3.0 - mu * mu) * mu, beta);
            return jacobian_J_cached(mu, beta, 1e-9) * s;
        };
        // Outer tolerance sits above the inner quadrature's relative noise.
        auto qr = integrate_1d(f, 0.0, 1.0, 1e-7);
        r.value = 2.0 * qr.value / dirichlet_norm(4, beta).numeric();
        r.note = "numerator by adaptive quadrature of the jacobian-weighted model";
        return r;
    }
    if (n_samples < 10000)
        throw std::invalid_argument("r2_constant: need at least 1e4 samples for qubit-qutrit");
    // Diagonal ~ Dirichlet(alpha,...,alpha) with alpha = 5 beta/2 + 1, drawn
    // by stick-breaking so the weighted integral becomes a plain average.
    const double alpha = 2.5 * beta + 1.0;
    LdsStream s(StreamKind::low_discrepancy, 5, 1234 + beta);
    double u[5], d[6], acc = 0.0;
    for (long long k = 0; k < n_samples; ++k) {
        s.next_point(u);
        double rest = 1.0;
        for (int i = 0; i < 5; ++i) {
            const double x = beta_quantile(alpha, (5 - i) * alpha, u[i]);
            d[i] = rest * x;
            rest *= 1.0 - x;
        }
        d[5] = rest;
        double eta = d[0] * d[5] / (d[2] * d[3]);
        if (eta > 1.0) eta = 1.0 / eta;
        acc += std::pow(1.0 - std::pow(1.0 - eta, 2.5), beta);
    }
    r.value = acc / n_samples;
    r.note = "QMC under the Dirichlet diagonal law; candidate extended by eta -> 1/eta symmetry";
    return r;
}

/// Separability probability R1 * R2 with propagated error; attaches the
/// matching exact conjecture when one is on record.
inline EstimateSummary pipeline_probability(System sys, int beta, const EstimateSummary& r1) {
    if (beta < 1 || beta > 4)
        throw std::invalid_argument("pipeline_probability: beta must be 1..4");
    const double r2 = r2_closed_form(sys, beta);
    EstimateSummary out = r1;
    out.label = "separability probability (R1 * R2)";
    out.value = r1.value * r2;
    out.std_error = r1.std_error * r2;
    out.conjecture.clear();
    out.conjecture_value = std::nan("");
    if (sys == System::two_qubit) {
        switch (beta) {
            case 1:
                out.conjecture = "8/17";
                out.conjecture_value = 8.0 / 17.0;
                break;
            case 2:
                out.conjecture = "8/33";
                out.conjecture_value = 8.0 / 33.0;
                break;
            case 3:
                out.conjecture = "128/663";  // candidate estimate
                out.conjecture_value = 128.0 / 663.0;
                break;
            default:
                out.conjecture = "72442944/936239725";
                out.conjecture_value = 72442944.0 / 936239725.0;
                break;
        }
    } else if (beta == 1) {
        out.conjecture = "0.164125 (sample estimate)";
        out.conjecture_value = 0.164125;
    } else if (beta == 2) {
        out.conjecture = "0.0330446 (sample estimate)";
        out.conjecture_value = 0.0330446;
    }
    return out;
}

/// The catalog of named exact/conjectured constants.
inline const std::vector<ConjectureEntry>& conjecture_entries() {
    static const std::vector<ConjectureEntry> entries = [] {
        const double pi2 = kPi * kPi;
        std::vector<ConjectureEntry> v;
        auto add = [&](std::string name, std::string expr, double val, ConjectureStatus st,
                       std::string ctx) {
            v.push_back({std::move(name), std::move(expr), val, st, std::move(ctx)});
        };
        add("two-qubit-R1-beta1", "135 pi^2 / 2176", 135.0 * pi2 / 2176.0,
            ConjectureStatus::paper_conjecture, "real two-qubit symmetric-point mass ratio");
        add("two-qubit-R1-beta2", "24/71", 24.0 / 71.0, ConjectureStatus::paper_conjecture,
            "complex two-qubit symmetric-point mass ratio");
        add("two-qubit-R1-beta3", "160446825 pi^2 / 5679087616",
            160446825.0 * pi2 / 5679087616.0, ConjectureStatus::paper_estimate,
            "truncated-quaternionic ratio implied by the 128/663 candidate");
        add("two-qubit-R1-beta4", "(24/71)^2", 576.0 / 5041.0, ConjectureStatus::paper_conjecture,
            "quaternionic two-qubit symmetric-point mass ratio");
        add("two-qubit-R2-beta1", "1024/(135 pi^2)", r2_closed_form(System::two_qubit, 1),
            ConjectureStatus::paper_exact, "real diagonal-sector ratio integral");
        add("two-qubit-R2-beta2", "71/99", r2_closed_form(System::two_qubit, 2),
            ConjectureStatus::paper_exact, "complex diagonal-sector ratio integral");
        add("two-qubit-R2-beta3", "726923214848/(106376244975 pi^2)",
            r2_closed_form(System::two_qubit, 3), ConjectureStatus::paper_exact,
            "truncated-quaternionic diagonal-sector ratio integral");
        add("two-qubit-R2-beta4", "125769/185725", r2_closed_form(System::two_qubit, 4),
            ConjectureStatus::paper_exact, "quaternionic diagonal-sector ratio integral");
        add("two-qubit-prob-beta1", "8/17", 8.0 / 17.0, ConjectureStatus::paper_conjecture,
            "real two-qubit separability probability");
        add("two-qubit-prob-beta2", "8/33", 8.0 / 33.0, ConjectureStatus::paper_conjecture,
            "complex two-qubit separability probability");
        add("two-qubit-prob-beta3", "128/663", 128.0 / 663.0, ConjectureStatus::paper_estimate,
            "truncated-quaternionic separability probability candidate");
        add("two-qubit-prob-beta4", "72442944/936239725", 72442944.0 / 936239725.0,
            ConjectureStatus::paper_conjecture, "quaternionic two-qubit separability probability");
        add("quat-R2-numerator", "5989/358347086242825680000",
            5989.0 / 358347086242825680000.0, ConjectureStatus::paper_exact,
            "weighted diagonal integral, quaternionic model");
        add("real-R2-numerator", "1/151200", 1.0 / 151200.0, ConjectureStatus::paper_exact,
            "weighted diagonal integral, real model");
        add("complex-R2-numerator", "71/99891792000", 71.0 / 99891792000.0,
            ConjectureStatus::paper_exact, "weighted diagonal integral, complex model");
        add("quat-symmetric-point-mass", "pi^12/7776000", std::pow(kPi, 12) / 7776000.0,
            ConjectureStatus::paper_exact,
            "total feasible-body measure at the symmetric diagonal, beta = 4");
        add("quat-volume", "pi^12/315071454005160652800000",
            matrix_ball_volume(4, 4).numeric(), ConjectureStatus::paper_exact,
            "quaternionic two-qubit total volume");
        add("trunc-volume", "pi^10/384458588946432000", matrix_ball_volume(4, 3).numeric(),
            ConjectureStatus::paper_exact, "truncated-quaternionic two-qubit total volume");
        add("qq-real-volume", "pi^9/1730063650258944000", matrix_ball_volume(6, 1).numeric(),
            ConjectureStatus::paper_exact, "real qubit-qutrit total volume");
        add("qq-complex-volume", "pi^15/298991549953302804677854494720000000",
            matrix_ball_volume(6, 2).numeric(), ConjectureStatus::paper_exact,
            "complex qubit-qutrit total volume");
        add("quat-sep-volume", "5989 pi^12 / 24386773433626137413880000000",
            5989.0 * std::pow(kPi, 12) / 24386773433626137413880000000.0,
            ConjectureStatus::paper_conjecture, "conjectured quaternionic separable volume");
        add("qq-R2-beta1", "1 - 4194304/(4849845 pi)", r2_closed_form(System::qubit_qutrit, 1),
            ConjectureStatus::paper_conjecture, "real qubit-qutrit diagonal-sector ratio");
        add("qq-R2-beta2", "(-44632342463 + 68578836480 log 2)/4190140110",
            r2_closed_form(System::qubit_qutrit, 2), ConjectureStatus::paper_conjecture,
            "complex qubit-qutrit diagonal-sector ratio");
        add("qq-R2-beta3",
            "-967504709/552123 - 2^64 (-67294453713397888 + 5638997741091 pi)"
            "/(71729672378917671400466262753675 pi^2)",
            r2_closed_form(System::qubit_qutrit, 3), ConjectureStatus::paper_conjecture,
            "truncated-quaternionic qubit-qutrit diagonal-sector ratio");
        add("qq-R2-beta4",
            "(192210846322598002116984324520591 - 277301145703236210250598232096768 log 2)"
            "/501570554133080277487570824",
            r2_closed_form(System::qubit_qutrit, 4), ConjectureStatus::paper_conjecture,
            "quaternionic qubit-qutrit diagonal-sector ratio");
        add("qq-R1-beta1", "0.226468", 0.226468, ConjectureStatus::paper_estimate,
            "real qubit-qutrit symmetric-point mass ratio, sample estimate");
        add("qq-R1-beta2", "0.047679", 0.047679, ConjectureStatus::paper_estimate,
            "complex qubit-qutrit symmetric-point mass ratio, sample estimate");
        add("qq-prob-beta1", "0.164125", 0.164125, ConjectureStatus::paper_estimate,
            "real qubit-qutrit separability probability estimate");
        add("qq-prob-beta2", "0.0330446", 0.0330446, ConjectureStatus::paper_estimate,
            "complex qubit-qutrit separability probability estimate");
        return v;
    }();
    return entries;
}

}  // namespace sepfn
