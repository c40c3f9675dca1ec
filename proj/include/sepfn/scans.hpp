#pragma once

// Sampling drivers: two-qubit mu-sweeps, qubit-qutrit (nu1,nu2)-sweeps, and
// the separable/feasible ratio at the symmetric point.
//
// All drivers consume index-addressed stream blocks in rounds: each round
// hands `workers` consecutive blocks to the pool, then merges the per-block
// integer accumulators in index order. Every sample index is processed
// exactly once with a position-independent stream, so results are
// bit-identical for any worker count, and a run can stop at a round boundary
// and resume from a checkpointed accumulator vector.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "sepfn/bloore.hpp"
#include "sepfn/estimate.hpp"
#include "sepfn/sampling.hpp"
#include "sepfn/sobol.hpp"

namespace sepfn {

/// How W samples are drawn.
///  - cube: componentwise uniform in [-1,1], rejection on PSD (Lebesgue).
///  - spherical: per-entry uniform hyperspherical parameters, rejection on
///    PSD. Feasibility fractions match the reference tabulations for
///    beta >= 3, where the cube proposal essentially never lands in the
///    feasible body; the induced measure on W is not Lebesgue.
///  - direct: exact Lebesgue-uniform draws from the feasible body (every
///    sample feasible); the measure-faithful choice for function estimates.
enum class Proposal { cube, spherical, direct };

inline Proposal default_proposal(int beta) {
    return beta <= 2 ? Proposal::cube : Proposal::spherical;
}

inline const char* proposal_name(Proposal p) {
    switch (p) {
        case Proposal::cube: return "cube";
        case Proposal::spherical: return "spherical";
        default: return "direct";
    }
}

struct ScanOptions {
    StreamKind kind = StreamKind::low_discrepancy;
    std::uint64_t key = 0;
    int workers = 1;
    bool proposal_set = false;  // when false, default_proposal(beta) applies
    Proposal proposal = Proposal::cube;
    // Resume state: accumulators after `resume_done` samples.
    long long resume_done = 0;
    std::vector<std::int64_t> resume_acc;
    // Called after each merged round with (samples done, accumulators);
    // return false to stop at this round boundary (partial results kept).
    std::function<bool(long long, const std::vector<std::int64_t>&)> on_round;
};

/// Per-grid-point integer counts of separable samples plus the feasible
/// total. s_raw = separable/feasible; s_norm rescales to value 1 at the
/// symmetric point (mu = 1 or nu1 = nu2 = 1).
struct SepFuncTable {
    System system = System::two_qubit;
    int beta = 1;
    Proposal proposal = Proposal::cube;
    StreamKind kind = StreamKind::low_discrepancy;
    std::uint64_t key = 0;
    long long n_samples = 0;  // samples consumed (drawn), including rejected
    long long n_feasible = 0;
    std::vector<double> axis;  // mu grid, or the nu axis of a square lattice
    std::vector<std::int64_t> separable_counts;  // axis.size() or axis.size()^2

    std::size_t symmetric_index() const { return separable_counts.size() - 1; }
    bool usable() const {
        return n_feasible > 0 && separable_counts[symmetric_index()] > 0;
    }
    double feasible_fraction() const {
        return n_samples > 0 ? static_cast<double>(n_feasible) / n_samples : 0.0;
    }
    double s_raw(std::size_t g) const {
        return static_cast<double>(separable_counts[g]) / n_feasible;
    }
    double s_norm(std::size_t g) const {
        return static_cast<double>(separable_counts[g]) /
               static_cast<double>(separable_counts[symmetric_index()]);
    }
};

/// Uniform grid over [0,1] including both endpoints.
inline std::vector<double> uniform_grid(int points) {
    if (points < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = static_cast<double>(i) / (points - 1);
    return g;
}

namespace detail {

constexpr long long kScanBlock = 16384;

/// Round-synchronous block engine. body(stream, first_index, count, acc)
/// accumulates into a zeroed scratch vector; scratches merge by addition in
/// block order. Returns the number of samples processed (a round boundary,
/// == n_end unless on_round stopped the run).
inline long long run_blocks(
    StreamKind kind, int dim, std::uint64_t key, long long n_begin, long long n_end,
    int workers, std::vector<std::int64_t>& acc,
    const std::function<void(LdsStream&, long long, std::int64_t*)>& block_body,
    const std::function<bool(long long, const std::vector<std::int64_t>&)>& on_round) {
    if (workers < 1) throw std::invalid_argument("run_blocks: workers must be >= 1");
    if (n_begin % kScanBlock != 0 && n_begin != n_end)
        throw std::invalid_argument("run_blocks: resume point must be a block boundary");
    long long done = n_begin;
    while (done < n_end) {
        const int blocks_this_round = static_cast<int>(
            std::min<long long>(workers, (n_end - done + kScanBlock - 1) / kScanBlock));
        std::vector<std::vector<std::int64_t>> scratch(
            blocks_this_round, std::vector<std::int64_t>(acc.size(), 0));
        std::vector<std::thread> pool;
        pool.reserve(blocks_this_round);
        for (int b = 0; b < blocks_this_round; ++b) {
            const long long first = done + static_cast<long long>(b) * kScanBlock;
            const long long count = std::min(kScanBlock, n_end - first);
            pool.emplace_back([&, b, first, count] {
                LdsStream s = LdsStream(kind, dim, key).child(static_cast<std::uint64_t>(first));
                block_body(s, count, scratch[b].data());
            });
        }
        for (auto& t : pool) t.join();
        for (int b = 0; b < blocks_this_round; ++b)
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += scratch[b][i];
        done += std::min<long long>(static_cast<long long>(blocks_this_round) * kScanBlock,
                                    n_end - done);
        if (on_round && !on_round(done, acc)) break;
    }
    return done;
}

inline BlooreSample draw_sample(System sys, int beta, Proposal prop, const double* u,
                                double tol = 1e-10) {
    if (prop == Proposal::direct) return feasible_sample(sys, beta, u);
    BlooreSample s =
        prop == Proposal::cube ? make_bloore(sys, beta, u) : make_bloore_spherical(sys, beta, u);
    s.feasible = bloore_feasible_fast(s, tol);
    return s;
}

}  // namespace detail

/// mu-sweep for the 4x4 system: counts separable verdicts over the grid for
/// each feasible sample. Accumulator layout: [n_feasible, counts...].
inline SepFuncTable scan_2qubit(int beta, long long n_samples, const std::vector<double>& mu_grid,
                                const ScanOptions& opts = {}) {
    if (n_samples < 10000) throw std::invalid_argument("scan_2qubit: need n_samples >= 1e4");
    if (mu_grid.empty() || mu_grid.back() != 1.0)
        throw std::invalid_argument("scan_2qubit: grid must end at mu = 1");
    const Proposal prop = opts.proposal_set ? opts.proposal : default_proposal(beta);
    const int dim = bloore_stream_dim(System::two_qubit, beta);
    SepFuncTable t;
    t.system = System::two_qubit;
    t.beta = beta;
    t.proposal = prop;
    t.kind = opts.kind;
    t.key = opts.key;
    t.axis = mu_grid;
    t.separable_counts.assign(mu_grid.size(), 0);

    std::vector<std::int64_t> acc(1 + mu_grid.size(), 0);
    if (!opts.resume_acc.empty()) {
        if (opts.resume_acc.size() != acc.size())
            throw std::invalid_argument("scan_2qubit: resume accumulator size mismatch");
        acc = opts.resume_acc;
    }
    auto body = [&](LdsStream& s, long long count, std::int64_t* a) {
        std::vector<double> u(dim);
        for (long long k = 0; k < count; ++k) {
            s.next_point(u.data());
            BlooreSample smp = detail::draw_sample(System::two_qubit, beta, prop, u.data());
            if (!smp.feasible) continue;
            ++a[0];
            // mu = 0 degenerates the canonical diagonal; the PPT condition
            // there forces w_23 = 0, a measure-zero event, so the count is 0.
            for (std::size_t g = 0; g < mu_grid.size(); ++g)
                if (mu_grid[g] > 0.0 && ppt_verdict_fast(smp, {.mu = mu_grid[g]})) ++a[1 + g];
        }
    };
    t.n_samples = detail::run_blocks(opts.kind, dim, opts.key, opts.resume_done, n_samples,
                                     opts.workers, acc, body, opts.on_round);
    t.n_feasible = acc[0];
    for (std::size_t g = 0; g < mu_grid.size(); ++g) t.separable_counts[g] = acc[1 + g];
    return t;
}

/// (nu1, nu2)-sweep for the 6x6 system over a square lattice axis x axis;
/// counts indexed row-major as i * axis.size() + j for (nu1_i, nu2_j).
inline SepFuncTable scan_qubit_qutrit(int beta, long long n_samples,
                                      const std::vector<double>& nu_axis,
                                      const ScanOptions& opts = {}) {
    if (beta != 1 && beta != 2)
        throw std::invalid_argument("scan_qubit_qutrit: beta must be 1 or 2");
    if (nu_axis.empty() || nu_axis.back() != 1.0)
        throw std::invalid_argument("scan_qubit_qutrit: axis must end at nu = 1");
    const Proposal prop = opts.proposal_set ? opts.proposal : default_proposal(beta);
    // Rejection proposals need budgets sized to the feasible yield; direct
    // draws are all feasible, so the two-qubit floor applies.
    const long long min_n =
        prop == Proposal::direct ? 10000 : (beta == 1 ? 100000 : 10000000);
    if (n_samples < min_n)
        throw std::invalid_argument("scan_qubit_qutrit: sample budget below the feasible yield");
    const int dim = bloore_stream_dim(System::qubit_qutrit, beta);
    const std::size_t ng = nu_axis.size() * nu_axis.size();
    SepFuncTable t;
    t.system = System::qubit_qutrit;
    t.beta = beta;
    t.proposal = prop;
    t.kind = opts.kind;
    t.key = opts.key;
    t.axis = nu_axis;
    t.separable_counts.assign(ng, 0);

    std::vector<std::int64_t> acc(1 + ng, 0);
    if (!opts.resume_acc.empty()) {
        if (opts.resume_acc.size() != acc.size())
            throw std::invalid_argument("scan_qubit_qutrit: resume accumulator size mismatch");
        acc = opts.resume_acc;
    }
    auto body = [&](LdsStream& s, long long count, std::int64_t* a) {
        std::vector<double> u(dim);
        for (long long k = 0; k < count; ++k) {
            s.next_point(u.data());
            BlooreSample smp = detail::draw_sample(System::qubit_qutrit, beta, prop, u.data());
            if (!smp.feasible) continue;
            ++a[0];
            // nu = 0 degenerates the canonical diagonal (see the mu = 0 note
            // in scan_2qubit); those lattice lines keep zero counts.
            for (std::size_t i = 0; i < nu_axis.size(); ++i)
                for (std::size_t j = 0; j < nu_axis.size(); ++j)
                    if (nu_axis[i] > 0.0 && nu_axis[j] > 0.0 &&
                        ppt_verdict_fast(smp, {.nu1 = nu_axis[i], .nu2 = nu_axis[j]}))
                        ++a[1 + i * nu_axis.size() + j];
        }
    };
    t.n_samples = detail::run_blocks(opts.kind, dim, opts.key, opts.resume_done, n_samples,
                                     opts.workers, acc, body, opts.on_round);
    t.n_feasible = acc[0];
    for (std::size_t g = 0; g < ng; ++g) t.separable_counts[g] = acc[1 + g];
    return t;
}

/// Separable/feasible ratio at the symmetric point (mu = 1, or
/// nu1 = nu2 = 1), sampled Lebesgue-uniformly on the feasible body so the
/// ratio is a plain binomial fraction with a batch standard error.
inline EstimateSummary r1_estimate(int beta, System sys, long long n_samples,
                                   const ScanOptions& opts = {}) {
    EstimateSummary e;
    e.label = std::string("r1/") + (sys == System::two_qubit ? "two-qubit" : "qubit-qutrit") +
              "/beta" + std::to_string(beta);
    e.n_samples = n_samples;
    if (n_samples < 1000) {
        e.flagged = true;
        e.note = "fewer than 1e3 feasible points";
        return e;
    }
    const int dim = bloore_stream_dim(sys, beta);
    constexpr int kBatches = 32;
    // acc: [sep_total, batch sep counts..., batch sizes...]
    std::vector<std::int64_t> acc(1 + 2 * kBatches, 0);
    if (!opts.resume_acc.empty()) {
        if (opts.resume_acc.size() != acc.size())
            throw std::invalid_argument("r1_estimate: resume accumulator size mismatch");
        acc = opts.resume_acc;
    }
    const long long per_batch = (n_samples + kBatches - 1) / kBatches;
    auto body = [&](LdsStream& s, long long count, std::int64_t* a) {
        std::vector<double> u(dim);
        const long long first = static_cast<long long>(s.next_index());
        for (long long k = 0; k < count; ++k) {
            s.next_point(u.data());
            BlooreSample smp = feasible_sample(sys, beta, u.data());
            const int b = static_cast<int>(std::min<long long>((first + k) / per_batch,
                                                               kBatches - 1));
            ++a[1 + kBatches + b];
            if (ppt_verdict_fast(smp, RatioPoint{})) {
                ++a[0];
                ++a[1 + b];
            }
        }
    };
    detail::run_blocks(opts.kind, dim, opts.key, opts.resume_done, n_samples, opts.workers, acc,
                       body, opts.on_round);
    long long total = 0;
    for (int b = 0; b < kBatches; ++b) total += acc[1 + kBatches + b];
    e.n_feasible = total;  // every direct draw is feasible
    if (total < 1000) {
        e.flagged = true;
        e.note = "fewer than 1e3 feasible points";
        return e;
    }
    e.value = static_cast<double>(acc[0]) / total;
    double mean = 0.0;
    int used = 0;
    std::vector<double> ratios;
    for (int b = 0; b < kBatches; ++b)
        if (acc[1 + kBatches + b] > 0) {
            ratios.push_back(static_cast<double>(acc[1 + b]) / acc[1 + kBatches + b]);
            mean += ratios.back();
            ++used;
        }
    mean /= used;
    double var = 0.0;
    for (double r : ratios) var += (r - mean) * (r - mean);
    if (used > 1) var /= static_cast<double>(used - 1) * used;
    e.std_error = std::sqrt(var);
    return e;
}

/// CSV emission per the data-file contract: two-qubit rows are
/// `mu,feasible,separable,s_raw,s_norm`; qubit-qutrit rows are
/// `nu1,nu2,feasible,separable,s_norm`. Floats carry 17 significant digits.
inline std::string table_csv(const SepFuncTable& t) {
    char buf[160];
    std::string out;
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    if (t.system == System::two_qubit) {
        out = "mu,feasible,separable,s_raw,s_norm\n";
        for (std::size_t g = 0; g < t.separable_counts.size(); ++g) {
            std::snprintf(buf, sizeof buf, "%s,%lld,%lld,", fmt(t.axis[g]).c_str(),
                          static_cast<long long>(t.n_feasible),
                          static_cast<long long>(t.separable_counts[g]));
            out += buf;
            out += fmt(t.usable() ? t.s_raw(g) : 0.0) + "," +
                   fmt(t.usable() ? t.s_norm(g) : 0.0) + "\n";
        }
        return out;
    }
    out = "nu1,nu2,feasible,separable,s_norm\n";
    const std::size_t n = t.axis.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t g = i * n + j;
            std::snprintf(buf, sizeof buf, "%s,%s,%lld,%lld,", fmt(t.axis[i]).c_str(),
                          fmt(t.axis[j]).c_str(), static_cast<long long>(t.n_feasible),
                          static_cast<long long>(t.separable_counts[g]));
            out += buf;
            out += fmt(t.usable() ? t.s_norm(g) : 0.0) + "\n";
        }
    return out;
}

}  // namespace sepfn
