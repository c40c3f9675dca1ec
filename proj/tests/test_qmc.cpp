#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <vector>

#include "sepfn/checkpoint.hpp"
#include "sepfn/sobol.hpp"

using namespace sepfn;

TEST_CASE("1-D low-discrepancy stream is a (0,m,1)-net") {
    for (std::uint64_t key : {0ULL, 7ULL, 123456789ULL}) {
        LdsStream s(StreamKind::low_discrepancy, 1, key);
        for (int m : {3, 5}) {
            const int n = 1 << m;
            std::vector<int> cell_hits(n, 0);
            s.seek(0);
            double x;
            for (int k = 0; k < n; ++k) {
                s.next_point(&x);
                REQUIRE(x >= 0.0);
                REQUIRE(x < 1.0);
                cell_hits[static_cast<int>(x * n)]++;
            }
            for (int c : cell_hits) CHECK(c == 1);  // each dyadic cell hit exactly once
        }
    }
}

TEST_CASE("every 1-D projection of a d=6 stream is equidistributed") {
    LdsStream s(StreamKind::low_discrepancy, 6, 99);
    const int n = 1 << 10;
    std::vector<std::vector<int>> hits(6, std::vector<int>(n, 0));
    double p[6];
    for (int k = 0; k < n; ++k) {
        s.next_point(p);
        for (int j = 0; j < 6; ++j) hits[j][static_cast<int>(p[j] * n)]++;
    }
    for (int j = 0; j < 6; ++j)
        for (int c : hits[j]) CHECK(c == 1);
}

TEST_CASE("mean of first 2^16 points in d=6 is near the cube center") {
    LdsStream s(StreamKind::low_discrepancy, 6, 0);
    const int n = 1 << 16;
    double sum[6] = {0, 0, 0, 0, 0, 0};
    double p[6];
    for (int k = 0; k < n; ++k) {
        s.next_point(p);
        for (int j = 0; j < 6; ++j) sum[j] += p[j];
    }
    for (int j = 0; j < 6; ++j)
        CHECK_THAT(sum[j] / n, Catch::Matchers::WithinAbs(0.5, 0.002));
}

TEST_CASE("same key reproduces the identical stream; point_at is position independent") {
    for (StreamKind kind : {StreamKind::low_discrepancy, StreamKind::pseudo_random}) {
        LdsStream a(kind, 8, 31415), b(kind, 8, 31415);
        double pa[8], pb[8];
        for (int k = 0; k < 1000; ++k) {
            a.next_point(pa);
            b.next_point(pb);
            for (int j = 0; j < 8; ++j) CHECK(pa[j] == pb[j]);
        }
        LdsStream c(kind, 8, 31415);
        c.point_at(777, pb);
        a.seek(777);
        a.next_point(pa);
        for (int j = 0; j < 8; ++j) CHECK(pa[j] == pb[j]);
    }
}

TEST_CASE("different keys decorrelate streams") {
    LdsStream a(StreamKind::low_discrepancy, 4, 1), b(StreamKind::low_discrepancy, 4, 2);
    double pa[4], pb[4];
    int equal = 0;
    for (int k = 0; k < 100; ++k) {
        a.next_point(pa);
        b.next_point(pb);
        for (int j = 0; j < 4; ++j) equal += pa[j] == pb[j];
    }
    CHECK(equal < 10);
}

TEST_CASE("dimension limits") {
    CHECK_THROWS_AS(LdsStream(StreamKind::low_discrepancy, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(LdsStream(StreamKind::low_discrepancy, 65, 0), std::invalid_argument);
    LdsStream s(StreamKind::low_discrepancy, 64, 5);  // the top supported dimension works
    double p[64];
    s.next_point(p);
    for (int j = 0; j < 64; ++j) {
        CHECK(p[j] >= 0.0);
        CHECK(p[j] < 1.0);
    }
}

TEST_CASE("star-discrepancy proxy: low-discrepancy beats pseudo-random on dyadic boxes") {
    // Max deviation of empirical counts over a 32x32 dyadic grid, n=4096.
    auto max_dev = [](StreamKind kind, std::uint64_t key) {
        LdsStream s(kind, 2, key);
        const int n = 4096, g = 32;
        std::vector<int> counts(g * g, 0);
        double p[2];
        for (int k = 0; k < n; ++k) {
            s.next_point(p);
            counts[static_cast<int>(p[0] * g) * g + static_cast<int>(p[1] * g)]++;
        }
        const double expect = static_cast<double>(n) / (g * g);
        double dev = 0.0;
        for (int c : counts) dev = std::max(dev, std::abs(c - expect));
        return dev;
    };
    std::vector<double> lds, prand;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        lds.push_back(max_dev(StreamKind::low_discrepancy, seed));
        prand.push_back(max_dev(StreamKind::pseudo_random, seed));
    }
    std::sort(lds.begin(), lds.end());
    std::sort(prand.begin(), prand.end());
    const double med_lds = 0.5 * (lds[4] + lds[5]);
    const double med_prand = 0.5 * (prand[4] + prand[5]);
    CHECK(med_lds <= 0.5 * med_prand);
}

TEST_CASE("block partitioning with index-ordered merge is order independent") {
    // Accumulate per-cell counts of a 1-D histogram over N points, once
    // sequentially and once in B blocks processed in scrambled order.
    const int N = 10000, cells = 16;
    auto run_blocks = [&](const std::vector<int>& block_order, int B) {
        std::vector<std::vector<std::int64_t>> partial(B, std::vector<std::int64_t>(cells, 0));
        const int per = N / B;
        for (int b : block_order) {
            LdsStream s = LdsStream(StreamKind::low_discrepancy, 3, 77).child(
                static_cast<std::uint64_t>(b) * per);
            double p[3];
            for (int k = 0; k < per; ++k) {
                s.next_point(p);
                partial[b][static_cast<int>(p[1] * cells)]++;
            }
        }
        std::vector<std::int64_t> merged(cells, 0);
        for (int b = 0; b < B; ++b)  // merge in index order regardless of processing order
            for (int c = 0; c < cells; ++c) merged[c] += partial[b][c];
        return merged;
    };
    std::vector<int> fwd{0, 1, 2, 3, 4, 5, 6, 7}, scrambled{5, 2, 7, 0, 3, 6, 1, 4};
    auto a = run_blocks(fwd, 8), b = run_blocks(scrambled, 8);
    CHECK(a == b);

    std::vector<int> one{0};
    std::vector<std::int64_t> whole = run_blocks(one, 1);
    CHECK(a == whole);
}

TEST_CASE("checkpoint roundtrip resumes bit-identically") {
    const std::uint64_t fp = fingerprint("scan two-qubit --beta 2 --n 2000 --seed 9");
    const int cells = 8, N = 2000, half = 1000;

    // Uninterrupted run.
    std::vector<std::int64_t> direct(cells, 0);
    {
        LdsStream s(StreamKind::low_discrepancy, 2, 9);
        double p[2];
        for (int k = 0; k < N; ++k) {
            s.next_point(p);
            direct[static_cast<int>(p[0] * cells)]++;
        }
    }

    // Run to the halfway point, save, restore, finish.
    std::vector<std::int64_t> acc(cells, 0);
    LdsStream s(StreamKind::low_discrepancy, 2, 9);
    double p[2];
    for (int k = 0; k < half; ++k) {
        s.next_point(p);
        acc[static_cast<int>(p[0] * cells)]++;
    }
    Checkpoint cp = make_checkpoint(s, acc, fp);
    const std::string path = "ckpt_roundtrip_test.json";
    save_checkpoint(cp, path);

    Checkpoint loaded = load_checkpoint(path, fp);
    LdsStream rs = restore_stream(loaded);
    CHECK(rs.next_index() == static_cast<std::uint64_t>(half));
    std::vector<std::int64_t> acc2 = loaded.accumulators;
    for (int k = half; k < N; ++k) {
        rs.next_point(p);
        acc2[static_cast<int>(p[0] * cells)]++;
    }
    CHECK(acc2 == direct);

    // Serialization is byte-stable apart from the wall-clock field.
    Checkpoint again = make_checkpoint(s, acc, fp);
    again.written_at = cp.written_at;
    CHECK(serialize_checkpoint(again) == serialize_checkpoint(cp));

    // Fingerprint mismatch refuses to resume.
    CHECK_THROWS(load_checkpoint(path, fp ^ 1ULL));
    std::remove(path.c_str());
}

TEST_CASE("checkpoint at index 0 preserves empty accumulators") {
    LdsStream s(StreamKind::pseudo_random, 4, 123);
    std::vector<std::int64_t> empty;
    Checkpoint cp = make_checkpoint(s, empty, fingerprint("x"));
    std::string text = serialize_checkpoint(cp);
    Checkpoint back = checkpoint_from_json(nlohmann::json::parse(text));
    CHECK(back.next_index == 0);
    CHECK(back.accumulators.empty());
    CHECK(back.kind == StreamKind::pseudo_random);
    CHECK(back.dim == 4);
    CHECK(back.key == 123);
}
