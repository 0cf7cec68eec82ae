#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <utility>

#include "cbnorm/channels.hpp"
#include "cbnorm/linalg.hpp"
#include "cbnorm/oracles.hpp"
#include "cbnorm/programs.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cbnorm;
using testsupport::Rng;

namespace {

ChoiMatrix identity_choi(int n) {
    StinespringPair id(ComplexMatrix::identity(n), ComplexMatrix::identity(n), n, 1);
    return choi_from_stinespring(id);
}

ChoiMatrix swap_choi(int n) {
    ComplexMatrix j(n * n, n * n);
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i) j(a * n + i, i * n + a) = 1.0;
    return ChoiMatrix(std::move(j), n, n);
}

// random completely positive map with a PSD Choi matrix of bounded scale
ChoiMatrix random_cp_choi(Rng& rng, int n, int m) {
    ComplexMatrix g = testsupport::random_matrix(rng, m * n, m * n);
    ComplexMatrix j = g * g.adjoint();
    const double scale = 1.0 / (1.0 + max_abs(j));
    return ChoiMatrix(j * scale, n, m);
}

double witness_value(const ChoiMatrix& c, const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix t = kron(ComplexMatrix::identity(c.m), a.transpose()) * c.j *
                      kron(ComplexMatrix::identity(c.m), b.conjugate());
    return trace_norm(t);
}

}  // namespace

TEST_CASE("cp shortcut equals the top eigenvalue of the traced choi matrix") {
    CHECK(cp_diamond_oracle(identity_choi(2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cp_diamond_oracle(identity_choi(3)) == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(307);
    for (int trial = 0; trial < 4; ++trial) {
        ChoiMatrix c = random_cp_choi(rng, 2, 2);
        ComplexMatrix traced = partial_trace(c.j, c.m, c.n, Keep::second);
        const double expect = herm_eigenvalues(HermitianMatrix(traced, 1e-10)).back();
        CHECK(cp_diamond_oracle(c) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("cp shortcut agrees with the full program on cp maps") {
    Rng rng(311);
    for (int trial = 0; trial < 3; ++trial) {
        ChoiMatrix c = random_cp_choi(rng, 2, 2);
        NormResult full = diamond_norm(ChannelRep(c));
        REQUIRE(full.solution.status == SdpStatus::optimal);
        CHECK(std::abs(cp_diamond_oracle(c) - full.value) <= 2e-6 * (1.0 + full.value));
    }
}

TEST_CASE("cp shortcut refuses maps outside its regime") {
    // swap = choi matrix of transposition: Hermitian but not PSD
    CHECK_THROWS_AS(cp_diamond_oracle(swap_choi(2)), WrongRegimeError);
    try {
        cp_diamond_oracle(swap_choi(2));
    } catch (const WrongRegimeError& e) {
        CHECK(e.min_eig() == doctest::Approx(-1.0).epsilon(1e-9));
    }

    // non-Hermitian choi matrix (generic map pair)
    Rng rng(313);
    ComplexMatrix g = testsupport::random_matrix(rng, 4, 4);
    ChoiMatrix nh(g, 2, 2);
    CHECK_THROWS_AS(cp_diamond_oracle(nh), WrongRegimeError);
}

TEST_CASE("ascent certifies the identity channel immediately") {
    AscentConfig cfg;
    cfg.restarts = 1;  // the entangled start alone must do it
    AscentResult r = rank_one_ascent(identity_choi(2), cfg);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.best_restart == 0);
    CHECK(frobenius_norm(r.a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(frobenius_norm(r.b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ascent reaches the transposition optimum") {
    for (int n : {2, 3}) {
        AscentResult r = rank_one_ascent(swap_choi(n));
        CHECK(r.value >= n - 1e-5);
        CHECK(r.value <= n + 1e-8);
        // reported witnesses reproduce the reported value
        CHECK(witness_value(swap_choi(n), r.a, r.b) ==
              doctest::Approx(r.value).epsilon(1e-10));
    }
}

TEST_CASE("ascent lower-bounds the program value") {
    Rng rng(317);
    for (int trial = 0; trial < 3; ++trial) {
        // generic (non-CP, non-Hermitian-choi) map
        ComplexMatrix g = testsupport::random_matrix(rng, 4, 4);
        const double scale = 1.0 / (1.0 + max_abs(g));
        ChoiMatrix c(g * scale, 2, 2);
        NormResult full = diamond_norm(ChannelRep(c));
        REQUIRE(full.solution.status == SdpStatus::optimal);
        AscentResult r = rank_one_ascent(c);
        CHECK(r.value <= full.value + 1e-6 * (1.0 + full.value));
        CHECK(r.value >= 0.0);
        CHECK(witness_value(c, r.a, r.b) == doctest::Approx(r.value).epsilon(1e-10));
    }
}

TEST_CASE("ascent is deterministic for a fixed seed") {
    ChoiMatrix c = swap_choi(2);
    AscentConfig cfg;
    cfg.restarts = 4;
    cfg.seed = 42;
    AscentResult r1 = rank_one_ascent(c, cfg);
    AscentResult r2 = rank_one_ascent(c, cfg);
    CHECK(r1.value == r2.value);
    CHECK(r1.best_restart == r2.best_restart);
    CHECK(max_abs_diff(r1.a, r2.a) == 0.0);
    CHECK(max_abs_diff(r1.b, r2.b) == 0.0);
}

TEST_CASE("diagonal fidelity oracle") {
    CHECK(commuting_fidelity_oracle({0.5, 0.5}, {0.25, 0.75}) ==
          doctest::Approx(0.9659258262890683).epsilon(1e-15));
    CHECK(commuting_fidelity_oracle({0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(commuting_fidelity_oracle({}, {}) == 0.0);
    CHECK_THROWS_AS(commuting_fidelity_oracle({0.5}, {0.5, 0.5}), ShapeError);
    CHECK_THROWS_AS(commuting_fidelity_oracle({-0.1, 1.1}, {0.5, 0.5}), Error);
}

TEST_CASE("diagonal oracle matches the full fidelity program") {
    Rng rng(331);
    std::vector<double> pd, qd;
    double psum = 0.0, qsum = 0.0;
    for (int i = 0; i < 3; ++i) {
        pd.push_back(rng.uniform() + 0.1);
        qd.push_back(rng.uniform() + 0.1);
        psum += pd.back();
        qsum += qd.back();
    }
    for (int i = 0; i < 3; ++i) {
        pd[i] /= psum;
        qd[i] /= qsum;
    }
    NormResult r = fidelity_sdp(HermitianMatrix::diagonal(pd), HermitianMatrix::diagonal(qd));
    REQUIRE(r.solution.status == SdpStatus::optimal);
    CHECK(std::abs(r.value - commuting_fidelity_oracle(pd, qd)) <= 1e-6);
}
