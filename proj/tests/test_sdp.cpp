#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cbnorm/linalg.hpp"
#include "cbnorm/sdp.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cbnorm;
using testsupport::Rng;

namespace {

// max <C, X> subject to Tr X = 1, X >= 0; optimum is the top eigenvalue.
SdpProblem top_eigenvalue_problem(const HermitianMatrix& c) {
    SdpProblem p;
    p.name = "top-eig";
    p.block_dims = {c.dim()};
    p.objective = {c};
    p.constraints.push_back({{HermitianMatrix::identity(c.dim())}, 1.0});
    return p;
}

double lambda_max(const HermitianMatrix& h) { return herm_eigenvalues(h).back(); }

}  // namespace

TEST_CASE("realify doubles the spectrum") {
    Rng rng(11);
    for (int n : {1, 2, 4}) {
        HermitianMatrix h = testsupport::random_hermitian(rng, n);
        std::vector<double> ev = herm_eigenvalues(h);
        HermitianMatrix r = realify(h);
        REQUIRE(r.dim() == 2 * n);
        CHECK(max_abs(r.mat() - r.mat().transpose()) <= 1e-14);
        std::vector<double> rev = herm_eigenvalues(r);
        for (int i = 0; i < n; ++i) {
            CHECK(rev[2 * i] == doctest::Approx(ev[i]).epsilon(1e-10));
            CHECK(rev[2 * i + 1] == doctest::Approx(ev[i]).epsilon(1e-10));
        }
    }
}

TEST_CASE("top eigenvalue problems solve to optimality") {
    Rng rng(13);
    for (int n : {1, 2, 3, 5}) {
        HermitianMatrix c = testsupport::random_hermitian(rng, n);
        SdpProblem p = top_eigenvalue_problem(c);
        SdpSolution sol = solve(p, 1e-9);
        REQUIRE(sol.status == SdpStatus::optimal);
        const double expect = lambda_max(c);
        CHECK(sol.alpha == doctest::Approx(expect).epsilon(1e-7));
        CHECK(sol.alpha <= sol.beta + 1e-8 * (1.0 + std::abs(sol.beta)));
        REQUIRE(sol.y.size() == 1);
        CHECK(sol.y[0] == doctest::Approx(expect).epsilon(1e-6));

        Certificate cert = check(p, sol);
        CHECK(cert.primal_residual <= 1e-8);
        CHECK(cert.dual_min_eig >= -1e-7);
        CHECK(cert.weak_duality_ok);
        CHECK(cert.alpha_lower <= expect + 1e-7);
        CHECK(cert.beta_upper >= expect - 1e-7);

        // returned dual slack matches the one implied by y
        ComplexMatrix implied = c.mat() * (-1.0);
        for (int i = 0; i < n; ++i) implied(i, i) += sol.y[0];
        CHECK(max_abs_diff(sol.s[0].mat(), implied) <= 1e-6 * (1.0 + max_abs(implied)));
        CHECK(herm_eigenvalues(sol.x[0]).front() >= -1e-7);
    }
}

TEST_CASE("independent blocks decouple") {
    Rng rng(17);
    HermitianMatrix h1 = testsupport::random_hermitian(rng, 2);
    HermitianMatrix h2 = testsupport::random_hermitian(rng, 3);
    SdpProblem p;
    p.block_dims = {2, 3};
    p.objective = {h1, h2};
    p.constraints.push_back(
        {{HermitianMatrix::identity(2), HermitianMatrix::zero(3)}, 1.0});
    p.constraints.push_back(
        {{HermitianMatrix::zero(2), HermitianMatrix::identity(3)}, 1.0});
    SdpSolution sol = solve(p, 1e-9);
    REQUIRE(sol.status == SdpStatus::optimal);
    const double expect = lambda_max(h1) + lambda_max(h2);
    CHECK(sol.alpha == doctest::Approx(expect).epsilon(1e-7));
}

TEST_CASE("off-diagonal objective recovers the geometric mean") {
    // X = [[p, x], [conj x, q]] >= 0 caps Re x at sqrt(p q); the objective
    // picks the off-diagonal sum, so the optimum is 2 sqrt(p q) / 2.
    const double pv = 0.3, qv = 0.7;
    ComplexMatrix c(2, 2);
    c(0, 1) = 0.5;
    c(1, 0) = 0.5;
    SdpProblem p;
    p.block_dims = {2};
    p.objective = {HermitianMatrix(c)};
    ComplexMatrix e00(2, 2), e11(2, 2);
    e00(0, 0) = 1.0;
    e11(1, 1) = 1.0;
    p.constraints.push_back({{HermitianMatrix(e00)}, pv});
    p.constraints.push_back({{HermitianMatrix(e11)}, qv});

    std::vector<std::string> lines;
    SolveOptions opt;
    opt.tol = 1e-9;
    opt.trace = [&lines](const std::string& l) { lines.push_back(l); };
    SdpSolution sol = solve(p, opt);
    REQUIRE(sol.status == SdpStatus::optimal);
    CHECK(sol.alpha == doctest::Approx(std::sqrt(pv * qv)).epsilon(1e-7));

    // weak duality must hold along the whole traced path, not just at the end
    REQUIRE(lines.size() >= 2);
    for (const std::string& line : lines) {
        int it = 0;
        double a = 0.0, b = 0.0;
        REQUIRE(std::sscanf(line.c_str(), "iter %d alpha %lf beta %lf", &it, &a, &b) == 3);
        CHECK(a <= b + 10.0 * opt.tol);
    }
}

TEST_CASE("solves are deterministic") {
    Rng rng(19);
    SdpProblem p = top_eigenvalue_problem(testsupport::random_hermitian(rng, 4));
    SdpSolution s1 = solve(p, 1e-9);
    SdpSolution s2 = solve(p, 1e-9);
    CHECK(s1.alpha == s2.alpha);
    CHECK(s1.beta == s2.beta);
    CHECK(s1.iterations == s2.iterations);
    CHECK(max_abs_diff(s1.x[0].mat(), s2.x[0].mat()) == 0.0);
    for (size_t i = 0; i < s1.y.size(); ++i) CHECK(s1.y[i] == s2.y[i]);
}

TEST_CASE("primal infeasibility is flagged") {
    SdpProblem p;
    p.block_dims = {2};
    p.objective = {HermitianMatrix::zero(2)};
    ComplexMatrix e00(2, 2);
    e00(0, 0) = 1.0;
    p.constraints.push_back({{HermitianMatrix(e00)}, -1.0});
    SdpSolution sol = solve(p, 1e-8);
    CHECK(sol.status == SdpStatus::infeasible_suspected);
}

TEST_CASE("presolve drops dependent rows and keeps dual indexing") {
    Rng rng(23);
    HermitianMatrix h = testsupport::random_hermitian(rng, 3);
    SdpProblem p = top_eigenvalue_problem(h);
    // duplicate the trace row and add an all-zero row; both are removable
    p.constraints.push_back(p.constraints.front());
    p.constraints.push_back({{HermitianMatrix::zero(3)}, 0.0});
    SdpSolution sol = solve(p, 1e-9);
    REQUIRE(sol.status == SdpStatus::optimal);
    CHECK(sol.alpha == doctest::Approx(lambda_max(h)).epsilon(1e-7));
    REQUIRE(sol.y.size() == 3);
    CHECK(sol.y[1] == 0.0);
    CHECK(sol.y[2] == 0.0);
    CHECK(check(p, sol).primal_residual <= 1e-8);
}

TEST_CASE("presolve rejects inconsistent rows") {
    SdpProblem p = top_eigenvalue_problem(HermitianMatrix::identity(2));
    p.constraints.push_back({{HermitianMatrix::identity(2)}, 2.0});
    CHECK_THROWS_AS(solve(p, 1e-8), Error);

    SdpProblem z = top_eigenvalue_problem(HermitianMatrix::identity(2));
    z.constraints.push_back({{HermitianMatrix::zero(2)}, 0.5});
    CHECK_THROWS_AS(solve(z, 1e-8), Error);
}

TEST_CASE("unconstrained problems are resolved analytically") {
    SdpProblem p;
    p.block_dims = {2};
    p.objective = {HermitianMatrix::diagonal({-1.0, -2.0})};
    SdpSolution sol = solve(p, 1e-8);
    REQUIRE(sol.status == SdpStatus::optimal);
    CHECK(sol.alpha == 0.0);
    CHECK(max_abs(sol.x[0].mat()) == 0.0);

    SdpProblem q;
    q.block_dims = {2};
    q.objective = {HermitianMatrix::diagonal({1.0, -2.0})};
    CHECK(solve(q, 1e-8).status == SdpStatus::infeasible_suspected);
}

TEST_CASE("malformed problems are rejected") {
    SdpProblem p;
    p.block_dims = {2};
    p.objective = {HermitianMatrix::identity(3)};  // wrong block size
    p.constraints.push_back({{HermitianMatrix::identity(2)}, 1.0});
    CHECK_THROWS_AS(solve(p, 1e-8), Error);

    SdpProblem q = top_eigenvalue_problem(HermitianMatrix::identity(2));
    q.constraints.front().blocks.push_back(HermitianMatrix::identity(2));
    CHECK_THROWS_AS(solve(q, 1e-8), Error);

    SdpProblem r = top_eigenvalue_problem(HermitianMatrix::identity(2));
    CHECK_THROWS_AS(solve(r, -1.0), Error);
    CHECK_THROWS_AS(solve(r, 0.0), Error);
}

TEST_CASE("perturbed solutions show up in the certificate") {
    SdpProblem p = top_eigenvalue_problem(HermitianMatrix::diagonal({0.25, 0.75}));
    SdpSolution sol = solve(p, 1e-9);
    REQUIRE(sol.status == SdpStatus::optimal);
    sol.x[0] = HermitianMatrix(sol.x[0].mat() + ComplexMatrix::identity(2) * 1e-3);
    Certificate cert = check(p, sol);
    CHECK(cert.primal_residual >= 1e-3);
}

TEST_CASE("strict feasibility probe matches known geometry") {
    SdpProblem p = top_eigenvalue_problem(HermitianMatrix::diagonal({0.5, -0.5}));
    FeasibilityReport rep = strict_feasibility_probe(p);
    CHECK(rep.primal_found);
    CHECK(rep.primal_margin > 1e-3);  // X = I/2 fits with margin 1/2
    CHECK(rep.dual_found);
    CHECK(rep.dual_margin > 1e-3);  // y = lambda_max + 1 gives slack >= 1

    SdpProblem bad;
    bad.block_dims = {2};
    bad.objective = {HermitianMatrix::zero(2)};
    ComplexMatrix e00(2, 2);
    e00(0, 0) = 1.0;
    bad.constraints.push_back({{HermitianMatrix(e00)}, -1.0});
    FeasibilityReport brep = strict_feasibility_probe(bad);
    CHECK_FALSE(brep.primal_found);
}
