#include "cbnorm/programs.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cbnorm/linalg.hpp"

namespace cbnorm {

namespace {

HermitianMatrix as_herm(ComplexMatrix m) {
    const double tol = 1e-10 * (1.0 + max_abs(m));
    return HermitianMatrix(std::move(m), tol);
}

// B placed at (off, off) inside a zero block of dimension big.
HermitianMatrix embed(const HermitianMatrix& b, int big, int off) {
    ComplexMatrix m(big, big);
    m.place(off, off, b.mat());
    return HermitianMatrix(std::move(m));
}

// [[0, K], [K*, 0]] / 2: the objective coupling the off-diagonal corner to K.
HermitianMatrix coupling_objective(const ComplexMatrix& k) {
    const int r = k.rows(), c = k.cols();
    if (r != c) throw ShapeError("coupling objective requires a square corner");
    ComplexMatrix m(2 * r, 2 * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            m(i, r + j) = 0.5 * k(i, j);
            m(r + j, i) = 0.5 * std::conj(k(i, j));
        }
    return HermitianMatrix(std::move(m));
}

double clamp_value(const SdpSolution& sol) {
    return std::max(0.0, 0.5 * (sol.alpha + sol.beta));
}

}  // namespace

SdpProblem build_fidelity_sdp(const HermitianMatrix& p, const HermitianMatrix& q) {
    if (p.dim() != q.dim()) throw ShapeError("fidelity requires operators of equal dimension");
    const int n = p.dim();
    SdpProblem prob;
    prob.name = "fidelity";
    prob.block_dims = {2 * n};
    prob.objective = {coupling_objective(ComplexMatrix::identity(n))};

    const std::vector<HermitianMatrix> basis = hermitian_basis(n);
    const std::vector<double> cp = basis_coefficients(p);
    const std::vector<double> cq = basis_coefficients(q);
    for (std::size_t t = 0; t < basis.size(); ++t) {
        SdpProblem::Constraint row;
        row.blocks = {embed(basis[t], 2 * n, 0)};
        row.rhs = cp[t];
        prob.constraints.push_back(std::move(row));
    }
    for (std::size_t t = 0; t < basis.size(); ++t) {
        SdpProblem::Constraint row;
        row.blocks = {embed(basis[t], 2 * n, n)};
        row.rhs = cq[t];
        prob.constraints.push_back(std::move(row));
    }
    return prob;
}

SdpProblem build_maxfid_sdp(const StinespringPair& s) {
    const int n = s.n, k = s.k;
    auto [red0, red1] = reduced_maps(s);
    const ChannelRep adj0 = adjoint(red0);
    const ChannelRep adj1 = adjoint(red1);

    SdpProblem prob;
    prob.name = "max-output-fidelity";
    prob.block_dims = {n, n, 2 * k};
    prob.objective = {HermitianMatrix::zero(n), HermitianMatrix::zero(n),
                      coupling_objective(ComplexMatrix::identity(k))};

    const std::vector<HermitianMatrix> basis = hermitian_basis(k);
    for (int side = 0; side < 2; ++side) {
        const ChannelRep& adj = side == 0 ? adj0 : adj1;
        for (const HermitianMatrix& b : basis) {
            SdpProblem::Constraint row;
            HermitianMatrix pulled = as_herm(apply(adj, b.mat()));
            row.blocks = {side == 0 ? (-1.0) * pulled : HermitianMatrix::zero(n),
                          side == 1 ? (-1.0) * pulled : HermitianMatrix::zero(n),
                          embed(b, 2 * k, side * k)};
            row.rhs = 0.0;
            prob.constraints.push_back(std::move(row));
        }
    }
    for (int side = 0; side < 2; ++side) {
        SdpProblem::Constraint row;
        row.blocks = {side == 0 ? HermitianMatrix::identity(n) : HermitianMatrix::zero(n),
                      side == 1 ? HermitianMatrix::identity(n) : HermitianMatrix::zero(n),
                      HermitianMatrix::zero(2 * k)};
        row.rhs = 1.0;
        prob.constraints.push_back(std::move(row));
    }
    return prob;
}

SdpProblem build_choi_sdp(const ChoiMatrix& c) {
    const int n = c.n, m = c.m;
    const int d = m * n;
    SdpProblem prob;
    prob.name = "cb-trace-choi";
    prob.block_dims = {n, n, 2 * d};
    prob.objective = {HermitianMatrix::zero(n), HermitianMatrix::zero(n),
                      coupling_objective(c.j)};

    const std::vector<HermitianMatrix> basis = hermitian_basis(d);
    for (int side = 0; side < 2; ++side) {
        for (const HermitianMatrix& b : basis) {
            SdpProblem::Constraint row;
            HermitianMatrix reduced = as_herm(partial_trace(b.mat(), m, n, Keep::second));
            row.blocks = {side == 0 ? (-1.0) * reduced : HermitianMatrix::zero(n),
                          side == 1 ? (-1.0) * reduced : HermitianMatrix::zero(n),
                          embed(b, 2 * d, side * d)};
            row.rhs = 0.0;
            prob.constraints.push_back(std::move(row));
        }
    }
    for (int side = 0; side < 2; ++side) {
        SdpProblem::Constraint row;
        row.blocks = {side == 0 ? HermitianMatrix::identity(n) : HermitianMatrix::zero(n),
                      side == 1 ? HermitianMatrix::identity(n) : HermitianMatrix::zero(n),
                      HermitianMatrix::zero(2 * d)};
        row.rhs = 1.0;
        prob.constraints.push_back(std::move(row));
    }
    return prob;
}

namespace {

// Multipliers come back in builder row order; the first two slices are the
// corner couplings, scaled here to the convention documented on DualWitness.
DualWitness unpack_coupled_witness(const std::vector<double>& y, int slice, int dim,
                                   bool with_scalars) {
    DualWitness w;
    std::vector<double> u(y.begin(), y.begin() + slice);
    std::vector<double> v(y.begin() + slice, y.begin() + 2 * slice);
    w.blocks.push_back(2.0 * basis_expand(u, dim));
    w.blocks.push_back(2.0 * basis_expand(v, dim));
    if (with_scalars) {
        w.scalars.push_back(y[2 * slice]);
        w.scalars.push_back(y[2 * slice + 1]);
    }
    return w;
}

}  // namespace

NormResult fidelity_sdp(const HermitianMatrix& p, const HermitianMatrix& q,
                        const SolveOptions& opt) {
    SdpProblem prob = build_fidelity_sdp(p, q);
    NormResult r;
    r.program = ProgramKind::fidelity;
    r.solution = solve(prob, opt);
    r.certificate = check(prob, r.solution);
    r.value = clamp_value(r.solution);
    r.dual_witness = unpack_coupled_witness(r.solution.y, p.dim() * p.dim(), p.dim(), false);
    return r;
}

NormResult max_output_fidelity(const StinespringPair& s, const SolveOptions& opt) {
    SdpProblem prob = build_maxfid_sdp(s);
    NormResult r;
    r.program = ProgramKind::maxfid_stinespring;
    r.solution = solve(prob, opt);
    r.certificate = check(prob, r.solution);
    r.value = clamp_value(r.solution);
    r.dual_witness = unpack_coupled_witness(r.solution.y, s.k * s.k, s.k, true);
    return r;
}

NormResult diamond_norm(const ChannelRep& rep, const SolveOptions& opt) {
    if (rep.is_stinespring()) return max_output_fidelity(rep.stinespring(), opt);
    const ChoiMatrix& c = rep.choi();
    SdpProblem prob = build_choi_sdp(c);
    NormResult r;
    r.program = ProgramKind::choi;
    r.solution = solve(prob, opt);
    r.certificate = check(prob, r.solution);
    r.value = clamp_value(r.solution);
    const int d = c.m * c.n;
    r.dual_witness = unpack_coupled_witness(r.solution.y, d * d, d, true);
    return r;
}

NormResult cb_spectral_norm(const ChannelRep& rep, const SolveOptions& opt) {
    return diamond_norm(adjoint(rep), opt);
}

std::pair<double, double> alberti_check(const HermitianMatrix& p, const HermitianMatrix& q,
                                        const HermitianMatrix& y) {
    if (p.dim() != y.dim() || q.dim() != y.dim())
        throw ShapeError("alberti_check: dimension mismatch");
    EigResult eig = herm_eig(y);
    if (eig.values.front() <= 1e-10)
        throw Error("alberti_check: Y must be positive definite");
    ComplexMatrix inv(y.dim(), y.dim());
    for (int t = 0; t < y.dim(); ++t) {
        const double w = 1.0 / eig.values[t];
        for (int i = 0; i < y.dim(); ++i)
            for (int j = 0; j < y.dim(); ++j)
                inv(i, j) += w * eig.vectors(i, t) * std::conj(eig.vectors(j, t));
    }
    const double a = hs_inner_real(p, y);
    const double b = hs_inner_real(q, as_herm(std::move(inv)));
    if (a <= 0.0) throw Error("alberti_check: <P, Y> must be positive");
    return {std::sqrt(a * std::max(b, 0.0)), std::sqrt(std::max(b, 0.0) / a)};
}

StrictPoints strict_feasible_points(const HermitianMatrix& p, const HermitianMatrix& q) {
    if (p.dim() != q.dim()) throw ShapeError("fidelity requires operators of equal dimension");
    const int n = p.dim();
    StrictPoints pts;
    ComplexMatrix big(2 * n, 2 * n);
    big.place(0, 0, p.mat());
    big.place(n, n, q.mat());
    pts.primal.push_back(HermitianMatrix(std::move(big)));
    const std::vector<double> id = basis_coefficients(HermitianMatrix::identity(n));
    pts.dual_y = id;
    pts.dual_y.insert(pts.dual_y.end(), id.begin(), id.end());
    return pts;
}

StrictPoints strict_feasible_points(const StinespringPair& s) {
    const int n = s.n, k = s.k;
    auto [red0, red1] = reduced_maps(s);
    const HermitianMatrix uniform(ComplexMatrix::identity(n) * (1.0 / n));
    StrictPoints pts;
    pts.primal.push_back(uniform);
    pts.primal.push_back(uniform);
    ComplexMatrix big(2 * k, 2 * k);
    big.place(0, 0, apply(red0, uniform.mat()));
    big.place(k, k, apply(red1, uniform.mat()));
    pts.primal.push_back(as_herm(std::move(big)));

    const std::vector<double> id = basis_coefficients(HermitianMatrix::identity(k));
    pts.dual_y = id;
    pts.dual_y.insert(pts.dual_y.end(), id.begin(), id.end());
    pts.dual_y.push_back(0.5 + spectral_norm(apply(adjoint(red0), ComplexMatrix::identity(k))));
    pts.dual_y.push_back(0.5 + spectral_norm(apply(adjoint(red1), ComplexMatrix::identity(k))));
    return pts;
}

StrictPoints strict_feasible_points(const ChoiMatrix& c) {
    const int n = c.n, m = c.m;
    const int d = m * n;
    StrictPoints pts;
    const HermitianMatrix uniform(ComplexMatrix::identity(n) * (1.0 / n));
    pts.primal.push_back(uniform);
    pts.primal.push_back(uniform);
    pts.primal.push_back(HermitianMatrix(ComplexMatrix::identity(2 * d) * (1.0 / n)));

    const double scale = 0.5 * spectral_norm(c.j) + 1.0;
    std::vector<double> id = basis_coefficients(HermitianMatrix::identity(d));
    for (double& v : id) v *= scale;
    pts.dual_y = id;
    pts.dual_y.insert(pts.dual_y.end(), id.begin(), id.end());
    pts.dual_y.push_back(1.0 + scale * m);
    pts.dual_y.push_back(1.0 + scale * m);
    return pts;
}

}  // namespace cbnorm
