#include "cbnorm/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "cbnorm/linalg.hpp"
#include "sdp_internal.hpp"

namespace cbnorm {

void SdpProblem::validate() const {
    if (block_dims.empty()) throw Error("sdp: no variable blocks");
    for (int d : block_dims)
        if (d <= 0) throw Error("sdp: block dimension must be positive");
    if (objective.size() != block_dims.size())
        throw Error("sdp: objective block count does not match block_dims");
    for (std::size_t b = 0; b < block_dims.size(); ++b)
        if (objective[b].dim() != block_dims[b])
            throw Error("sdp: objective block dimension mismatch");
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const Constraint& con = constraints[i];
        if (con.blocks.size() != block_dims.size())
            throw Error("sdp: constraint " + std::to_string(i) + " has wrong block count");
        for (std::size_t b = 0; b < block_dims.size(); ++b)
            if (con.blocks[b].dim() != block_dims[b])
                throw Error("sdp: constraint " + std::to_string(i) + " block dimension mismatch");
        if (!std::isfinite(con.rhs))
            throw Error("sdp: constraint " + std::to_string(i) + " has non-finite rhs");
    }
}

HermitianMatrix realify(const HermitianMatrix& h) {
    const int d = h.dim();
    ComplexMatrix r(2 * d, 2 * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const Complex v = h(i, j);
            r(i, j) = v.real();
            r(i + d, j + d) = v.real();
            r(i, j + d) = -v.imag();
            r(i + d, j) = v.imag();
        }
    return HermitianMatrix(std::move(r));
}

namespace {

// Concatenated real coordinates of a constraint over an orthonormal basis of
// each block; Euclidean inner products of these vectors equal the
// Hilbert-Schmidt inner products of the constraint matrices.
std::vector<double> constraint_coordinates(const SdpProblem::Constraint& con) {
    std::vector<double> v;
    for (const HermitianMatrix& blk : con.blocks) {
        std::vector<double> c = basis_coefficients(blk);
        v.insert(v.end(), c.begin(), c.end());
    }
    return v;
}

double vec_norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace

namespace detail {

Presolved presolve_tracked(const SdpProblem& p) {
    p.validate();
    Presolved out;
    out.reduced.block_dims = p.block_dims;
    out.reduced.objective = p.objective;
    out.reduced.name = p.name;

    const std::size_t m = p.constraints.size();
    std::vector<std::vector<double>> q;        // orthonormalized accepted rows
    std::vector<std::vector<double>> r_cols;   // coordinates of accepted rows over q
    std::vector<double> kept_rhs;
    double rhs_scale = 0.0;
    for (const auto& con : p.constraints) rhs_scale = std::max(rhs_scale, std::abs(con.rhs));

    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> a = constraint_coordinates(p.constraints[i]);
        const double norm2 = vec_norm2(a);
        std::vector<double> t(q.size(), 0.0);
        // Two projection passes keep the residual orthogonal to working precision.
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < q.size(); ++k) {
                double proj = 0.0;
                for (std::size_t u = 0; u < a.size(); ++u) proj += q[k][u] * a[u];
                t[k] += proj;
                for (std::size_t u = 0; u < a.size(); ++u) a[u] -= proj * q[k][u];
            }
        }
        const double resid2 = vec_norm2(a);
        if (resid2 <= 1e-10 * std::max(1.0, norm2)) {
            // Dependent row: recover coefficients over the original accepted
            // rows (back substitution through the stored triangular factors)
            // and demand the right-hand side agree.
            std::vector<double> c(q.size(), 0.0);
            for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
                double s = t[k];
                for (std::size_t j = k + 1; j < q.size(); ++j) s -= r_cols[j][k] * c[j];
                const double piv = r_cols[k][k];
                c[k] = (piv != 0.0) ? s / piv : 0.0;
            }
            double predicted = 0.0;
            for (std::size_t k = 0; k < q.size(); ++k) predicted += c[k] * kept_rhs[k];
            if (std::abs(predicted - p.constraints[i].rhs) > 1e-8 * (1.0 + rhs_scale))
                throw Error("sdp presolve: constraint row " + std::to_string(i) +
                            " is a linear combination of earlier rows with a conflicting "
                            "right-hand side; the problem is infeasible");
            continue;
        }
        const double resid = std::sqrt(resid2);
        for (double& x : a) x /= resid;
        t.push_back(resid);
        out.kept.push_back(static_cast<int>(i));
        out.reduced.constraints.push_back(p.constraints[i]);
        kept_rhs.push_back(p.constraints[i].rhs);
        q.push_back(std::move(a));
        r_cols.push_back(std::move(t));
    }
    return out;
}

}  // namespace detail

SdpProblem presolve(const SdpProblem& p) { return detail::presolve_tracked(p).reduced; }

SdpSolution solve(const SdpProblem& p, const SolveOptions& opt) {
    if (!(opt.tol > 0.0) || !std::isfinite(opt.tol))
        throw Error("sdp solve: tolerance must be positive");
    if (opt.max_iter < 1) throw Error("sdp solve: max_iter must be at least 1");
    detail::Presolved pre = detail::presolve_tracked(p);
    SdpSolution sol = detail::solve_reduced(pre.reduced, opt);
    // Dropped rows are combinations of kept ones; assigning them zero
    // multipliers leaves the dual slack and objective unchanged.
    std::vector<double> y_full(p.constraints.size(), 0.0);
    for (std::size_t k = 0; k < pre.kept.size(); ++k) y_full[pre.kept[k]] = sol.y[k];
    sol.y = std::move(y_full);
    return sol;
}

SdpSolution solve(const SdpProblem& p, double tol, int max_iter) {
    SolveOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    return solve(p, opt);
}

Certificate check(const SdpProblem& p, const SdpSolution& sol) {
    p.validate();
    const std::size_t nb = p.block_dims.size();
    if (sol.x.size() != nb || sol.y.size() != p.constraints.size())
        throw Error("sdp check: solution shape does not match problem");
    for (std::size_t b = 0; b < nb; ++b)
        if (sol.x[b].dim() != p.block_dims[b])
            throw Error("sdp check: solution block dimension mismatch");

    Certificate cert;
    double alpha = 0.0;
    for (std::size_t b = 0; b < nb; ++b) alpha += hs_inner_real(p.objective[b], sol.x[b]);
    double beta = 0.0;
    double rp2 = 0.0;
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        const auto& con = p.constraints[i];
        beta += sol.y[i] * con.rhs;
        double ax = 0.0;
        for (std::size_t b = 0; b < nb; ++b) ax += hs_inner_real(con.blocks[b], sol.x[b]);
        const double r = con.rhs - ax;
        rp2 += r * r;
    }
    cert.primal_residual = std::sqrt(rp2);

    double min_eig = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < nb; ++b) {
        ComplexMatrix z = (-1.0) * p.objective[b].mat();
        for (std::size_t i = 0; i < p.constraints.size(); ++i)
            if (sol.y[i] != 0.0) z = z + sol.y[i] * p.constraints[i].blocks[b].mat();
        const double wrap_tol = 1e-9 * (1.0 + max_abs(z));
        HermitianMatrix zh(std::move(z), wrap_tol);
        min_eig = std::min(min_eig, herm_eigenvalues(zh).front());
    }
    cert.dual_min_eig = min_eig;
    cert.duality_gap = std::abs(beta - alpha);
    cert.weak_duality_ok = alpha <= beta + 1e-9 * (1.0 + std::abs(alpha) + std::abs(beta));
    cert.alpha_lower = alpha;
    cert.beta_upper = beta;
    return cert;
}

FeasibilityReport strict_feasibility_probe(const SdpProblem& p,
                                           const std::vector<std::vector<double>>& dual_hints) {
    p.validate();
    FeasibilityReport report;
    const std::size_t nb = p.block_dims.size();
    const std::size_t m = p.constraints.size();

    // Primal side: maximize t subject to A(X' + t I) = b with X' >= 0 and
    // t >= 0, plus a cap row t + s = cap so the auxiliary program stays
    // bounded. Any optimum t > 0 exhibits X = X' + t I strictly feasible.
    double normb = 0.0;
    for (const auto& con : p.constraints) normb += con.rhs * con.rhs;
    const double cap = 1.0 + std::sqrt(normb);

    SdpProblem aux;
    aux.name = p.name.empty() ? "feasibility-probe" : p.name + "-feasibility-probe";
    aux.block_dims = p.block_dims;
    aux.block_dims.push_back(1);  // t
    aux.block_dims.push_back(1);  // cap slack
    for (std::size_t b = 0; b < nb; ++b)
        aux.objective.push_back(HermitianMatrix::zero(p.block_dims[b]));
    aux.objective.push_back(HermitianMatrix::identity(1));
    aux.objective.push_back(HermitianMatrix::zero(1));
    for (const auto& con : p.constraints) {
        SdpProblem::Constraint row;
        row.blocks = con.blocks;
        double tr = 0.0;
        for (const HermitianMatrix& blk : con.blocks) tr += blk.trace_real();
        row.blocks.push_back(HermitianMatrix::diagonal({tr}));
        row.blocks.push_back(HermitianMatrix::zero(1));
        row.rhs = con.rhs;
        aux.constraints.push_back(std::move(row));
    }
    {
        SdpProblem::Constraint row;
        for (std::size_t b = 0; b < nb; ++b) row.blocks.push_back(HermitianMatrix::zero(p.block_dims[b]));
        row.blocks.push_back(HermitianMatrix::identity(1));
        row.blocks.push_back(HermitianMatrix::identity(1));
        row.rhs = cap;
        aux.constraints.push_back(std::move(row));
    }
    try {
        SolveOptions opt;
        opt.tol = 1e-7;
        SdpSolution sol = solve(aux, opt);
        report.primal_margin = sol.x[nb](0, 0).real();
        report.primal_found =
            sol.status == SdpStatus::optimal && report.primal_margin > 1e-6 * (1.0 + cap);
    } catch (const Error&) {
        report.primal_found = false;
    }

    // Dual side: score candidate multiplier vectors by the least eigenvalue
    // of the slack they induce.
    std::vector<std::vector<double>> candidates = dual_hints;
    candidates.emplace_back(m, 0.0);
    {
        // Least-squares fit of sum_i y_i A_i to C + I; with a strictly
        // feasible dual this often lands at positive slack.
        ComplexMatrix gram(static_cast<int>(std::max<std::size_t>(m, 1)),
                           static_cast<int>(std::max<std::size_t>(m, 1)));
        if (m > 0) {
            std::vector<double> rhs(m, 0.0);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = i; j < m; ++j) {
                    double g = 0.0;
                    for (std::size_t b = 0; b < nb; ++b)
                        g += hs_inner_real(p.constraints[i].blocks[b], p.constraints[j].blocks[b]);
                    gram(static_cast<int>(i), static_cast<int>(j)) = g;
                    gram(static_cast<int>(j), static_cast<int>(i)) = g;
                }
                for (std::size_t b = 0; b < nb; ++b) {
                    const HermitianMatrix target =
                        p.objective[b] + HermitianMatrix::identity(p.block_dims[b]);
                    rhs[i] += hs_inner_real(p.constraints[i].blocks[b], target);
                }
            }
            const double ridge = 1e-10 * (1.0 + max_abs(gram));
            for (std::size_t i = 0; i < m; ++i)
                gram(static_cast<int>(i), static_cast<int>(i)) += ridge;
            // Solve the (real SPD) normal equations by eigendecomposition of
            // the Gram matrix; m is small for every program built here.
            try {
                EigResult eig = herm_eig(HermitianMatrix(gram, 1e-12 * (1.0 + max_abs(gram))));
                std::vector<double> y(m, 0.0);
                for (std::size_t k = 0; k < m; ++k) {
                    if (eig.values[k] <= ridge) continue;
                    Complex dot = 0.0;
                    for (std::size_t i = 0; i < m; ++i)
                        dot += std::conj(eig.vectors(static_cast<int>(i), static_cast<int>(k))) *
                               rhs[i];
                    for (std::size_t i = 0; i < m; ++i)
                        y[i] += (dot / eig.values[k] *
                                 eig.vectors(static_cast<int>(i), static_cast<int>(k)))
                                    .real();
                }
                candidates.push_back(std::move(y));
            } catch (const Error&) {
            }
        }
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& y : candidates) {
        if (y.size() != m) continue;
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < nb; ++b) {
            ComplexMatrix z = (-1.0) * p.objective[b].mat();
            for (std::size_t i = 0; i < m; ++i)
                if (y[i] != 0.0) z = z + y[i] * p.constraints[i].blocks[b].mat();
            const double wrap_tol = 1e-9 * (1.0 + max_abs(z));
            HermitianMatrix zh(std::move(z), wrap_tol);
            margin = std::min(margin, herm_eigenvalues(zh).front());
        }
        best = std::max(best, margin);
    }
    report.dual_margin = best;
    report.dual_found = std::isfinite(best) && best > 0.0;
    return report;
}

}  // namespace cbnorm
