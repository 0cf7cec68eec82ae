#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "cbnorm/linalg.hpp"
#include "sdp_internal.hpp"

// Interior-point core. The complex problem is solved in a realified form:
// each Hermitian block H becomes the symmetric block [[Re H, -Im H],
// [Im H, Re H]] / 2 (objective and constraints; the factor 1/2 makes real
// inner products equal their complex counterparts). Realified matrices are
// closed under products and inverses, so the iterates never leave the
// embedded algebra and the final extraction back to complex blocks is exact.

namespace cbnorm::detail {
namespace {

struct RMat {
    int n = 0;
    std::vector<double> a;
    RMat() = default;
    explicit RMat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}
    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    static RMat ident(int dim, double s = 1.0) {
        RMat r(dim);
        for (int i = 0; i < dim; ++i) r.at(i, i) = s;
        return r;
    }
};

RMat mul(const RMat& x, const RMat& y) {
    RMat z(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            const double v = x.at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < x.n; ++j) z.at(i, j) += v * y.at(k, j);
        }
    return z;
}

double dot(const RMat& x, const RMat& y) {
    double s = 0.0;
    for (std::size_t t = 0; t < x.a.size(); ++t) s += x.a[t] * y.a[t];
    return s;
}

double frob2(const RMat& x) { return dot(x, x); }

void axpy(RMat& x, double t, const RMat& d) {
    for (std::size_t u = 0; u < x.a.size(); ++u) x.a[u] += t * d.a[u];
}

void symmetrize(RMat& x) {
    for (int i = 0; i < x.n; ++i)
        for (int j = i + 1; j < x.n; ++j) {
            const double v = 0.5 * (x.at(i, j) + x.at(j, i));
            x.at(i, j) = v;
            x.at(j, i) = v;
        }
}

bool chol_lower(const RMat& m, RMat& l) {
    const int n = m.n;
    l = RMat(n);
    for (int j = 0; j < n; ++j) {
        double d = m.at(j, j);
        for (int k = 0; k < j; ++k) d -= l.at(j, k) * l.at(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double root = std::sqrt(d);
        l.at(j, j) = root;
        for (int i = j + 1; i < n; ++i) {
            double v = m.at(i, j);
            for (int k = 0; k < j; ++k) v -= l.at(i, k) * l.at(j, k);
            l.at(i, j) = v / root;
        }
    }
    return true;
}

// Cholesky with escalating diagonal jitter; iterates can become numerically
// rank-deficient near the optimum.
bool chol_jitter(const RMat& m, RMat& l) {
    double scale = 1.0;
    for (int i = 0; i < m.n; ++i) scale = std::max(scale, std::abs(m.at(i, i)));
    static constexpr double kJitter[] = {0.0, 1e-14, 1e-12, 1e-10, 1e-8};
    for (double j : kJitter) {
        RMat work = m;
        for (int i = 0; i < m.n; ++i) work.at(i, i) += j * scale;
        if (chol_lower(work, l)) return true;
    }
    return false;
}

void solve_lower(const RMat& l, std::vector<double>& x) {
    for (int i = 0; i < l.n; ++i) {
        double s = x[i];
        for (int k = 0; k < i; ++k) s -= l.at(i, k) * x[k];
        x[i] = s / l.at(i, i);
    }
}

void solve_lower_t(const RMat& l, std::vector<double>& x) {
    for (int i = l.n - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < l.n; ++k) s -= l.at(k, i) * x[k];
        x[i] = s / l.at(i, i);
    }
}

void chol_solve(const RMat& l, std::vector<double>& x) {
    solve_lower(l, x);
    solve_lower_t(l, x);
}

RMat spd_inverse(const RMat& l) {
    // Inverse of L L^T via the triangular inverse W = L^{-1}: result W^T W.
    const int n = l.n;
    RMat w(n);
    for (int j = 0; j < n; ++j) {
        w.at(j, j) = 1.0 / l.at(j, j);
        for (int i = j + 1; i < n; ++i) {
            double s = 0.0;
            for (int k = j; k < i; ++k) s -= l.at(i, k) * w.at(k, j);
            w.at(i, j) = s / l.at(i, i);
        }
    }
    RMat inv(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = i; k < n; ++k) s += w.at(k, i) * w.at(k, j);
            inv.at(i, j) = s;
            inv.at(j, i) = s;
        }
    return inv;
}

double lambda_min_sym(const RMat& m) {
    ComplexMatrix c(m.n, m.n);
    for (int i = 0; i < m.n; ++i) {
        c(i, i) = m.at(i, i);
        for (int j = i + 1; j < m.n; ++j) {
            const double v = 0.5 * (m.at(i, j) + m.at(j, i));
            c(i, j) = v;
            c(j, i) = v;
        }
    }
    return herm_eigenvalues(HermitianMatrix(std::move(c))).front();
}

// Largest t >= 0 with V + t D >= 0, given the factor V = L L^T.
double max_step(const RMat& l, const RMat& d) {
    const int n = l.n;
    RMat t1(n);
    std::vector<double> col(n);
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < n; ++i) col[i] = d.at(i, c);
        solve_lower(l, col);
        for (int i = 0; i < n; ++i) t1.at(i, c) = col[i];
    }
    RMat w(n);
    for (int r = 0; r < n; ++r) {
        for (int i = 0; i < n; ++i) col[i] = t1.at(r, i);
        solve_lower(l, col);
        for (int i = 0; i < n; ++i) w.at(r, i) = col[i];
    }
    const double lo = lambda_min_sym(w);
    if (lo >= -1e-18) return std::numeric_limits<double>::infinity();
    return -1.0 / lo;
}

// Nonzeros of realify(H)/2; both triangles, so plain entry sums give traces
// against symmetric (and, because the pattern is symmetric, arbitrary)
// matrices.
struct SparseBlock {
    std::vector<int> r, c;
    std::vector<double> v;
    std::vector<int> cols;  // distinct columns touched
};

SparseBlock realify_half(const HermitianMatrix& h) {
    const int d = h.dim();
    SparseBlock s;
    auto push = [&s](int i, int j, double val) {
        if (val == 0.0) return;
        s.r.push_back(i);
        s.c.push_back(j);
        s.v.push_back(val);
    };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const Complex z = h(i, j);
            push(i, j, 0.5 * z.real());
            push(i + d, j + d, 0.5 * z.real());
            push(i, j + d, -0.5 * z.imag());
            push(i + d, j, 0.5 * z.imag());
        }
    s.cols = s.c;
    std::sort(s.cols.begin(), s.cols.end());
    s.cols.erase(std::unique(s.cols.begin(), s.cols.end()), s.cols.end());
    return s;
}

struct RCon {
    std::vector<SparseBlock> blocks;
};

double apply_con(const RCon& a, const std::vector<RMat>& v) {
    double s = 0.0;
    for (std::size_t b = 0; b < a.blocks.size(); ++b) {
        const SparseBlock& blk = a.blocks[b];
        for (std::size_t t = 0; t < blk.v.size(); ++t) s += blk.v[t] * v[b].at(blk.r[t], blk.c[t]);
    }
    return s;
}

void accumulate(std::vector<RMat>& target, const RCon& a, double w) {
    if (w == 0.0) return;
    for (std::size_t b = 0; b < a.blocks.size(); ++b) {
        const SparseBlock& blk = a.blocks[b];
        for (std::size_t t = 0; t < blk.v.size(); ++t)
            target[b].at(blk.r[t], blk.c[t]) += w * blk.v[t];
    }
}

// X * A * G for sparse A: the intermediate X*A only has A's columns
// populated, so the final product is a short sum of outer products.
RMat sandwich(const RMat& x, const SparseBlock& a, const RMat& g) {
    const int n = x.n;
    RMat t(n);
    for (std::size_t u = 0; u < a.v.size(); ++u) {
        const int r = a.r[u], c = a.c[u];
        const double val = a.v[u];
        for (int i = 0; i < n; ++i) t.at(i, c) += val * x.at(i, r);
    }
    RMat d(n);
    for (int col : a.cols)
        for (int i = 0; i < n; ++i) {
            const double ti = t.at(i, col);
            if (ti == 0.0) continue;
            for (int j = 0; j < n; ++j) d.at(i, j) += ti * g.at(col, j);
        }
    return d;
}

HermitianMatrix extract_complex(const RMat& p, int d) {
    ComplexMatrix out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double re =
                0.25 * (p.at(i, j) + p.at(j, i) + p.at(i + d, j + d) + p.at(j + d, i + d));
            const double im =
                0.25 * (p.at(i + d, j) - p.at(j + d, i) + p.at(j, i + d) - p.at(i, j + d));
            out(i, j) = Complex(re, im);
        }
    return HermitianMatrix(std::move(out));
}

}  // namespace

SdpSolution solve_reduced(const SdpProblem& p, const SolveOptions& opt) {
    const int nb = static_cast<int>(p.block_dims.size());
    const int m = static_cast<int>(p.constraints.size());

    SdpSolution sol;
    sol.y.assign(m, 0.0);

    if (m == 0) {
        // Unconstrained over the PSD cone: the optimum is 0 at X = 0 when
        // C <= 0; otherwise the primal is unbounded (equivalently the dual,
        // whose slack would have to be -C, is infeasible).
        double cmax = -std::numeric_limits<double>::infinity();
        for (const HermitianMatrix& c : p.objective)
            cmax = std::max(cmax, herm_eigenvalues(c).back());
        for (int b = 0; b < nb; ++b) {
            sol.x.push_back(HermitianMatrix::zero(p.block_dims[b]));
            sol.s.push_back((-1.0) * p.objective[b]);
        }
        sol.status = cmax <= opt.tol ? SdpStatus::optimal : SdpStatus::infeasible_suspected;
        return sol;
    }

    std::vector<int> dims(nb);
    for (int b = 0; b < nb; ++b) dims[b] = 2 * p.block_dims[b];
    int total_dim = 0;
    for (int d : dims) total_dim += d;

    std::vector<RMat> cobj(nb);
    double norm_c2 = 0.0;
    for (int b = 0; b < nb; ++b) {
        cobj[b] = RMat(dims[b]);
        const SparseBlock s = realify_half(p.objective[b]);
        for (std::size_t t = 0; t < s.v.size(); ++t) cobj[b].at(s.r[t], s.c[t]) = s.v[t];
        const double f = frobenius_norm(p.objective[b].mat());
        norm_c2 += f * f;
    }
    std::vector<RCon> cons(m);
    std::vector<double> rhs(m);
    double norm_b2 = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int b = 0; b < nb; ++b) cons[i].blocks.push_back(realify_half(p.constraints[i].blocks[b]));
        rhs[i] = p.constraints[i].rhs;
        norm_b2 += rhs[i] * rhs[i];
    }

    const double xi = 1.0 + std::sqrt(norm_c2) + std::sqrt(norm_b2);
    std::vector<RMat> x(nb), s(nb);
    for (int b = 0; b < nb; ++b) {
        x[b] = RMat::ident(dims[b], xi);
        s[b] = RMat::ident(dims[b], xi);
    }
    std::vector<double> y(m, 0.0);

    sol.status = SdpStatus::max_iterations;
    char line[256];

    for (int iter = 0;; ++iter) {
        std::vector<double> rp(m);
        double pres2 = 0.0;
        for (int i = 0; i < m; ++i) {
            rp[i] = rhs[i] - apply_con(cons[i], x);
            pres2 += rp[i] * rp[i];
        }
        const double pres = std::sqrt(pres2);

        std::vector<RMat> rd(nb);
        double dres2 = 0.0;
        for (int b = 0; b < nb; ++b) {
            rd[b] = cobj[b];
            axpy(rd[b], 1.0, s[b]);
        }
        for (int i = 0; i < m; ++i) accumulate(rd, cons[i], -y[i]);
        for (int b = 0; b < nb; ++b) dres2 += frob2(rd[b]);
        const double dres = std::sqrt(2.0 * dres2);  // complex-scale norm

        double alpha = 0.0, mu = 0.0, xnorm2 = 0.0;
        for (int b = 0; b < nb; ++b) {
            alpha += dot(cobj[b], x[b]);
            mu += dot(x[b], s[b]);
            xnorm2 += frob2(x[b]);
        }
        mu /= total_dim;
        double beta = 0.0;
        for (int i = 0; i < m; ++i) beta += y[i] * rhs[i];
        const double relgap = std::abs(beta - alpha) / (1.0 + std::abs(alpha) + std::abs(beta));

        sol.alpha = alpha;
        sol.beta = beta;
        sol.gap = std::abs(beta - alpha);
        sol.iterations = iter;

        if (opt.trace) {
            std::snprintf(line, sizeof line,
                          "iter %d alpha %.16e beta %.16e gap %.3e pres %.3e dres %.3e mu %.3e",
                          iter, alpha, beta, relgap, pres, dres, mu);
            opt.trace(line);
        }

        if (relgap <= opt.tol && pres <= opt.tol && dres <= opt.tol) {
            sol.status = SdpStatus::optimal;
            break;
        }
        double ymax = 0.0;
        for (double v : y) ymax = std::max(ymax, std::abs(v));
        if (iter >= 5 && (ymax > 1e11 * (1.0 + std::sqrt(norm_b2)) ||
                          std::sqrt(xnorm2) > 1e11 * xi * std::sqrt(double(total_dim)))) {
            sol.status = SdpStatus::infeasible_suspected;
            break;
        }
        if (iter >= opt.max_iter || !(mu > 0.0) || !std::isfinite(mu)) {
            sol.status = SdpStatus::max_iterations;
            break;
        }

        std::vector<RMat> lx(nb), ls(nb), g(nb);
        bool factored = true;
        for (int b = 0; b < nb && factored; ++b) {
            factored = chol_jitter(x[b], lx[b]) && chol_jitter(s[b], ls[b]);
            if (factored) g[b] = spd_inverse(ls[b]);
        }
        if (!factored) break;

        // Schur complement M_ij = Tr(A_i X A_j S^{-1}); positive definite
        // whenever the rows are independent.
        RMat schur(m);
        for (int j = 0; j < m; ++j) {
            std::vector<RMat> dj(nb);
            for (int b = 0; b < nb; ++b) dj[b] = sandwich(x[b], cons[j].blocks[b], g[b]);
            for (int i = 0; i < m; ++i) schur.at(i, j) = apply_con(cons[i], dj);
        }
        symmetrize(schur);
        RMat lm(m);
        if (!chol_jitter(schur, lm)) break;

        auto schur_solve = [&](std::vector<double> v) {
            std::vector<double> out = v;
            chol_solve(lm, out);
            // One step of iterative refinement against the unjittered matrix.
            std::vector<double> resid(m);
            for (int i = 0; i < m; ++i) {
                double acc = v[i];
                for (int j = 0; j < m; ++j) acc -= schur.at(i, j) * out[j];
                resid[i] = acc;
            }
            chol_solve(lm, resid);
            for (int i = 0; i < m; ++i) out[i] += resid[i];
            return out;
        };

        std::vector<double> q_base(m);
        {
            std::vector<RMat> xrdg(nb);
            for (int b = 0; b < nb; ++b) xrdg[b] = mul(mul(x[b], rd[b]), g[b]);
            for (int i = 0; i < m; ++i) q_base[i] = apply_con(cons[i], xrdg) - rhs[i];
        }

        // Predictor: pure Newton step toward complementarity zero.
        std::vector<double> dy_aff = schur_solve(q_base);
        std::vector<RMat> ds_aff(nb), dx_aff(nb);
        for (int b = 0; b < nb; ++b) {
            ds_aff[b] = RMat(dims[b]);
            axpy(ds_aff[b], -1.0, rd[b]);
        }
        for (int i = 0; i < m; ++i) accumulate(ds_aff, cons[i], dy_aff[i]);
        for (int b = 0; b < nb; ++b) {
            dx_aff[b] = mul(mul(x[b], ds_aff[b]), g[b]);
            for (std::size_t t = 0; t < dx_aff[b].a.size(); ++t)
                dx_aff[b].a[t] = -x[b].a[t] - dx_aff[b].a[t];
            symmetrize(dx_aff[b]);
        }
        double ap = std::numeric_limits<double>::infinity();
        double ad = ap;
        for (int b = 0; b < nb; ++b) {
            ap = std::min(ap, max_step(lx[b], dx_aff[b]));
            ad = std::min(ad, max_step(ls[b], ds_aff[b]));
        }
        const double ap_aff = std::min(1.0, ap);
        const double ad_aff = std::min(1.0, ad);
        double mu_aff = 0.0;
        for (int b = 0; b < nb; ++b)
            for (std::size_t t = 0; t < x[b].a.size(); ++t)
                mu_aff += (x[b].a[t] + ap_aff * dx_aff[b].a[t]) *
                          (s[b].a[t] + ad_aff * ds_aff[b].a[t]);
        mu_aff = std::max(mu_aff / total_dim, 0.0);
        const double ratio = mu_aff / mu;
        const double sigma = std::clamp(ratio * ratio * ratio, 1e-10, 1.0);

        // Corrector with the second-order Mehrotra term.
        std::vector<RMat> eg(nb);
        std::vector<double> q_corr(m);
        for (int b = 0; b < nb; ++b) eg[b] = mul(mul(dx_aff[b], ds_aff[b]), g[b]);
        for (int i = 0; i < m; ++i)
            q_corr[i] = sigma * mu * apply_con(cons[i], g) - apply_con(cons[i], eg) + q_base[i];
        std::vector<double> dy = schur_solve(q_corr);
        std::vector<RMat> ds(nb), dx(nb);
        for (int b = 0; b < nb; ++b) {
            ds[b] = RMat(dims[b]);
            axpy(ds[b], -1.0, rd[b]);
        }
        for (int i = 0; i < m; ++i) accumulate(ds, cons[i], dy[i]);
        for (int b = 0; b < nb; ++b) {
            dx[b] = mul(mul(x[b], ds[b]), g[b]);
            for (std::size_t t = 0; t < dx[b].a.size(); ++t)
                dx[b].a[t] = sigma * mu * g[b].a[t] - x[b].a[t] - eg[b].a[t] - dx[b].a[t];
            symmetrize(dx[b]);
        }
        ap = std::numeric_limits<double>::infinity();
        ad = ap;
        for (int b = 0; b < nb; ++b) {
            ap = std::min(ap, max_step(lx[b], dx[b]));
            ad = std::min(ad, max_step(ls[b], ds[b]));
        }
        ap = std::min(1.0, 0.98 * ap);
        ad = std::min(1.0, 0.98 * ad);

        for (int b = 0; b < nb; ++b) {
            axpy(x[b], ap, dx[b]);
            axpy(s[b], ad, ds[b]);
            symmetrize(x[b]);
            symmetrize(s[b]);
        }
        for (int i = 0; i < m; ++i) y[i] += ad * dy[i];
    }

    for (int b = 0; b < nb; ++b) {
        sol.x.push_back(extract_complex(x[b], p.block_dims[b]));
        sol.s.push_back(2.0 * extract_complex(s[b], p.block_dims[b]));
    }
    sol.y = y;
    return sol;
}

}  // namespace cbnorm::detail
