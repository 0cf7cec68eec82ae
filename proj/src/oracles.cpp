#include "cbnorm/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cbnorm/linalg.hpp"
#include "rng_internal.hpp"

namespace cbnorm {

double cp_diamond_oracle(const ChoiMatrix& c) {
    const double scale = 1.0 + max_abs(c.j);
    const double asym = max_abs_diff(c.j, c.j.adjoint());
    if (asym > 1e-9 * scale)
        throw WrongRegimeError("cp oracle: choi matrix is not hermitian", -asym);
    HermitianMatrix jh(c.j, 1e-9 * scale);
    const std::vector<double> evs = herm_eigenvalues(jh);
    if (evs.front() < -1e-9 * (1.0 + std::max(evs.back(), 0.0)))
        throw WrongRegimeError("cp oracle: choi matrix has a negative eigenvalue, so the map "
                               "is not completely positive",
                               evs.front());
    ComplexMatrix reduced = partial_trace(c.j, c.m, c.n, Keep::second);
    const double wrap = 1e-9 * (1.0 + max_abs(reduced));
    return herm_eigenvalues(HermitianMatrix(std::move(reduced), wrap)).back();
}

namespace {

ComplexMatrix lift(const ComplexMatrix& a, int copies) {
    return kron(ComplexMatrix::identity(copies), a);
}

// (1 (x) A^T) J (1 (x) conj(B)): the output-side operator whose trace norm is
// being maximized.
ComplexMatrix evaluate_witness(const ChoiMatrix& c, const ComplexMatrix& a,
                               const ComplexMatrix& b) {
    return lift(a.transpose(), c.m) * c.j * lift(b.conjugate(), c.m);
}

struct PolarEval {
    double value = 0.0;
    ComplexMatrix w;  // polar partial isometry: value = Re Tr(W* T)
};

PolarEval polar_eval(const ComplexMatrix& t) {
    ComplexMatrix gram = t.adjoint() * t;
    const double wrap = 1e-10 * (1.0 + max_abs(gram));
    EigResult eig = herm_eig(HermitianMatrix(std::move(gram), wrap));
    const int d = t.cols();
    PolarEval out;
    out.w = ComplexMatrix(t.rows(), d);
    double sig_max = 0.0;
    for (double v : eig.values) sig_max = std::max(sig_max, std::sqrt(std::max(v, 0.0)));
    const double cutoff = 1e-12 * sig_max;
    for (int k = 0; k < d; ++k) {
        const double sigma = std::sqrt(std::max(eig.values[k], 0.0));
        out.value += sigma;
        if (sigma <= cutoff) continue;
        // left singular vector: T q / sigma
        std::vector<Complex> p(static_cast<std::size_t>(t.rows()), Complex(0.0));
        for (int i = 0; i < t.rows(); ++i) {
            Complex acc = 0.0;
            for (int j = 0; j < d; ++j) acc += t(i, j) * eig.vectors(j, k);
            p[i] = acc / sigma;
        }
        for (int i = 0; i < t.rows(); ++i)
            for (int j = 0; j < d; ++j) out.w(i, j) += p[i] * std::conj(eig.vectors(j, k));
    }
    return out;
}

ComplexMatrix normalized_or_default(ComplexMatrix m, int n) {
    const double norm = frobenius_norm(m);
    if (norm < 1e-150) {
        ComplexMatrix fallback = ComplexMatrix::identity(n);
        return fallback * (1.0 / std::sqrt(static_cast<double>(n)));
    }
    return m * (1.0 / norm);
}

ComplexMatrix tangent_project(const ComplexMatrix& point, const ComplexMatrix& grad) {
    const double radial = hs_inner(point, grad).real();
    return grad - radial * point;
}

}  // namespace

AscentResult rank_one_ascent(const ChoiMatrix& c, const AscentConfig& cfg) {
    if (cfg.restarts < 1 || cfg.max_steps < 1)
        throw Error("rank_one_ascent: restarts and max_steps must be positive");
    const int n = c.n, m = c.m;

    AscentResult best;
    best.value = -1.0;

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        ComplexMatrix a(n, n), b(n, n);
        if (restart == 0) {
            // Maximally entangled witness; exact optimum for several
            // structured maps and a strong generic start.
            a = ComplexMatrix::identity(n) * (1.0 / std::sqrt(static_cast<double>(n)));
            b = a;
        } else {
            detail::Rng rng(detail::mix_seed(cfg.seed, static_cast<std::uint64_t>(restart)));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    a(i, j) = rng.complex_gaussian();
                    b(i, j) = rng.complex_gaussian();
                }
            a = normalized_or_default(std::move(a), n);
            b = normalized_or_default(std::move(b), n);
        }

        PolarEval cur = polar_eval(evaluate_witness(c, a, b));
        double eta = 0.5;
        int step = 0;
        for (; step < cfg.max_steps; ++step) {
            const ComplexMatrix r = c.j * lift(b.conjugate(), m) * cur.w.adjoint();
            const ComplexMatrix l = cur.w.adjoint() * lift(a.transpose(), m) * c.j;
            const ComplexMatrix grad_a = partial_trace(r, m, n, Keep::second).conjugate();
            const ComplexMatrix grad_b = partial_trace(l, m, n, Keep::second).transpose();
            const ComplexMatrix ga = tangent_project(a, grad_a);
            const ComplexMatrix gb = tangent_project(b, grad_b);
            const double gnorm = std::sqrt(frobenius_norm(ga) * frobenius_norm(ga) +
                                           frobenius_norm(gb) * frobenius_norm(gb));
            if (gnorm < 1e-13 * (1.0 + cur.value)) break;

            bool accepted = false;
            for (int halving = 0; halving <= 20; ++halving) {
                ComplexMatrix na = normalized_or_default(a + eta * ga, n);
                ComplexMatrix nb = normalized_or_default(b + eta * gb, n);
                PolarEval trial = polar_eval(evaluate_witness(c, na, nb));
                if (trial.value > cur.value + 1e-14) {
                    const double gain = trial.value - cur.value;
                    a = std::move(na);
                    b = std::move(nb);
                    cur = std::move(trial);
                    eta = std::min(eta * 1.5, 64.0);
                    accepted = true;
                    if (gain < cfg.step_tol * (1.0 + cur.value)) step = cfg.max_steps;
                    break;
                }
                eta *= 0.5;
            }
            if (!accepted) break;
        }

        if (cur.value > best.value) {
            best.value = cur.value;
            best.a = a;
            best.b = b;
            best.best_restart = restart;
            best.steps = std::min(step, cfg.max_steps);
        }
    }
    return best;
}

double commuting_fidelity_oracle(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        throw ShapeError("commuting fidelity: diagonals must have equal length");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0 || q[i] < 0.0)
            throw Error("commuting fidelity: negative diagonal entry");
        sum += std::sqrt(p[i] * q[i]);
    }
    return sum;
}

}  // namespace cbnorm
