#include "cbnorm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>

#include "cbnorm/linalg.hpp"
#include "rng_internal.hpp"

namespace cbnorm {

namespace {

class Fnv1a {
  public:
    void feed_bytes(const void* data, std::size_t len) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001B3ULL;
        }
    }
    void feed_int(std::int64_t v) {
        unsigned char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
        feed_bytes(buf, 8);
    }
    void feed_double(double v) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &v, sizeof bits);
        feed_int(static_cast<std::int64_t>(bits));
    }
    void feed_matrix(const ComplexMatrix& m) {
        feed_int(m.rows());
        feed_int(m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) {
                feed_double(m(i, j).real());
                feed_double(m(i, j).imag());
            }
    }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
        return buf;
    }

  private:
    std::uint64_t state_ = 0xCBF29CE484222325ULL;
};

}  // namespace

SolvabilityReport solvability_report(const StinespringPair& s) {
    SolvabilityReport rep;
    rep.program = ProgramKind::maxfid_stinespring;

    auto [red0, red1] = reduced_maps(s);
    const double t0 = spectral_norm(apply(adjoint(red0), ComplexMatrix::identity(s.k)));
    const double t1 = spectral_norm(apply(adjoint(red1), ComplexMatrix::identity(s.k)));
    rep.epsilon = 1.0 / (4.0 * (1.0 + t0 + t1));
    rep.r_bound = t0 + t1 + 2.0 * s.k;
    rep.degenerate_zero_map = t0 <= 0.0 || t1 <= 0.0;

    Fnv1a h;
    h.feed_int(0);  // representation tag
    h.feed_int(s.n);
    h.feed_int(s.m);
    h.feed_int(s.k);
    h.feed_matrix(s.a0);
    h.feed_matrix(s.a1);
    rep.inputs_digest = h.hex();
    return rep;
}

SolvabilityReport solvability_report(const ChoiMatrix& c) {
    SolvabilityReport rep;
    rep.program = ProgramKind::choi;
    const double jnorm = spectral_norm(c.j);
    rep.epsilon = 1.0 / (2.0 * c.m);
    rep.r_bound = 2.0 * jnorm * c.n * c.m;
    rep.degenerate_zero_map = jnorm <= 0.0;

    Fnv1a h;
    h.feed_int(1);  // representation tag
    h.feed_int(c.n);
    h.feed_int(c.m);
    h.feed_matrix(c.j);
    rep.inputs_digest = h.hex();
    return rep;
}

bool verify_interior_point(const SdpProblem& p, const std::vector<double>& dual_y,
                           double epsilon, int samples, unsigned long long seed) {
    p.validate();
    if (dual_y.size() != p.constraints.size())
        throw Error("verify_interior_point: multiplier count mismatch");
    if (!(epsilon > 0.0)) throw Error("verify_interior_point: epsilon must be positive");
    if (samples < 1) throw Error("verify_interior_point: samples must be positive");

    const std::size_t nb = p.block_dims.size();
    std::vector<HermitianMatrix> slack;
    for (std::size_t b = 0; b < nb; ++b) {
        ComplexMatrix z = (-1.0) * p.objective[b].mat();
        for (std::size_t i = 0; i < p.constraints.size(); ++i)
            if (dual_y[i] != 0.0) z = z + dual_y[i] * p.constraints[i].blocks[b].mat();
        const double wrap = 1e-10 * (1.0 + max_abs(z));
        slack.emplace_back(std::move(z), wrap);
    }

    for (int s = 0; s < samples; ++s) {
        detail::Rng rng(detail::mix_seed(seed, static_cast<std::uint64_t>(s)));
        std::vector<HermitianMatrix> bump;
        double block_diag_norm = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            const int d = p.block_dims[b];
            std::vector<double> coeffs(static_cast<std::size_t>(d) * d);
            for (double& cval : coeffs) cval = rng.gaussian();
            HermitianMatrix h = basis_expand(coeffs, d);
            block_diag_norm = std::max(block_diag_norm, spectral_norm(h.mat()));
            bump.push_back(std::move(h));
        }
        if (block_diag_norm <= 0.0) continue;
        const double scale = epsilon / block_diag_norm;
        for (std::size_t b = 0; b < nb; ++b) {
            const HermitianMatrix probe = slack[b] + scale * bump[b];
            if (herm_eigenvalues(probe).front() < -1e-9) return false;
        }
    }
    return true;
}

}  // namespace cbnorm
