#pragma once

#include <utility>
#include <vector>

#include "cbnorm/channels.hpp"
#include "cbnorm/complex_matrix.hpp"
#include "cbnorm/sdp.hpp"

namespace cbnorm {

enum class ProgramKind { fidelity, maxfid_stinespring, choi };

/// Dual certificate in the natural scaling of each program. For fidelity,
/// blocks = {Y, Z} with [[Y, -I], [-I, Z]] >= 0 and the dual objective equal
/// to (⟨P,Y⟩ + ⟨Q,Z⟩)/2. For the channel programs, blocks = {Y0, Y1} with
/// [[Y0, -K], [-K*, Y1]] >= 0 (K = I for the max-fidelity form, K = J for the
/// Choi form) and scalars = {lambda0, lambda1} bounding half the largest
/// eigenvalue of the corresponding reduced slack; the dual objective is
/// lambda0 + lambda1.
struct DualWitness {
    std::vector<HermitianMatrix> blocks;
    std::vector<double> scalars;
};

struct NormResult {
    double value = 0.0;
    ProgramKind program = ProgramKind::fidelity;
    Certificate certificate;
    DualWitness dual_witness;
    SdpSolution solution;
};

/// max (Tr X12 + Tr X12*)/2 over [[P, X12], [X12*, Q]] >= 0: the fidelity
/// F(P, Q) = Tr|sqrt(P) sqrt(Q)|. Single variable block of dimension 2n;
/// constraint rows pin the diagonal corners entrywise over the orthonormal
/// Hermitian basis, first the P corner (n^2 rows in basis order) then the
/// Q corner.
SdpProblem build_fidelity_sdp(const HermitianMatrix& p, const HermitianMatrix& q);

/// max F(Psi0(rho0), Psi1(rho1)) over density operators, where Psi0, Psi1
/// trace out the output space of the two isometry factors. Blocks
/// [n, n, 2k]; rows couple the big-block corners to the reduced maps
/// (k^2 rows per side, basis order), then two trace rows.
SdpProblem build_maxfid_sdp(const StinespringPair& s);

/// max Re Tr(J* X12) over [[1 (x) rho0, X12], [X12*, 1 (x) rho1]] >= 0 with
/// rho0, rho1 density operators. Blocks [n, n, 2mn]; rows couple the big
/// block corners to the partial traces ((mn)^2 rows per side, basis order),
/// then two trace rows.
SdpProblem build_choi_sdp(const ChoiMatrix& c);

NormResult fidelity_sdp(const HermitianMatrix& p, const HermitianMatrix& q,
                        const SolveOptions& opt = {});

/// Maximum output fidelity of the two reduced maps of a common-input
/// isometry pair; equals the completely bounded trace norm of the map
/// X -> Tr_Z(A0 X A1*).
NormResult max_output_fidelity(const StinespringPair& s, const SolveOptions& opt = {});

/// Completely bounded trace norm. A Stinespring pair is solved through the
/// max-fidelity form, a Choi matrix through its own program; the two routes
/// are deliberately not collapsed into one another.
NormResult diamond_norm(const ChannelRep& rep, const SolveOptions& opt = {});

/// Completely bounded spectral norm, computed as the completely bounded
/// trace norm of the adjoint map.
NormResult cb_spectral_norm(const ChannelRep& rep, const SolveOptions& opt = {});

/// For Y > 0 returns { sqrt(<P,Y><Q,Y^-1>), sqrt(<Q,Y^-1>/<P,Y>) }. The
/// first entry upper-bounds F(P, Q) for every positive Y, with equality at
/// the minimizer; the second is the rebalancing factor that leaves the
/// product invariant. Throws unless the least eigenvalue of Y exceeds 1e-10.
std::pair<double, double> alberti_check(const HermitianMatrix& p, const HermitianMatrix& q,
                                        const HermitianMatrix& y);

/// Interior candidates for warm checks and feasibility probes. dual_y is
/// packed in the constraint order of the corresponding builder.
struct StrictPoints {
    std::vector<HermitianMatrix> primal;
    std::vector<double> dual_y;
};

StrictPoints strict_feasible_points(const HermitianMatrix& p, const HermitianMatrix& q);
StrictPoints strict_feasible_points(const StinespringPair& s);
StrictPoints strict_feasible_points(const ChoiMatrix& c);

}  // namespace cbnorm
