#pragma once

#include <utility>
#include <variant>

#include "cbnorm/complex_matrix.hpp"

namespace cbnorm {

/// Map X -> Tr_Z(A0 X A1*) between spaces X = C^n and Y = C^m with
/// environment Z = C^k. Both operators have shape (m*k) x n; the output
/// space is ordered Y (x) Z, row index (a, z) = a*k + z.
struct StinespringPair {
    ComplexMatrix a0;
    ComplexMatrix a1;
    int n = 0;
    int m = 0;
    int k = 0;

    StinespringPair(ComplexMatrix a0_in, ComplexMatrix a1_in, int m_in, int k_in);

    /// z-th slice of A_b: the L(X, Y) block picked out by environment index z.
    ComplexMatrix slice(int b, int z) const;
};

/// J(Phi) = sum_ij Phi(E_ij) (x) E_ij on Y (x) X, an (m*n) x (m*n) matrix
/// with entry [(a,i),(b,j)] = Phi(E_ij)[a,b].
struct ChoiMatrix {
    ComplexMatrix j;
    int n = 0;
    int m = 0;

    ChoiMatrix(ComplexMatrix j_in, int n_in, int m_in);
};

/// A channel carried in one of its two concrete forms. Norm computations
/// keep the given form; nothing converts behind the caller's back.
class ChannelRep {
public:
    explicit ChannelRep(StinespringPair s) : rep_(std::move(s)) {}
    explicit ChannelRep(ChoiMatrix c) : rep_(std::move(c)) {}

    bool is_stinespring() const { return std::holds_alternative<StinespringPair>(rep_); }
    bool is_choi() const { return std::holds_alternative<ChoiMatrix>(rep_); }

    const StinespringPair& stinespring() const {
        if (!is_stinespring()) throw Error("channel is not in Stinespring form");
        return std::get<StinespringPair>(rep_);
    }
    const ChoiMatrix& choi() const {
        if (!is_choi()) throw Error("channel is not in Choi form");
        return std::get<ChoiMatrix>(rep_);
    }

    int input_dim() const;
    int output_dim() const;

private:
    std::variant<StinespringPair, ChoiMatrix> rep_;
};

ChoiMatrix choi_from_stinespring(const StinespringPair& s);

/// Factors J into rank-one terms by SVD and stacks the unvec'd factors as
/// environment slices; k is the rank at threshold rank_tol * sigma_max.
StinespringPair stinespring_from_choi(const ChoiMatrix& c, double rank_tol = 1e-10);

/// Evaluate the channel on an n x n input. The Choi route uses
/// Phi(X) = Tr_X(J (1_Y (x) X^T)).
ComplexMatrix apply(const ChannelRep& rep, const ComplexMatrix& x);

/// Adjoint map in the same representation form; dims n and m swap.
ChannelRep adjoint(const ChannelRep& rep);

/// The completely positive maps Psi_b(X) = Tr_Y(A_b X A_b*) from X to Z,
/// returned in Stinespring form with Y as their environment.
std::pair<ChannelRep, ChannelRep> reduced_maps(const StinespringPair& s);

}  // namespace cbnorm
