#pragma once

#include <vector>

#include "zrp/exppoly.hpp"

namespace zrp {

/// A distribution g(x) + sum_k d_k delta^{(k)}(x) with g in the exp-poly
/// class. Trailing zero delta coefficients are trimmed.
struct DistributionalValue {
    PiecewiseExpPoly regular;
    std::vector<Complex> delta_coeffs;

    void trim();
    bool purely_regular() const { return delta_coeffs.empty(); }
};

DistributionalValue operator+(DistributionalValue a, const DistributionalValue& b);
DistributionalValue operator*(Complex c, DistributionalValue a);

/// A^+ f: regular part (-D^2+1)f pointwise, plus the singular part
/// -f'_s delta - f_s delta' produced by differentiating across the jump.
DistributionalValue distributional_apply_a(const PiecewiseExpPoly& f);

/// Distributional calculus on DistributionalValue (exact on the delta chain:
/// D delta^{(k)} = delta^{(k+1)}, A delta^{(k)} = delta^{(k)} - delta^{(k+2)}).
DistributionalValue differentiate(const DistributionalValue& v);
DistributionalValue apply_a(const DistributionalValue& v);

/// Fundamental solution m_j. Even index 2j gives the decaying solution of
/// (-D^2+1)^j m = delta,
///   m_2j(x) = 1/((j-1)! 2^j) sum_{r=0}^{j-1} C(2j-2-r, r) (2j-3-2r)!! |x|^r e^{-|x|},
/// with the convention (-1)!! = 1; odd index gives m_{2j-1} = m_2j'.
/// Throws InvalidIndex for index <= 0.
PiecewiseExpPoly fundamental_solution(int index);

/// Ordered defect basis of M for even p >= 0: for j = p+1 down to p/2+1 the
/// pair (m_2j, m_{2j-1}). Length p+2. Throws OddIndex for odd p.
std::vector<PiecewiseExpPoly> defect_basis(int p);

/// Decaying solution f of (-D^2+1)f = g with f, f' continuous at 0, so that
/// apply_a(f) = g exactly and f is in D(A) whenever g is in the class.
/// Rate-1 resonances are absorbed by a polynomial degree bump internally.
PiecewiseExpPoly solve_a_inverse(const PiecewiseExpPoly& g);

/// Decaying C^1-matched solution of (-D^2 + 1 - E) f = g for E < 1; the
/// homogeneous rate is kappa = sqrt(1-E). Used by the bound-state solvers.
PiecewiseExpPoly resolvent_apply(const PiecewiseExpPoly& g, double E);

/// Decomposition f = smooth + sum_j c_j basis_j over defect_basis(p):
/// the coefficients match the derivative jumps of orders p..2p+1 and the
/// remainder is matched through order 2p+1 (so it lies in D(A^{p+1}) within
/// the class). p = 0 models D(A_N^*), even p >= 2 models L_m.
struct ScaleElement {
    int p = 0;
    PiecewiseExpPoly smooth;
    std::vector<Complex> singular_coeffs;

    PiecewiseExpPoly reconstruct() const;
};

/// Throws NotInScale when f has a derivative jump of order < p (f is not in
/// W^p_2, hence not in L_m). Jump residuals below 1e-10 (scaled) are zero.
ScaleElement decompose(const PiecewiseExpPoly& f, int p);

} // namespace zrp
