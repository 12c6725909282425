#pragma once

#include <vector>

#include "zrp/extensions.hpp"

namespace zrp {

/// Finite-difference discretization of a realization on the interior grid of
/// [-L, L] with Dirichlet walls. Stored in compressed form (tridiagonal core
/// plus optional center column and rank-one coupling); dense() materializes
/// the full Hermitian matrix.
struct GridOperator {
    double L = 0.0, h = 0.0;
    ExtensionSpec family;
    int n = 0;            // matrix order = 2 L/h - 1
    int center = 0;       // index of the x = 0 row
    Eigen::VectorXd diag; // 2/h^2 + 1 plus interaction terms
    double offdiag = 0.0; // -1/h^2
    bool has_center = false;
    Eigen::VectorXcd center_col; // contribution c e_c^T + e_c c^H
    bool has_rank = false;
    Eigen::VectorXcd rank_vec;
    double rank_coeff = 0.0; // contribution rank_coeff * rank_vec rank_vec^H
    // note: diag already includes the (c,c) part of the center coupling

    Eigen::MatrixXcd dense() const;
    double hermiticity_defect() const;
    bool is_real_tridiagonal() const { return !has_center && !has_rank; }
};

/// Supported families: free (L2, B = 0), delta interaction (L2,
/// B = diag(beta, 0): beta/h at the center diagonal of the 3-point -D^2+1
/// stencil) and Nonlocal (center row/column couplings plus the b22 rank-one
/// with trapezoid weights). Everything else throws UnsupportedFamily; the
/// delta' and Sobolev families are certified by spectral::eigencheck instead.
GridOperator discretize(const ExtensionSpec& spec, double L, double h);

/// k smallest eigenvalues, ascending. Real tridiagonal operators use Sturm
/// bisection (fast at h = 0.01); coupled ones fall back to a dense Hermitian
/// eigensolve.
std::vector<double> lowest_eigenvalues(const GridOperator& gop, int k);

/// Composite trapezoid for (f, g) on [-L, L] over nodes offset by half a cell
/// so x = 0 is never sampled.
Complex quadrature_inner(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, double L, double h);

} // namespace zrp
