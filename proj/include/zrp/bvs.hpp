#pragma once

#include <Eigen/Dense>

#include "zrp/exppoly.hpp"

namespace zrp {

/// The pair (Gamma_0 f, Gamma_1 f) for one of the concrete triples. Lengths:
/// 2 for the L2 delta/delta' family, 2(p+1) for the stacked power triple,
/// p+2 for the Sobolev quasi-triple, 1 for the 3D family.
struct BoundaryData {
    Eigen::VectorXcd gamma0;
    Eigen::VectorXcd gamma1;
};

/// Canonical regularization matrix of the L2 family, R0 = diag(1/2, -1/2);
/// it makes Gamma_0 f = (f_r, -f'_r).
Eigen::Matrix2cd canonical_r_l2();

/// L2 family boundary data at regularization R: Gamma_1 f = (f'_s, f_s) and
/// Gamma_0^R f = (f_r, -f'_r) + (R0 - R) Gamma_1 f.
BoundaryData boundary_data_l2(const PiecewiseExpPoly& f, const Eigen::Matrix2cd& R);
BoundaryData boundary_data_l2(const PiecewiseExpPoly& f);

/// Stacked triple of A_N^{p+1}: blocks Gamma^R((A_N^*)^k f) for k = 0..p in
/// Gamma_0, reversed stacking in Gamma_1. Vectors of length 2(p+1).
BoundaryData stacked_boundary_data(const PiecewiseExpPoly& f, int p, const Eigen::Matrix2cd& R);
BoundaryData stacked_boundary_data(const PiecewiseExpPoly& f, int p);

/// Quasi-triple of A_M in W^p_2 (even p >= 2):
/// Gamma_0 f = (f_r, -f_r^[1], ..., f_r^[p], -f_r^[p+1]),
/// Gamma_1 f = (f_s^[2p+1], f_s^[2p], ..., f_s^[p]).
/// Throws NotInSobolevSpace when f is not W^p_2-matched.
BoundaryData quasi_boundary_data_sobolev(const PiecewiseExpPoly& f, int p);

/// 3D point-interaction triple evaluated on the pure defect profile
/// f = c e^{-kappa r}/r: Gamma_1 f = c, Gamma_0 f = c (mu - kappa).
BoundaryData boundary_data_3d(Complex c, double kappa, double mu);

/// |(A f, g) - (f, A g) - (Gamma_1 f, Gamma_0 g) + (Gamma_0 f, Gamma_1 g)|
/// for the L2 triple at regularization R; mathematically zero.
double green_residual_l2(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g,
                         const Eigen::Matrix2cd& R);
double green_residual_l2(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g);

/// Green residual of the stacked triple: LHS (f^[2p+2], g) - (f, g^[2p+2]).
double green_residual_powers(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, int p);

/// Green residual of the Sobolev quasi-triple; the (.,.)_p left side is
/// evaluated as l2_inner(f^[2p+2], g) - l2_inner(f, g^[2p+2]).
double green_residual_sobolev(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, int p);

/// Scale against which a Green residual should be judged: max(1, sum of the
/// magnitudes of the four pairing terms).
double green_scale_l2(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g,
                      const Eigen::Matrix2cd& R);
double green_scale_powers(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, int p);
double green_scale_sobolev(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, int p);

} // namespace zrp
