#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zrp/ascale.hpp"
#include "zrp/bvs.hpp"

namespace zrp {

enum class Family {
    L2PointInteraction,
    StackedPower,
    Sobolev,
    Nonlocal,
    Point3D,
    RankOneRegular,
};

/// A self-adjoint realization: family tag + Hermitian coupling matrix B +
/// Hermitian regularization R.
///
/// R semantics: for the L2 family R is the absolute regularization matrix
/// (canonical R0 = diag(1/2,-1/2) gives Gamma_0 f = (f_r, -f'_r)); for the
/// Sobolev family R is a Hermitian shift of the canonical quasi-triple,
/// Gamma_0^R = Gamma_0 - R Gamma_1 (default 0).
struct ExtensionSpec {
    Family family = Family::L2PointInteraction;
    Eigen::MatrixXcd B;
    Eigen::MatrixXcd R;
    int p = 0;        // Sobolev order
    int k = 1;        // Nonlocal: q = m_{2k}
    double mu = 1.0;  // Point3D: A = -Delta + mu^2
    double alpha = 0.0, r = 0.0; // RankOneRegular parameters

    /// Boundary-space dimension of the family.
    int boundary_dim() const;
};

ExtensionSpec l2_spec(const Eigen::Matrix2cd& B);
ExtensionSpec l2_spec(const Eigen::Matrix2cd& B, const Eigen::Matrix2cd& R);
ExtensionSpec sobolev_spec(int p, const Eigen::MatrixXcd& B);
ExtensionSpec sobolev_spec(int p, const Eigen::MatrixXcd& B, const Eigen::MatrixXcd& R);
ExtensionSpec nonlocal_spec(int k, const Eigen::Matrix2cd& B);
ExtensionSpec point3d_spec(double mu, double b);
ExtensionSpec rank_one_spec(double alpha, double r);

/// Hermiticity defect max|M - M^H|; used everywhere a Hermitian input is
/// validated (tolerance 1e-12).
double hermiticity_defect(const Eigen::MatrixXcd& M);
void require_hermitian(const Eigen::MatrixXcd& M, const std::string& what);

/// The constraint [B | -I] acting on the concatenated (Gamma_0, Gamma_1)
/// vector; f is in the domain iff the product vanishes.
Eigen::MatrixXcd constraint_matrix(const ExtensionSpec& spec);

/// Family boundary data with the spec's R applied. Supported for the L2,
/// Sobolev and Nonlocal families (for Nonlocal: Gamma_0 = (f(0), (f,q)),
/// Gamma_1 = (f'_s, f_s^[2k+1]) on L_m).
BoundaryData boundary_data(const ExtensionSpec& spec, const PiecewiseExpPoly& f);

/// Residual of the domain constraint ||B Gamma_0 f - Gamma_1 f|| (relative
/// to the boundary-data scale); infinity when f is not representable.
double constraint_residual(const ExtensionSpec& spec, const PiecewiseExpPoly& f);

bool in_domain(const PiecewiseExpPoly& f, const ExtensionSpec& spec);

/// The realization applied to f: the quasi-adjoint action A u on the smooth
/// part of the decomposition (pointwise (-D^2+1)f for the L2 family). For
/// Point3D, f is the radial profile g with f(x) = g(|x|)/|x| stored on the
/// right half-line, and the action is (-D^2 + mu^2) on the regular profile.
/// Throws NotInDomain when the constraints fail.
PiecewiseExpPoly apply_extension(const PiecewiseExpPoly& f, const ExtensionSpec& spec);

/// The regularized additive action A^+ f + Psi B Psi_R^* f for f in L_m (not
/// necessarily in the domain): regular part is the quasi-adjoint action, the
/// singular coefficient vector equals B Gamma_0^R f - Gamma_1 f. For the L2
/// family the coefficients are over (delta, delta'); for the Sobolev family
/// they are over the psi-basis psi_j = -A^{p+1}(Gamma_1|_M)^{-1} e_j.
/// Supported families: L2PointInteraction, Sobolev.
DistributionalValue regularized_apply(const PiecewiseExpPoly& f, const ExtensionSpec& spec);

/// Cayley transform U = (I - iB)(I + iB)^{-1}: B Gamma_0 = Gamma_1 holds iff
/// (I-U) Gamma_0 = i (I+U) Gamma_1.
Eigen::MatrixXcd cayley_u_from_b(const Eigen::MatrixXcd& B);
/// Inverse transform; throws CayleySingular when -1 is in the spectrum of U.
Eigen::MatrixXcd cayley_b_from_u(const Eigen::MatrixXcd& U);

/// Finite-dimensional admissibility data: the matrix of P_N A restricted to
/// N [intersect] D(A) in an orthonormal basis of the intersection.
struct AdmissibilityData {
    Eigen::MatrixXcd gram;
    int dim_intersection = 0;
};

struct AdmissibilityResult {
    bool admissible = true;
    /// When not admissible: a unit vector eta with B gram eta = (I + B R) eta.
    Eigen::VectorXcd witness;
};

/// B is admissible iff B gram eta = (I + B R) eta has only eta = 0 among the
/// intersection coordinates. B, R, gram must all be of order
/// dim_intersection. Rank decision at 1e-10 relative singular-value tolerance.
AdmissibilityResult admissible(const Eigen::MatrixXcd& B, const Eigen::MatrixXcd& R,
                               const AdmissibilityData& data);

struct RecoveredPotential {
    /// psi_j = Psi e_j = -A^{(p+1)}(Gamma_1|_N)^{-1} e_j as explicit
    /// distributions (for Point3D: symbolic 3D delta).
    std::vector<DistributionalValue> psi_basis;
    /// Human-readable statement of Gamma_0 = Psi_R^*.
    std::string effective_b_map;
};

enum class TripleFamily { L2PointInteraction, Sobolev, Point3D };

struct TripleSpec {
    TripleFamily family = TripleFamily::L2PointInteraction;
    int p = 0;
    double mu = 1.0;
    Eigen::MatrixXcd R; // same semantics as ExtensionSpec::R
};

/// Inverse problem: recover the singular potential basis from the triple.
RecoveredPotential recover_potential(const TripleSpec& family);

/// (A eta, eta) for the canonical rank-one defect eta = m_4 / ||m_4||.
double rank_one_gram();

/// b = alpha / (1 + alpha [(A eta, eta) - r]); DegenerateDenominator when the
/// denominator vanishes.
double regular_rank_one_b(double alpha, double r, double gram_a);

/// Exact residual of A'_b(u + beta eta) = (A + alpha (., psi) psi)(u + beta
/// eta) for u in D(A), with eta = m_4/||m_4||, psi = A eta and beta chosen
/// from the boundary condition b[(Au, eta) + r beta] = -beta.
double verify_regular_identity(const PiecewiseExpPoly& u, double alpha, double r);

/// q = m_{2k}, the coupling function of the nonlocal family.
PiecewiseExpPoly nonlocal_q(int k);

/// Closure action of the nonlocal family: A_q f = -f'' + b21 q f(0) +
/// b22 (f,q) q on {f_s = 0, f'_s = b11 f(0) + b12 (f,q)}; exact in the class.
PiecewiseExpPoly nonlocal_apply(const PiecewiseExpPoly& f, const Eigen::Matrix2cd& b, int k);

} // namespace zrp
