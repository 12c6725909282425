#pragma once

#include <vector>

#include "zrp/extensions.hpp"

namespace zrp {

struct ScanParams {
    double e_min = -4.0;
    double e_max = 0.99;
    double step = 0.01;
    double refinement_tol = 1e-12;
    /// Replace e^{-kappa|x|} by |x|^p e^{-|x|} when |kappa-1| < 1e-6 in the
    /// Sobolev ansatz (the confluent limit of the basis). Without it a root
    /// scan touching E = 0 throws DegenerateBasis.
    bool confluent_fallback = true;
    /// Determinant sampling may run on this many threads; results do not
    /// depend on the thread count.
    int threads = 1;
};

/// Bound states of one realization below the essential-spectrum threshold
/// (1 for the 1D families, mu^2 for Point3D). Eigenfunctions are unit-norm
/// in the family's ambient inner product with the first nonzero boundary
/// coordinate made real positive. Every reported pair carries its
/// eigencheck residual; determinant roots whose eigenpair fails the 1e-8
/// residual certificate are listed in rejected_roots instead.
struct SpectrumReport {
    ExtensionSpec family;
    ScanParams scan;
    std::vector<double> eigenvalues;
    std::vector<PiecewiseExpPoly> eigenfunctions;
    std::vector<double> residuals;
    std::vector<bool> tangent_roots;
    std::vector<double> rejected_roots;
};

/// L2 point-interaction bound states: ansatz a e^{-kappa|x|} + b sign(x)
/// e^{-kappa|x|}, kappa = sqrt(1-E); roots of the 2x2 boundary determinant.
/// Throws WindowInvalid unless e_min < e_max < 1.
SpectrumReport bound_states_l2(const ExtensionSpec& spec, const ScanParams& scan);

/// W^p_2 bound states: per-half-line ansatz {e^{-kappa|x|}} + {|x|^j e^{-|x|},
/// j = 0..p-1}; p continuity rows + (p+2) boundary rows give a square
/// (2p+2) determinant. Roots are certified by the apply_extension residual
/// in (.,.)_p before being reported.
SpectrumReport bound_states_sobolev(const ExtensionSpec& spec, const ScanParams& scan);

/// 3D point interaction: kappa = mu - 1/b; one eigenvalue E = mu^2 - kappa^2
/// when kappa > 0, none otherwise. Exact in the radial exp-poly class.
SpectrumReport bound_state_3d(double b, double mu);

/// Bound states of the nonlocal closure A_q + I (same threshold-1 convention
/// as the other 1D families): 3x3 self-consistency determinant in
/// (a, f(0), (f,q)). Residuals are against the closure action.
SpectrumReport bound_states_nonlocal(const ExtensionSpec& spec, const ScanParams& scan);

/// || apply_extension(f) - E f || in the family norm (L2, (.,.)_p for the
/// Sobolev family, L2(R^3) for Point3D). Throws NotInDomain.
double eigencheck(const PiecewiseExpPoly& f, double E, const ExtensionSpec& spec);

} // namespace zrp
