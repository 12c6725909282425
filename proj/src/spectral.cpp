#include "zrp/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace zrp {

namespace {

constexpr double kResidualCertificate = 1e-8;
constexpr double kTangentDip = 1e-10;
constexpr double kConfluentWindow = 1e-6;

double kappa_of(double E) { return std::sqrt(1.0 - E); }

// ---- generic determinant scan ------------------------------------------

struct RootCandidate {
    double e = 0.0;
    bool tangent = false;
};

class DetScanner {
public:
    DetScanner(std::function<Eigen::MatrixXcd(double)> matrix, const ScanParams& scan)
        : matrix_(std::move(matrix)), scan_(scan) {}

    std::vector<RootCandidate> run() const;

private:
    // Raw determinant. Any per-E row normalization flattens the |det| dip at
    // degenerate roots (where whole rows vanish), so tangent-root detection
    // works against the scan-global magnitude instead.
    Complex det(double e) const { return matrix_(e).determinant(); }

    double bisect_real(double lo, double hi, double flo) const {
        for (int it = 0; it < 200 && hi - lo > scan_.refinement_tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = det(mid).real();
            if ((flo <= 0.0) == (fm <= 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }

    double minimize_abs(double lo, double hi) const {
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = std::abs(det(c)), fd = std::abs(det(d));
        for (int it = 0; it < 200 && b - a > scan_.refinement_tol; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = std::abs(det(c));
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = std::abs(det(d));
            }
        }
        return 0.5 * (a + b);
    }

    std::function<Eigen::MatrixXcd(double)> matrix_;
    ScanParams scan_;
};

std::vector<RootCandidate> DetScanner::run() const {
    const int n = std::max(2, static_cast<int>(std::ceil((scan_.e_max - scan_.e_min) / scan_.step)) + 1);
    std::vector<double> es(n);
    for (int i = 0; i < n; ++i)
        es[i] = scan_.e_min + (scan_.e_max - scan_.e_min) * double(i) / double(n - 1);

    std::vector<Complex> vals(n);
    const int nthreads = std::max(1, scan_.threads);
    if (nthreads == 1) {
        for (int i = 0; i < n; ++i) vals[i] = det(es[i]);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) vals[i] = det(es[i]);
            });
        for (auto& th : pool) th.join();
    }

    double scale = 0.0;
    for (const Complex& v : vals) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return {};
    double imag_max = 0.0;
    for (const Complex& v : vals) imag_max = std::max(imag_max, std::abs(v.imag()));
    const bool real_det = imag_max <= 1e-9 * scale;

    std::vector<RootCandidate> roots;
    auto push_unique = [&](double e, bool tangent) {
        for (const auto& r : roots)
            if (std::abs(r.e - e) <= 10.0 * scan_.refinement_tol + 1e-14) return;
        roots.push_back({e, tangent});
    };

    if (real_det) {
        for (int i = 0; i + 1 < n; ++i) {
            const double a = vals[i].real(), b = vals[i + 1].real();
            if (a == 0.0) push_unique(es[i], false);
            if (a * b < 0.0) push_unique(bisect_real(es[i], es[i + 1], a), false);
        }
        if (vals[n - 1].real() == 0.0) push_unique(es[n - 1], false);
    }
    // magnitude dips with no sign change: tangent roots (and the only root
    // mechanism when the determinant is genuinely complex)
    for (int i = 1; i + 1 < n; ++i) {
        const double fm = std::abs(vals[i - 1]), f0 = std::abs(vals[i]), fp = std::abs(vals[i + 1]);
        if (f0 <= fm && f0 <= fp && f0 < scale) {
            if (real_det && vals[i - 1].real() * vals[i + 1].real() < 0.0) continue; // handled above
            const double e = minimize_abs(es[i - 1], es[i + 1]);
            if (std::abs(det(e)) <= kTangentDip * scale) push_unique(e, true);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const RootCandidate& a, const RootCandidate& b) {
        return a.e < b.e;
    });
    return roots;
}

// ---- ansatz bases and system matrices ----------------------------------

PiecewiseExpPoly even_exp(double kappa) {
    return PiecewiseExpPoly::even({ExpTerm{Complex(1, 0), 0, Complex(kappa, 0)}});
}

PiecewiseExpPoly odd_exp(double kappa) {
    return PiecewiseExpPoly::odd({ExpTerm{Complex(1, 0), 0, Complex(kappa, 0)}});
}

std::vector<PiecewiseExpPoly> l2_basis(double E) {
    const double kappa = kappa_of(E);
    return {even_exp(kappa), odd_exp(kappa)};
}

std::vector<PiecewiseExpPoly> sobolev_basis(double E, int p, bool confluent_fallback) {
    const double kappa = kappa_of(E);
    std::vector<PiecewiseExpPoly> basis;
    if (std::abs(kappa - 1.0) < kConfluentWindow) {
        if (!confluent_fallback)
            throw DegenerateBasis("kappa = 1 collides with the e^{-|x|} basis");
        basis.push_back(PiecewiseExpPoly::right_only({ExpTerm{Complex(1, 0), p, Complex(1, 0)}}));
        basis.push_back(PiecewiseExpPoly::left_only({ExpTerm{Complex(1, 0), p, Complex(1, 0)}}));
    } else {
        basis.push_back(PiecewiseExpPoly::right_only({ExpTerm{Complex(1, 0), 0, Complex(kappa, 0)}}));
        basis.push_back(PiecewiseExpPoly::left_only({ExpTerm{Complex(1, 0), 0, Complex(kappa, 0)}}));
    }
    for (int j = 0; j < p; ++j) {
        basis.push_back(PiecewiseExpPoly::right_only({ExpTerm{Complex(1, 0), j, Complex(1, 0)}}));
        basis.push_back(PiecewiseExpPoly::left_only({ExpTerm{Complex(1, 0), j, Complex(1, 0)}}));
    }
    return basis;
}

// Gamma-hat formulas without the W^p membership check (the ansatz basis
// functions are not individually in W^p_2).
BoundaryData sobolev_gamma_raw(const PiecewiseExpPoly& f, int p, const Eigen::MatrixXcd& R) {
    BoundaryData b;
    b.gamma0.resize(p + 2);
    b.gamma1.resize(p + 2);
    for (int tau = 0; tau <= p + 1; ++tau) {
        const double sign = (tau % 2 == 0) ? 1.0 : -1.0;
        b.gamma0(tau) = sign * mean_jump(f, tau).mean;
        b.gamma1(tau) = mean_jump(f, 2 * p + 1 - tau).jump;
    }
    b.gamma0 -= R * b.gamma1;
    return b;
}

Eigen::MatrixXcd l2_system(const ExtensionSpec& spec, double E) {
    const auto basis = l2_basis(E);
    Eigen::MatrixXcd M(2, 2);
    for (int j = 0; j < 2; ++j) {
        const BoundaryData bd = boundary_data_l2(basis[j], spec.R);
        M.col(j) = spec.B * bd.gamma0 - bd.gamma1;
    }
    return M;
}

Eigen::MatrixXcd sobolev_system(const ExtensionSpec& spec, double E, bool confluent_fallback) {
    const int p = spec.p;
    const auto basis = sobolev_basis(E, p, confluent_fallback);
    const int n = 2 * p + 2;
    Eigen::MatrixXcd M(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < p; ++k)
            M(k, j) = trace(basis[j], Side::Right, k) - trace(basis[j], Side::Left, k);
        const BoundaryData bd = sobolev_gamma_raw(basis[j], p, spec.R);
        M.col(j).segment(p, p + 2) = spec.B * bd.gamma0 - bd.gamma1;
    }
    return M;
}

// Nonlocal closure (A_q + I) f = E f: f = a e^{-kappa|x|} + t g with
// g = (A-E)^{-1} q and t = -(b21 s1 + b22 s2); unknowns (a, s1, s2).
Eigen::MatrixXcd nonlocal_system(const ExtensionSpec& spec, double E) {
    const double kappa = kappa_of(E);
    const PiecewiseExpPoly q = nonlocal_q(spec.k);
    const PiecewiseExpPoly g = resolvent_apply(q, E);
    const PiecewiseExpPoly ek = even_exp(kappa);
    const Complex b11 = spec.B(0, 0), b12 = spec.B(0, 1), b21 = spec.B(1, 0), b22 = spec.B(1, 1);
    const Complex g0 = trace(g, Side::Right);
    const Complex ekq = l2_inner(ek, q), gq = l2_inner(g, q);
    Eigen::MatrixXcd M(3, 3);
    // f'_s = b11 s1 + b12 s2, with f'_s = -2 kappa a (g is C^1-matched)
    M.row(0) << Complex(-2.0 * kappa, 0.0), -b11, -b12;
    // s1 = f(0) = a + t g(0)
    M.row(1) << Complex(1, 0), -b21 * g0 - Complex(1, 0), -b22 * g0;
    // s2 = (f, q) = a (e_k, q) + t (g, q)
    M.row(2) << ekq, -b21 * gq, -b22 * gq - Complex(1, 0);
    return M;
}

// ---- eigenfunction assembly ---------------------------------------------

// no row scaling here: rescaling a near-zero constraint row re-inflates it
// and turns the null direction into garbage
Eigen::VectorXcd nullspace_vector(const Eigen::MatrixXcd& M, int which) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
    return svd.matrixV().col(M.cols() - 1 - which);
}

int nullspace_dim(const Eigen::MatrixXcd& M) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    const auto& sv = svd.singularValues();
    int dim = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) <= 1e-8 * std::max(1.0, sv(0))) ++dim;
    return std::max(1, dim);
}

void fix_phase(PiecewiseExpPoly& f, const BoundaryData& bd) {
    Eigen::VectorXcd all(bd.gamma0.size() + bd.gamma1.size());
    all << bd.gamma0, bd.gamma1;
    const double scale = all.cwiseAbs().maxCoeff();
    for (int i = 0; i < all.size(); ++i) {
        if (std::abs(all(i)) > 1e-8 * std::max(scale, 1e-300)) {
            const Complex z = all(i);
            f *= std::conj(z) / std::abs(z);
            return;
        }
    }
}

void append_pair(SpectrumReport& rep, double e, PiecewiseExpPoly f, double residual, bool tangent) {
    rep.eigenvalues.push_back(e);
    rep.eigenfunctions.push_back(std::move(f));
    rep.residuals.push_back(residual);
    rep.tangent_roots.push_back(tangent);
}

void append_rejected(SpectrumReport& rep, double e) {
    for (double r : rep.rejected_roots)
        if (std::abs(r - e) <= 1e-11) return;
    rep.rejected_roots.push_back(e);
}

void check_window(const ScanParams& scan, double threshold) {
    if (!(scan.e_min < scan.e_max) || !(scan.e_max < threshold) || !(scan.step > 0.0))
        throw WindowInvalid("scan window must satisfy e_min < e_max < threshold, step > 0");
}

} // namespace

SpectrumReport bound_states_l2(const ExtensionSpec& spec, const ScanParams& scan) {
    if (spec.family != Family::L2PointInteraction)
        throw UnsupportedFamily("bound_states_l2 requires the L2 family");
    check_window(scan, 1.0);
    SpectrumReport rep;
    rep.family = spec;
    rep.scan = scan;

    DetScanner scanner([&](double e) { return l2_system(spec, e); }, scan);
    for (const RootCandidate& root : scanner.run()) {
        const Eigen::MatrixXcd M = l2_system(spec, root.e);
        const int dim = nullspace_dim(M);
        for (int which = 0; which < dim; ++which) {
            const Eigen::VectorXcd v = nullspace_vector(M, which);
            const auto basis = l2_basis(root.e);
            PiecewiseExpPoly f = v(0) * basis[0] + v(1) * basis[1];
            f *= Complex(1.0 / l2_norm(f), 0.0);
            fix_phase(f, boundary_data_l2(f, spec.R));
            double residual;
            try {
                residual = eigencheck(f, root.e, spec);
            } catch (const NotInDomain&) {
                append_rejected(rep, root.e);
                continue;
            }
            if (residual <= kResidualCertificate)
                append_pair(rep, root.e, std::move(f), residual, root.tangent);
            else
                append_rejected(rep, root.e);
        }
    }
    return rep;
}

SpectrumReport bound_states_sobolev(const ExtensionSpec& spec, const ScanParams& scan) {
    if (spec.family != Family::Sobolev)
        throw UnsupportedFamily("bound_states_sobolev requires the Sobolev family");
    check_window(scan, 1.0);
    SpectrumReport rep;
    rep.family = spec;
    rep.scan = scan;

    DetScanner scanner(
        [&](double e) { return sobolev_system(spec, e, scan.confluent_fallback); }, scan);
    // the basis swap at |kappa - 1| = 1e-6 makes the determinant jump there;
    // uncertified candidates inside the swap band are pure artifacts
    const auto in_confluent_band = [&](double e) {
        return std::abs(kappa_of(e) - 1.0) < 2.0 * kConfluentWindow;
    };
    for (const RootCandidate& root : scanner.run()) {
        const Eigen::MatrixXcd M = sobolev_system(spec, root.e, scan.confluent_fallback);
        const int dim = nullspace_dim(M);
        const auto basis = sobolev_basis(root.e, spec.p, scan.confluent_fallback);
        for (int which = 0; which < dim; ++which) {
            const Eigen::VectorXcd v = nullspace_vector(M, which);
            PiecewiseExpPoly f;
            for (int j = 0; j < v.size(); ++j) f += v(j) * basis[j];
            double residual;
            try {
                f *= Complex(1.0 / sobolev_norm(f, spec.p), 0.0);
                fix_phase(f, boundary_data(spec, f));
                residual = eigencheck(f, root.e, spec);
            } catch (const Error&) {
                if (!in_confluent_band(root.e)) append_rejected(rep, root.e);
                continue;
            }
            if (residual <= kResidualCertificate)
                append_pair(rep, root.e, std::move(f), residual, root.tangent);
            else if (!in_confluent_band(root.e))
                append_rejected(rep, root.e);
        }
    }
    return rep;
}

SpectrumReport bound_state_3d(double b, double mu) {
    const ExtensionSpec spec = point3d_spec(mu, b);
    SpectrumReport rep;
    rep.family = spec;
    if (b == 0.0) return rep;
    const double kappa = mu - 1.0 / b;
    if (!(kappa > 0.0)) return rep;
    const double E = mu * mu - kappa * kappa;
    const double c = std::sqrt(kappa / (2.0 * M_PI));
    PiecewiseExpPoly profile =
        PiecewiseExpPoly::right_only({ExpTerm{Complex(c, 0), 0, Complex(kappa, 0)}});
    const double residual = eigencheck(profile, E, spec);
    append_pair(rep, E, std::move(profile), residual, false);
    return rep;
}

SpectrumReport bound_states_nonlocal(const ExtensionSpec& spec, const ScanParams& scan) {
    if (spec.family != Family::Nonlocal)
        throw UnsupportedFamily("bound_states_nonlocal requires the nonlocal family");
    check_window(scan, 1.0);
    SpectrumReport rep;
    rep.family = spec;
    rep.scan = scan;

    DetScanner scanner([&](double e) { return nonlocal_system(spec, e); }, scan);
    for (const RootCandidate& root : scanner.run()) {
        const Eigen::MatrixXcd M = nonlocal_system(spec, root.e);
        const Eigen::VectorXcd v = nullspace_vector(M, 0);
        const Complex t = -(spec.B(1, 0) * v(1) + spec.B(1, 1) * v(2));
        PiecewiseExpPoly f = v(0) * even_exp(kappa_of(root.e)) +
                             t * resolvent_apply(nonlocal_q(spec.k), root.e);
        f *= Complex(1.0 / l2_norm(f), 0.0);
        // closure residual ||(A_q + I) f - E f||
        double residual;
        try {
            const PiecewiseExpPoly aq = nonlocal_apply(f, spec.B, spec.k);
            residual = l2_norm(aq + f - Complex(root.e, 0.0) * f);
        } catch (const NotInDomain&) {
            append_rejected(rep, root.e);
            continue;
        }
        if (residual <= kResidualCertificate) {
            const Complex z = trace(f, Side::Right, 0) + trace(f, Side::Left, 0);
            if (std::abs(z) > 1e-12) f *= std::conj(z) / std::abs(z);
            append_pair(rep, root.e, std::move(f), residual, root.tangent);
        } else {
            append_rejected(rep, root.e);
        }
    }
    return rep;
}

double eigencheck(const PiecewiseExpPoly& f, double E, const ExtensionSpec& spec) {
    const PiecewiseExpPoly image = apply_extension(f, spec); // throws NotInDomain
    const PiecewiseExpPoly diff = image - Complex(E, 0.0) * f;
    switch (spec.family) {
        case Family::Sobolev:
            return sobolev_norm(diff, spec.p);
        case Family::Point3D:
            return std::sqrt(4.0 * M_PI) * l2_norm(diff);
        default:
            return l2_norm(diff);
    }
}

} // namespace zrp
