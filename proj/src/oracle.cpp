#include "zrp/oracle.hpp"

#include <cmath>

namespace zrp {

namespace {

bool is_zero_matrix(const Eigen::MatrixXcd& M) {
    return M.size() == 0 || M.cwiseAbs().maxCoeff() == 0.0;
}

// Eigenvalue count below x for a symmetric tridiagonal matrix with constant
// off-diagonal, via the LDL^T Sturm sequence.
int sturm_count(const Eigen::VectorXd& diag, double off, double x) {
    const double off2 = off * off;
    int count = 0;
    double q = 1.0;
    for (int i = 0; i < diag.size(); ++i) {
        q = diag(i) - x - (i > 0 ? off2 / q : 0.0);
        if (q < 0.0) ++count;
        if (std::abs(q) < 1e-300) q = 1e-300;
    }
    return count;
}

double sturm_kth_eigenvalue(const Eigen::VectorXd& diag, double off, int k) {
    double lo = diag.minCoeff() - 2.0 * std::abs(off) - 1.0;
    double hi = diag.maxCoeff() + 2.0 * std::abs(off) + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(diag, off, mid) >= k + 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

Eigen::MatrixXcd GridOperator::dense() const {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        M(i, i) = diag(i);
        if (i + 1 < n) {
            M(i, i + 1) = offdiag;
            M(i + 1, i) = offdiag;
        }
    }
    if (has_center) {
        for (int i = 0; i < n; ++i) {
            if (i == center) continue; // (c,c) part already folded into diag
            M(i, center) += center_col(i);
            M(center, i) += std::conj(center_col(i));
        }
    }
    if (has_rank) M += rank_coeff * (rank_vec * rank_vec.adjoint());
    return M;
}

double GridOperator::hermiticity_defect() const {
    // Hermitian by construction; report the defect of the materialization
    // for matrices small enough to build (the invariant the tests check).
    if (n <= 2200) {
        const Eigen::MatrixXcd M = dense();
        return (M - M.adjoint()).cwiseAbs().maxCoeff();
    }
    return 0.0;
}

GridOperator discretize(const ExtensionSpec& spec, double L, double h) {
    if (!(L > 0.0) || !(h > 0.0)) throw Error("discretize requires L > 0, h > 0");
    const double ratio = L / h;
    const long nside = std::lround(ratio);
    if (nside < 2 || std::abs(ratio - double(nside)) > 1e-9 * ratio)
        throw Error("discretize requires L to be an integer multiple of h");

    GridOperator g;
    g.L = L;
    g.h = h;
    g.family = spec;
    g.n = 2 * int(nside) - 1;
    g.center = int(nside) - 1;
    g.offdiag = -1.0 / (h * h);
    g.diag = Eigen::VectorXd::Constant(g.n, 2.0 / (h * h) + 1.0);

    const auto grid_x = [&](int i) { return (i - g.center) * h; };

    if (spec.family == Family::L2PointInteraction) {
        if (is_zero_matrix(spec.B)) return g; // free operator
        const bool delta_only = std::abs(spec.B(0, 1)) == 0.0 && std::abs(spec.B(1, 0)) == 0.0 &&
                                std::abs(spec.B(1, 1)) == 0.0 &&
                                std::abs(spec.B(0, 0).imag()) == 0.0;
        if (!delta_only)
            throw UnsupportedFamily(
                "oracle supports only the delta interaction B = diag(beta, 0) in the L2 family");
        if ((spec.R - canonical_r_l2()).cwiseAbs().maxCoeff() > 1e-12)
            throw UnsupportedFamily("oracle supports only the canonical regularization R0");
        g.diag(g.center) += spec.B(0, 0).real() / h;
        return g;
    }

    if (spec.family == Family::Nonlocal) {
        const PiecewiseExpPoly q = nonlocal_q(spec.k);
        Eigen::VectorXcd qs(g.n);
        for (int i = 0; i < g.n; ++i) {
            const double x = grid_x(i);
            qs(i) = (i == g.center) ? trace(q, Side::Right) : q(x);
        }
        // delta row at the center: b11 f(0)/h + b12 (f, q) with (f, q) = h sum
        g.diag(g.center) += spec.B(0, 0).real() / h;
        g.has_center = true;
        g.center_col = spec.B(1, 0) * qs;
        g.diag(g.center) += 2.0 * (spec.B(1, 0) * qs(g.center)).real();
        // b22 (f, q) q with trapezoid weights: rank-one b22 h q q^H
        if (spec.B(1, 1).real() != 0.0) {
            g.has_rank = true;
            g.rank_coeff = spec.B(1, 1).real() * h;
            g.rank_vec = qs;
        }
        return g;
    }

    throw UnsupportedFamily("oracle supports the free, delta and nonlocal families");
}

std::vector<double> lowest_eigenvalues(const GridOperator& gop, int k) {
    if (k <= 0) return {};
    if (k > gop.n) throw DimensionMismatch("requested more eigenvalues than the matrix order");
    std::vector<double> evs;
    evs.reserve(k);
    if (gop.is_real_tridiagonal()) {
        for (int i = 0; i < k; ++i) evs.push_back(sturm_kth_eigenvalue(gop.diag, gop.offdiag, i));
        return evs;
    }
    const Eigen::MatrixXcd M = gop.dense();
    if (M.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.real(), Eigen::EigenvaluesOnly);
        for (int i = 0; i < k; ++i) evs.push_back(es.eigenvalues()(i));
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
        for (int i = 0; i < k; ++i) evs.push_back(es.eigenvalues()(i));
    }
    return evs;
}

Complex quadrature_inner(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, double L, double h) {
    if (!(L > 0.0) || !(h > 0.0)) throw Error("quadrature_inner requires L > 0, h > 0");
    const int m = std::max(2, int(std::lround(2.0 * L / h)));
    Complex sum{0.0, 0.0};
    Complex first{0.0, 0.0}, last{0.0, 0.0};
    for (int j = 0; j < m; ++j) {
        const double x = -L + (j + 0.5) * h;
        const Complex v = f(x) * std::conj(g(x));
        sum += v;
        if (j == 0) first = v;
        if (j == m - 1) last = v;
    }
    return h * (sum - 0.5 * first - 0.5 * last);
}

} // namespace zrp
