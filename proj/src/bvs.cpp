#include "zrp/bvs.hpp"

#include <cmath>

namespace zrp {

namespace {

Complex pairing(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return a.dot(b); // Eigen's dot conjugates the first argument
}

// (x, y)_{C^n} conjugate-linear in the second slot, matching the paper.
Complex cn_inner(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
    return pairing(y, x);
}

struct GreenTerms {
    Complex lhs1, lhs2, rhs1, rhs2;
    double residual() const { return std::abs(lhs1 - lhs2 - rhs1 + rhs2); }
    double scale() const {
        return std::max(1.0, std::abs(lhs1) + std::abs(lhs2) + std::abs(rhs1) + std::abs(rhs2));
    }
};

GreenTerms green_terms_l2(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g,
                          const Eigen::Matrix2cd& R) {
    const PiecewiseExpPoly af = apply_a(f), ag = apply_a(g);
    const BoundaryData bf = boundary_data_l2(f, R), bg = boundary_data_l2(g, R);
    return {l2_inner(af, g), l2_inner(f, ag),
            cn_inner(bf.gamma1, bg.gamma0), cn_inner(bf.gamma0, bg.gamma1)};
}

GreenTerms green_terms_powers(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, int p) {
    const BoundaryData bf = stacked_boundary_data(f, p), bg = stacked_boundary_data(g, p);
    return {l2_inner(quasi_derivative(f, 2 * p + 2), g),
            l2_inner(f, quasi_derivative(g, 2 * p + 2)),
            cn_inner(bf.gamma1, bg.gamma0), cn_inner(bf.gamma0, bg.gamma1)};
}

GreenTerms green_terms_sobolev(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, int p) {
    const BoundaryData bf = quasi_boundary_data_sobolev(f, p);
    const BoundaryData bg = quasi_boundary_data_sobolev(g, p);
    return {l2_inner(quasi_derivative(f, 2 * p + 2), g),
            l2_inner(f, quasi_derivative(g, 2 * p + 2)),
            cn_inner(bf.gamma1, bg.gamma0), cn_inner(bf.gamma0, bg.gamma1)};
}

} // namespace

Eigen::Matrix2cd canonical_r_l2() {
    Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
    r(0, 0) = Complex(0.5, 0.0);
    r(1, 1) = Complex(-0.5, 0.0);
    return r;
}

BoundaryData boundary_data_l2(const PiecewiseExpPoly& f, const Eigen::Matrix2cd& R) {
    const MeanJump v = mean_jump(f, 0);
    const MeanJump d = mean_jump(f, 1);
    BoundaryData b;
    b.gamma1 = Eigen::Vector2cd(d.jump, v.jump);
    b.gamma0 = Eigen::Vector2cd(v.mean, -d.mean) + (canonical_r_l2() - R) * b.gamma1;
    return b;
}

BoundaryData boundary_data_l2(const PiecewiseExpPoly& f) {
    return boundary_data_l2(f, canonical_r_l2());
}

BoundaryData stacked_boundary_data(const PiecewiseExpPoly& f, int p, const Eigen::Matrix2cd& R) {
    if (p < 1) throw InvalidIndex("stacked triple requires p >= 1");
    BoundaryData b;
    b.gamma0.resize(2 * (p + 1));
    b.gamma1.resize(2 * (p + 1));
    PiecewiseExpPoly pow = f;
    for (int k = 0; k <= p; ++k) {
        const BoundaryData blk = boundary_data_l2(pow, R);
        b.gamma0.segment<2>(2 * k) = blk.gamma0;
        // reversed stacking: Gamma_1 (A_N^*)^p f comes first
        b.gamma1.segment<2>(2 * (p - k)) = blk.gamma1;
        if (k < p) pow = apply_a(pow);
    }
    return b;
}

BoundaryData stacked_boundary_data(const PiecewiseExpPoly& f, int p) {
    return stacked_boundary_data(f, p, canonical_r_l2());
}

BoundaryData quasi_boundary_data_sobolev(const PiecewiseExpPoly& f, int p) {
    if (p < 2 || p % 2 != 0) throw OddIndex("Sobolev quasi-triple requires even p >= 2");
    if (!in_sobolev(f, p)) throw NotInSobolevSpace("f is not in W^p_2");
    BoundaryData b;
    b.gamma0.resize(p + 2);
    b.gamma1.resize(p + 2);
    for (int tau = 0; tau <= p + 1; ++tau) {
        const double sign = (tau % 2 == 0) ? 1.0 : -1.0;
        b.gamma0(tau) = sign * mean_jump(f, tau).mean;
        b.gamma1(tau) = mean_jump(f, 2 * p + 1 - tau).jump;
    }
    return b;
}

BoundaryData boundary_data_3d(Complex c, double kappa, double mu) {
    if (!(kappa > 0.0)) throw Error("boundary_data_3d requires kappa > 0");
    BoundaryData b;
    b.gamma1 = Eigen::VectorXcd::Constant(1, c);
    b.gamma0 = Eigen::VectorXcd::Constant(1, c * (mu - kappa));
    return b;
}

double green_residual_l2(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g,
                         const Eigen::Matrix2cd& R) {
    return green_terms_l2(f, g, R).residual();
}

double green_residual_l2(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g) {
    return green_residual_l2(f, g, canonical_r_l2());
}

double green_residual_powers(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, int p) {
    return green_terms_powers(f, g, p).residual();
}

double green_residual_sobolev(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, int p) {
    return green_terms_sobolev(f, g, p).residual();
}

double green_scale_l2(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g,
                      const Eigen::Matrix2cd& R) {
    return green_terms_l2(f, g, R).scale();
}

double green_scale_powers(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, int p) {
    return green_terms_powers(f, g, p).scale();
}

double green_scale_sobolev(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, int p) {
    return green_terms_sobolev(f, g, p).scale();
}

} // namespace zrp
