#include "zrp/extensions.hpp"

#include <cmath>
#include <limits>

namespace zrp {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kConstraintTol = 1e-10;
constexpr double kRankTol = 1e-10;

Eigen::MatrixXcd identity_like(const Eigen::MatrixXcd& M) {
    return Eigen::MatrixXcd::Identity(M.rows(), M.cols());
}

// f = u + a m_2 + b m_{2k+2} with u matched through order 2k+1.
struct NonlocalParts {
    PiecewiseExpPoly smooth;
    Complex a, b;
};

NonlocalParts nonlocal_decompose(const PiecewiseExpPoly& f, int k) {
    const PiecewiseExpPoly m2 = fundamental_solution(2);
    const PiecewiseExpPoly mtop = fundamental_solution(2 * k + 2);
    const Complex fps = trace(f, Side::Right, 1) - trace(f, Side::Left, 1);
    const Complex a = -fps; // jump of m_2' at 0 is -1
    PiecewiseExpPoly rem = f - a * m2;
    const Complex jt = trace(mtop, Side::Right, 2 * k + 1) - trace(mtop, Side::Left, 2 * k + 1);
    const Complex b = (trace(rem, Side::Right, 2 * k + 1) - trace(rem, Side::Left, 2 * k + 1)) / jt;
    rem -= b * mtop;
    if (!is_matched(rem, 2 * k + 1))
        throw NotInScale("f is not representable as W^{2k+2}(R) + span{m_2, m_{2k+2}}");
    return {rem, a, b};
}

// f = u + beta eta for the rank-one family, eta = m_4/||m_4||.
struct RankOneParts {
    PiecewiseExpPoly smooth;
    Complex beta;
};

const PiecewiseExpPoly& rank_one_eta() {
    static const PiecewiseExpPoly eta = [] {
        PiecewiseExpPoly m4 = fundamental_solution(4);
        return Complex(1.0 / l2_norm(m4), 0.0) * m4;
    }();
    return eta;
}

RankOneParts rank_one_decompose(const PiecewiseExpPoly& f) {
    const PiecewiseExpPoly& eta = rank_one_eta();
    const Complex je = trace(eta, Side::Right, 3) - trace(eta, Side::Left, 3);
    const Complex beta = (trace(f, Side::Right, 3) - trace(f, Side::Left, 3)) / je;
    PiecewiseExpPoly rem = f - beta * eta;
    // m = 3 in L_m = D(A^m) + <eta>: the smooth part is matched through 5
    if (!is_matched(rem, 5)) throw NotInScale("f is not representable as D(A^3) + span{eta}");
    return {rem, beta};
}

double boundary_scale(const Eigen::MatrixXcd& B, const BoundaryData& bd) {
    return std::max(1.0, (B * bd.gamma0).norm() + bd.gamma1.norm());
}

} // namespace

int ExtensionSpec::boundary_dim() const {
    switch (family) {
        case Family::L2PointInteraction: return 2;
        case Family::StackedPower: return 2 * (p + 1);
        case Family::Sobolev: return p + 2;
        case Family::Nonlocal: return 2;
        case Family::Point3D: return 1;
        case Family::RankOneRegular: return 1;
    }
    return 0;
}

double hermiticity_defect(const Eigen::MatrixXcd& M) {
    if (M.rows() != M.cols()) return std::numeric_limits<double>::infinity();
    return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

void require_hermitian(const Eigen::MatrixXcd& M, const std::string& what) {
    if (M.rows() != M.cols()) throw DimensionMismatch(what + " must be square");
    if (M.size() > 0 && hermiticity_defect(M) > kHermTol)
        throw NonHermitian(what + " is not Hermitian (defect above 1e-12)");
}

ExtensionSpec l2_spec(const Eigen::Matrix2cd& B) { return l2_spec(B, canonical_r_l2()); }

ExtensionSpec l2_spec(const Eigen::Matrix2cd& B, const Eigen::Matrix2cd& R) {
    require_hermitian(B, "B");
    require_hermitian(R, "R");
    ExtensionSpec s;
    s.family = Family::L2PointInteraction;
    s.B = B;
    s.R = R;
    return s;
}

ExtensionSpec sobolev_spec(int p, const Eigen::MatrixXcd& B) {
    return sobolev_spec(p, B, Eigen::MatrixXcd::Zero(p + 2, p + 2));
}

ExtensionSpec sobolev_spec(int p, const Eigen::MatrixXcd& B, const Eigen::MatrixXcd& R) {
    if (p < 2 || p % 2 != 0) throw OddIndex("Sobolev family requires even p >= 2");
    require_hermitian(B, "B");
    require_hermitian(R, "R");
    if (B.rows() != p + 2 || R.rows() != p + 2)
        throw DimensionMismatch("Sobolev family requires order p+2 matrices");
    ExtensionSpec s;
    s.family = Family::Sobolev;
    s.B = B;
    s.R = R;
    s.p = p;
    return s;
}

ExtensionSpec nonlocal_spec(int k, const Eigen::Matrix2cd& B) {
    if (k < 1) throw InvalidIndex("nonlocal family requires k >= 1");
    require_hermitian(B, "B");
    ExtensionSpec s;
    s.family = Family::Nonlocal;
    s.B = B;
    s.R = Eigen::Matrix2cd::Zero();
    s.k = k;
    return s;
}

ExtensionSpec point3d_spec(double mu, double b) {
    if (!(mu > 0.0)) throw Error("Point3D family requires mu > 0");
    ExtensionSpec s;
    s.family = Family::Point3D;
    s.B = Eigen::MatrixXcd::Constant(1, 1, Complex(b, 0.0));
    s.R = Eigen::MatrixXcd::Zero(1, 1);
    s.mu = mu;
    return s;
}

ExtensionSpec rank_one_spec(double alpha, double r) {
    ExtensionSpec s;
    s.family = Family::RankOneRegular;
    s.alpha = alpha;
    s.r = r;
    s.B = Eigen::MatrixXcd::Constant(1, 1, Complex(regular_rank_one_b(alpha, r, rank_one_gram()), 0.0));
    s.R = Eigen::MatrixXcd::Constant(1, 1, Complex(r, 0.0));
    return s;
}

Eigen::MatrixXcd constraint_matrix(const ExtensionSpec& spec) {
    const int n = spec.boundary_dim();
    Eigen::MatrixXcd M(n, 2 * n);
    M.leftCols(n) = spec.B;
    M.rightCols(n) = -Eigen::MatrixXcd::Identity(n, n);
    return M;
}

BoundaryData boundary_data(const ExtensionSpec& spec, const PiecewiseExpPoly& f) {
    switch (spec.family) {
        case Family::L2PointInteraction:
            return boundary_data_l2(f, spec.R);
        case Family::StackedPower:
            return stacked_boundary_data(f, spec.p, spec.R);
        case Family::Sobolev: {
            BoundaryData b = quasi_boundary_data_sobolev(f, spec.p);
            b.gamma0 -= spec.R * b.gamma1;
            return b;
        }
        case Family::Nonlocal: {
            const NonlocalParts parts = nonlocal_decompose(f, spec.k);
            (void)parts;
            BoundaryData b;
            b.gamma0 = Eigen::Vector2cd(mean_jump(f, 0).mean, l2_inner(f, nonlocal_q(spec.k)));
            b.gamma1 = Eigen::Vector2cd(mean_jump(f, 1).jump, mean_jump(f, 2 * spec.k + 1).jump);
            return b;
        }
        case Family::Point3D: {
            if (!f.left().empty())
                throw NotInScale("Point3D functions are radial profiles on the right half-line");
            const Complex g0 = trace(f, Side::Right, 0);
            const Complex g1 = trace(f, Side::Right, 1);
            BoundaryData b;
            b.gamma1 = Eigen::VectorXcd::Constant(1, g0);
            b.gamma0 = Eigen::VectorXcd::Constant(1, g1 + spec.mu * g0);
            return b;
        }
        case Family::RankOneRegular: {
            const RankOneParts parts = rank_one_decompose(f);
            const PiecewiseExpPoly& eta = rank_one_eta();
            const Complex au_eta = l2_inner(apply_a(parts.smooth), eta);
            BoundaryData b;
            b.gamma0 = Eigen::VectorXcd::Constant(1, au_eta + spec.r * parts.beta);
            b.gamma1 = Eigen::VectorXcd::Constant(1, -parts.beta);
            return b;
        }
    }
    throw UnsupportedFamily("unknown family");
}

double constraint_residual(const ExtensionSpec& spec, const PiecewiseExpPoly& f) {
    BoundaryData bd;
    try {
        bd = boundary_data(spec, f);
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
    }
    return (spec.B * bd.gamma0 - bd.gamma1).norm() / boundary_scale(spec.B, bd);
}

bool in_domain(const PiecewiseExpPoly& f, const ExtensionSpec& spec) {
    return constraint_residual(spec, f) <= kConstraintTol;
}

PiecewiseExpPoly apply_extension(const PiecewiseExpPoly& f, const ExtensionSpec& spec) {
    if (!in_domain(f, spec)) throw NotInDomain("f does not satisfy the boundary constraints");
    switch (spec.family) {
        case Family::L2PointInteraction:
        case Family::StackedPower:
            return apply_a(f);
        case Family::Sobolev:
            return apply_a(decompose(f, spec.p).smooth);
        case Family::Nonlocal:
            return apply_a(nonlocal_decompose(f, spec.k).smooth);
        case Family::Point3D: {
            const PiecewiseExpPoly d2 = differentiate(differentiate(f));
            return Complex(spec.mu * spec.mu, 0.0) * f - d2;
        }
        case Family::RankOneRegular:
            return apply_a(rank_one_decompose(f).smooth);
    }
    throw UnsupportedFamily("unknown family");
}

DistributionalValue regularized_apply(const PiecewiseExpPoly& f, const ExtensionSpec& spec) {
    if (spec.family == Family::L2PointInteraction) {
        const BoundaryData bd = boundary_data_l2(f, spec.R);
        const Eigen::VectorXcd coeffs = spec.B * bd.gamma0 - bd.gamma1;
        DistributionalValue v;
        v.regular = apply_a(f);
        v.delta_coeffs.assign(coeffs.data(), coeffs.data() + coeffs.size());
        v.trim();
        return v;
    }
    if (spec.family == Family::Sobolev) {
        ScaleElement el;
        BoundaryData bd;
        try {
            el = decompose(f, spec.p);
            bd = boundary_data(spec, f);
        } catch (const NotInSobolevSpace&) {
            throw NotInScale("f is not in L_m for the Sobolev family");
        }
        const Eigen::VectorXcd coeffs = spec.B * bd.gamma0 - bd.gamma1;
        DistributionalValue v;
        v.regular = apply_a(el.smooth);
        v.delta_coeffs.assign(coeffs.data(), coeffs.data() + coeffs.size());
        v.trim();
        return v;
    }
    throw UnsupportedFamily("regularized_apply supports the L2 and Sobolev families");
}

Eigen::MatrixXcd cayley_u_from_b(const Eigen::MatrixXcd& B) {
    require_hermitian(B, "B");
    const Eigen::MatrixXcd I = identity_like(B);
    const Complex i(0.0, 1.0);
    // (I + iB)^{-1} commutes with (I - iB)
    return (I + i * B).partialPivLu().solve(I - i * B);
}

Eigen::MatrixXcd cayley_b_from_u(const Eigen::MatrixXcd& U) {
    if (U.rows() != U.cols()) throw DimensionMismatch("U must be square");
    const Eigen::MatrixXcd I = identity_like(U);
    if ((U.adjoint() * U - I).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("U is not unitary");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(I + U);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin <= 1e-12 * std::max(1.0, smax))
        throw CayleySingular("-1 is in the spectrum of U; no B-form exists");
    const Complex i(0.0, 1.0);
    Eigen::MatrixXcd B = i * (I + U).partialPivLu().solve(U - I);
    B = 0.5 * (B + B.adjoint().eval()); // symmetrize rounding noise
    return B;
}

AdmissibilityResult admissible(const Eigen::MatrixXcd& B, const Eigen::MatrixXcd& R,
                               const AdmissibilityData& data) {
    const int d = data.dim_intersection;
    if (data.gram.rows() != d || data.gram.cols() != d)
        throw DimensionMismatch("gram must be of order dim_intersection");
    if (B.rows() != d || B.cols() != d || R.rows() != d || R.cols() != d)
        throw DimensionMismatch("B and R must be of order dim_intersection");
    require_hermitian(B, "B");
    require_hermitian(R, "R");
    require_hermitian(data.gram, "gram");
    if (d == 0) return {true, {}};

    const Eigen::MatrixXcd T = B * data.gram - Eigen::MatrixXcd::Identity(d, d) - B * R;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(T, Eigen::ComputeFullV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(d - 1);
    AdmissibilityResult res;
    res.admissible = smin > kRankTol * std::max(1.0, smax);
    if (!res.admissible) res.witness = svd.matrixV().col(d - 1);
    return res;
}

RecoveredPotential recover_potential(const TripleSpec& family) {
    RecoveredPotential out;
    if (family.family == TripleFamily::Point3D) {
        DistributionalValue psi;
        psi.delta_coeffs = {Complex(1.0, 0.0)};
        out.psi_basis.push_back(psi);
        out.effective_b_map =
            "psi = 3D delta at the origin; <f, delta_ex> = Gamma_0 f = lim(f - (Gamma_1 f) e^{-mu r}/r)";
        return out;
    }

    std::vector<PiecewiseExpPoly> basis;
    int powers = 1; // apply A this many times to map the defect basis to distributions
    if (family.family == TripleFamily::L2PointInteraction) {
        basis = defect_basis(0);
        powers = 1;
    } else {
        if (family.p < 2 || family.p % 2 != 0)
            throw OddIndex("Sobolev recovery requires even p >= 2");
        basis = defect_basis(family.p);
        powers = family.p + 1;
    }
    const int n = static_cast<int>(basis.size());
    Eigen::MatrixXcd G1(n, n);
    for (int j = 0; j < n; ++j) {
        const BoundaryData bd = (family.family == TripleFamily::L2PointInteraction)
                                    ? boundary_data_l2(basis[j])
                                    : quasi_boundary_data_sobolev(basis[j], family.p);
        G1.col(j) = bd.gamma1;
    }
    const Eigen::MatrixXcd Ginv = G1.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
    for (int j = 0; j < n; ++j) {
        PiecewiseExpPoly nj;
        for (int kb = 0; kb < n; ++kb) nj += Ginv(kb, j) * basis[kb];
        DistributionalValue psi{Complex(-1.0, 0.0) * nj, {}};
        for (int it = 0; it < powers; ++it) psi = apply_a(psi);
        out.psi_basis.push_back(psi);
    }
    out.effective_b_map =
        "Gamma_0 = Psi_R^*: <f, psi_j_ex> = (Gamma_0^R f, e_j); the coupling matrix B of "
        "B Gamma_0^R f = Gamma_1 f equals the coefficient matrix of the potential Psi B Psi_R^*";
    return out;
}

double rank_one_gram() {
    static const double gram = [] {
        const PiecewiseExpPoly& eta = rank_one_eta();
        return l2_inner(apply_a(eta), eta).real();
    }();
    return gram;
}

double regular_rank_one_b(double alpha, double r, double gram_a) {
    const double den = 1.0 + alpha * (gram_a - r);
    if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(alpha) * (std::abs(gram_a) + std::abs(r))))
        throw DegenerateDenominator("1 + alpha[(A eta, eta) - r] vanishes");
    return alpha / den;
}

double verify_regular_identity(const PiecewiseExpPoly& u, double alpha, double r) {
    if (!is_matched(u, 1)) throw NotInDomain("u must lie in D(A) (C^1-matched)");
    const PiecewiseExpPoly& eta = rank_one_eta();
    const PiecewiseExpPoly psi = apply_a(eta);
    const double b = regular_rank_one_b(alpha, r, rank_one_gram());
    const double den = 1.0 + b * r;
    if (std::abs(den) < 1e-12) throw DegenerateDenominator("1 + b r vanishes");
    const Complex beta = -b * l2_inner(apply_a(u), eta) / den;
    const PiecewiseExpPoly f = u + beta * eta;
    const PiecewiseExpPoly lhs = apply_a(u);
    const PiecewiseExpPoly rhs = apply_a(f) + (alpha * l2_inner(f, psi)) * psi;
    return l2_norm(lhs - rhs);
}

PiecewiseExpPoly nonlocal_q(int k) {
    if (k < 1) throw InvalidIndex("nonlocal q requires k >= 1");
    return fundamental_solution(2 * k);
}

PiecewiseExpPoly nonlocal_apply(const PiecewiseExpPoly& f, const Eigen::Matrix2cd& b, int k) {
    require_hermitian(b, "b");
    const PiecewiseExpPoly q = nonlocal_q(k);
    const double tol = jump_tolerance(f);
    const MeanJump v = mean_jump(f, 0);
    if (std::abs(v.jump) > tol) throw NotInDomain("nonlocal domain requires f_s = 0");
    const Complex s1 = v.mean;
    const Complex s2 = l2_inner(f, q);
    const Complex fps = mean_jump(f, 1).jump;
    const Complex cond = fps - b(0, 0) * s1 - b(0, 1) * s2;
    if (std::abs(cond) > kConstraintTol * std::max(1.0, std::abs(fps) + std::abs(s1) + std::abs(s2)))
        throw NotInDomain("nonlocal domain requires f'_s = b11 f(0) + b12 (f,q)");
    const PiecewiseExpPoly minus_f2 = -differentiate(differentiate(f));
    return minus_f2 + (b(1, 0) * s1 + b(1, 1) * s2) * q;
}

} // namespace zrp
