#include "zrp/random.hpp"

#include <cmath>

namespace zrp {

namespace {

// defect functions whose boundary data is solved against the constraints
std::vector<PiecewiseExpPoly> family_defect_set(const ExtensionSpec& spec) {
    switch (spec.family) {
        case Family::L2PointInteraction:
            return defect_basis(0);
        case Family::Sobolev:
            return defect_basis(spec.p);
        case Family::Nonlocal:
            return {fundamental_solution(2), fundamental_solution(2 * spec.k + 2)};
        default:
            throw UnsupportedFamily("no defect set for this family");
    }
}

int family_smooth_order(const ExtensionSpec& spec) {
    switch (spec.family) {
        case Family::L2PointInteraction: return 3;
        case Family::Sobolev: return 2 * spec.p + 1;
        case Family::Nonlocal: return 2 * spec.k + 1;
        default: return 1;
    }
}

} // namespace

PiecewiseExpPoly random_exppoly(Rng& rng, const ExpPolyOptions& opts) {
    std::vector<ExpTerm> r, l;
    auto coeff = [&]() -> Complex {
        if (opts.dyadic_coeffs) return {rng.dyadic(), opts.complex_coeffs ? rng.dyadic() : 0.0};
        return opts.complex_coeffs ? rng.complex_box() : Complex(rng.uniform(-1, 1), 0.0);
    };
    auto rate = [&]() -> Complex {
        const double re = rng.uniform(opts.rate_min, opts.rate_max);
        return {re, opts.complex_rates ? rng.uniform(-0.5, 0.5) : 0.0};
    };
    const int nr = rng.uniform_int(1, opts.max_terms_per_side);
    const int nl = rng.uniform_int(1, opts.max_terms_per_side);
    for (int i = 0; i < nr; ++i) r.push_back({coeff(), rng.uniform_int(0, opts.max_power), rate()});
    for (int i = 0; i < nl; ++i) l.push_back({coeff(), rng.uniform_int(0, opts.max_power), rate()});
    return PiecewiseExpPoly(std::move(r), std::move(l));
}

PiecewiseExpPoly match_through(const PiecewiseExpPoly& f, int order) {
    PiecewiseExpPoly g = f;
    for (int k = 0; k <= order; ++k) {
        const Complex jump = trace(g, Side::Right, k) - trace(g, Side::Left, k);
        if (jump == Complex(0, 0)) continue;
        // b = x^k e^{-x} on the right half-line only; its lower-order traces
        // vanish, so the correction is triangular in k
        const PiecewiseExpPoly b =
            PiecewiseExpPoly::right_only({ExpTerm{Complex(1, 0), k, Complex(1, 0)}});
        const Complex bj = trace(b, Side::Right, k);
        g -= (jump / bj) * b;
    }
    return g;
}

PiecewiseExpPoly random_matched(Rng& rng, int order, const ExpPolyOptions& opts) {
    return match_through(random_exppoly(rng, opts), order);
}

PiecewiseExpPoly random_scale_element(Rng& rng, int p) {
    PiecewiseExpPoly f = random_matched(rng, 2 * p + 1);
    const auto basis = defect_basis(p);
    for (const auto& b : basis) f += rng.complex_box() * b;
    return f;
}

Eigen::MatrixXcd random_hermitian(Rng& rng, int n, double scale) {
    Eigen::MatrixXcd X(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) X(i, j) = scale * rng.complex_box();
    return 0.5 * (X + X.adjoint().eval());
}

Eigen::MatrixXcd random_real_symmetric(Rng& rng, int n, double scale) {
    Eigen::MatrixXcd X(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) X(i, j) = Complex(scale * rng.uniform(-1, 1), 0.0);
    return 0.5 * (X + X.transpose().eval());
}

Eigen::VectorXcd random_vector(Rng& rng, int n, double scale) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = scale * rng.complex_box();
    return v;
}

std::optional<PiecewiseExpPoly> random_domain_element(Rng& rng, const ExtensionSpec& spec) {
    if (spec.family == Family::Point3D) {
        // radial profile g = gu + c e^{-mu r}, gu(0) = 0, c = b gu'(0)
        std::vector<ExpTerm> terms;
        const int nt = rng.uniform_int(1, 3);
        for (int i = 0; i < nt; ++i)
            terms.push_back({rng.complex_box(), rng.uniform_int(0, 2), Complex(rng.uniform(0.4, 2.5), 0)});
        PiecewiseExpPoly gu = PiecewiseExpPoly::right_only(std::move(terms));
        const Complex v0 = trace(gu, Side::Right);
        gu -= PiecewiseExpPoly::right_only({ExpTerm{v0, 0, Complex(1.5, 0)}});
        const Complex c = spec.B(0, 0) * trace(gu, Side::Right, 1);
        return gu + PiecewiseExpPoly::right_only({ExpTerm{c, 0, Complex(spec.mu, 0)}});
    }
    if (spec.family == Family::RankOneRegular) {
        const PiecewiseExpPoly u = random_matched(rng, 5);
        const PiecewiseExpPoly m4 = fundamental_solution(4);
        const PiecewiseExpPoly eta = Complex(1.0 / l2_norm(m4), 0.0) * m4;
        const double b = spec.B(0, 0).real();
        const double den = 1.0 + b * spec.r;
        if (std::abs(den) < 1e-10) return std::nullopt;
        const Complex beta = -b * l2_inner(apply_a(u), eta) / den;
        return u + beta * eta;
    }

    const auto defect = family_defect_set(spec);
    const int n = static_cast<int>(defect.size());
    const PiecewiseExpPoly w = random_matched(rng, family_smooth_order(spec));
    const BoundaryData bw = boundary_data(spec, w);
    Eigen::MatrixXcd G0(bw.gamma0.size(), n), G1(bw.gamma1.size(), n);
    for (int j = 0; j < n; ++j) {
        const BoundaryData bj = boundary_data(spec, defect[j]);
        G0.col(j) = bj.gamma0;
        G1.col(j) = bj.gamma1;
    }
    const Eigen::MatrixXcd A = spec.B * G0 - G1;
    const Eigen::VectorXcd rhs = bw.gamma1 - spec.B * bw.gamma0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(svd.singularValues().size() - 1) <
        1e-10 * std::max(1.0, svd.singularValues()(0)))
        return std::nullopt;
    const Eigen::VectorXcd t = svd.solve(rhs);
    PiecewiseExpPoly f = w;
    for (int j = 0; j < n; ++j) f += t(j) * defect[j];
    if (!in_domain(f, spec)) return std::nullopt;
    return f;
}

} // namespace zrp
