#include "zrp/selftest.hpp"

#include <cmath>
#include <functional>

#include "zrp/ascale.hpp"
#include "zrp/bvs.hpp"
#include "zrp/extensions.hpp"
#include "zrp/oracle.hpp"
#include "zrp/random.hpp"
#include "zrp/spectral.hpp"

namespace zrp {

namespace {

// ---------- independent numeric oracles ----------------------------------

template <typename F>
Complex simpson(F&& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    Complex s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
    return s * (h / 3.0);
}

template <typename F>
Complex adaptive_simpson_impl(F&& f, double a, double b, Complex whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const Complex left = simpson(f, a, m, 8), right = simpson(f, m, b, 8);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) return left + right;
    return adaptive_simpson_impl(f, a, m, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_impl(f, m, b, right, 0.5 * tol, depth - 1);
}

template <typename F>
Complex adaptive_simpson(F&& f, double a, double b, double tol) {
    return adaptive_simpson_impl(f, a, b, simpson(f, a, b, 8), tol, 30);
}

} // namespace

Complex adaptive_l2_inner(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, double L) {
    auto integrand = [&](double x) {
        if (x == 0.0) x = 1e-300;
        return f(x) * std::conj(g(x));
    };
    return adaptive_simpson(integrand, -L, 0.0, 1e-11) + adaptive_simpson(integrand, 0.0, L, 1e-11);
}

double fourier_inverse_m(int j, double x) {
    if (x == 0.0) {
        // k = tan(theta) compactifies the integral to int_0^{pi/2} cos^{2j-2}
        auto f = [&](double th) -> Complex {
            const double c = std::cos(th);
            return Complex(std::pow(c, 2 * j - 2), 0.0);
        };
        return adaptive_simpson(f, 0.0, M_PI / 2.0, 1e-12).real() / M_PI;
    }
    // oscillatory branch: fine composite Simpson plus the integration-by-parts
    // boundary term for the truncated tail
    const double K = (j == 1) ? 2.0e4 : 400.0;
    const double step = (j == 1) ? 0.005 : 0.002;
    const int n = static_cast<int>(K / step);
    auto g = [&](double k) { return std::pow(1.0 + k * k, -double(j)); };
    auto f = [&](double k) -> Complex { return Complex(std::cos(k * x) * g(k), 0.0); };
    double integral = simpson(f, 0.0, K, n).real();
    integral -= std::sin(K * x) * g(K) / x; // first IBP boundary term
    return integral / M_PI;
}

namespace {

// ---------- suite helpers -------------------------------------------------

using SuiteFn = std::function<void(Rng&, SuiteResult&)>;

SuiteResult run_suite(const std::string& name, double tolerance, Rng rng, const SuiteFn& fn) {
    SuiteResult res;
    res.name = name;
    res.tolerance = tolerance;
    fn(rng, res);
    res.pass = res.max_residual <= res.tolerance;
    return res;
}

void track(SuiteResult& res, double residual) {
    res.max_residual = std::max(res.max_residual, residual);
    ++res.trials;
}

double rel(double err, double scale) { return err / std::max(1.0, scale); }

// ---------- exppoly suites -------------------------------------------------

void suite_closure(Rng& rng, SuiteResult& res) {
    for (int t = 0; t < 50; ++t) {
        const PiecewiseExpPoly f = random_exppoly(rng);
        const int tau = rng.uniform_int(0, 10);
        const PiecewiseExpPoly g = quasi_derivative(f, tau);
        bool ok = true;
        auto check_side = [&](const std::vector<ExpTerm>& terms) {
            for (std::size_t i = 0; i < terms.size(); ++i) {
                if (!(terms[i].rate.real() > 0.0) || terms[i].power < 0) ok = false;
                if (!std::isfinite(terms[i].coeff.real()) || !std::isfinite(terms[i].coeff.imag()))
                    ok = false;
                if (i > 0 && terms[i - 1].power == terms[i].power &&
                    std::abs(terms[i - 1].rate - terms[i].rate) <= 1e-14)
                    ok = false; // unmerged duplicate
            }
        };
        check_side(g.right());
        check_side(g.left());
        track(res, ok ? 0.0 : 1.0);
    }
}

void suite_linearity_exact(Rng& rng, SuiteResult& res) {
    ExpPolyOptions opts;
    opts.dyadic_coeffs = true;
    for (int t = 0; t < 50; ++t) {
        // dyadic coefficients and rates keep IEEE arithmetic exact
        std::vector<ExpTerm> rt, lt, rt2, lt2;
        auto dy_rate = [&]() { return Complex(0.5 * rng.uniform_int(1, 4), 0.0); };
        for (int i = 0; i < 3; ++i) {
            rt.push_back({Complex(rng.dyadic(), rng.dyadic()), rng.uniform_int(0, 2), dy_rate()});
            lt.push_back({Complex(rng.dyadic(), rng.dyadic()), rng.uniform_int(0, 2), dy_rate()});
            rt2.push_back({Complex(rng.dyadic(), rng.dyadic()), rng.uniform_int(0, 2), dy_rate()});
            lt2.push_back({Complex(rng.dyadic(), rng.dyadic()), rng.uniform_int(0, 2), dy_rate()});
        }
        const PiecewiseExpPoly f(rt, lt), g(rt2, lt2);
        const Complex a(rng.dyadic(), 0.0), b(rng.dyadic(), 0.0);
        const PiecewiseExpPoly lhs = differentiate(a * f + b * g);
        const PiecewiseExpPoly rhs = a * differentiate(f) + b * differentiate(g);
        track(res, coeff_distance(lhs, rhs));
    }
}

void suite_pairing_symmetry(Rng& rng, SuiteResult& res) {
    ExpPolyOptions opts;
    opts.complex_rates = true;
    for (int t = 0; t < 100; ++t) {
        const PiecewiseExpPoly f = random_exppoly(rng, opts);
        const PiecewiseExpPoly g = random_exppoly(rng, opts);
        const Complex a = l2_inner(f, g), b = std::conj(l2_inner(g, f));
        track(res, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
}

void suite_quadrature_agreement(Rng& rng, SuiteResult& res) {
    for (int t = 0; t < 50; ++t) {
        const PiecewiseExpPoly f = random_exppoly(rng);
        const PiecewiseExpPoly g = random_exppoly(rng);
        const Complex exact = l2_inner(f, g);
        const Complex quad = adaptive_l2_inner(f, g, 40.0);
        track(res, std::abs(exact - quad) / std::max(1.0, std::abs(exact)));
    }
}

void suite_trace_mean_jump(Rng& rng, SuiteResult& res) {
    ExpPolyOptions opts;
    opts.dyadic_coeffs = true;
    for (int t = 0; t < 50; ++t) {
        const PiecewiseExpPoly f = random_exppoly(rng, opts);
        const MeanJump mj = mean_jump(f, 0);
        track(res, std::abs(mj.mean + 0.5 * mj.jump - trace(f, Side::Right, 0)));
    }
}

// ---------- ascale suites ---------------------------------------------------

void suite_mladder(Rng&, SuiteResult& res) {
    for (int j = 2; j <= 8; ++j) {
        const PiecewiseExpPoly hi = fundamental_solution(2 * j);
        const PiecewiseExpPoly lo = fundamental_solution(2 * j - 2);
        track(res, coeff_distance(apply_a(hi), lo));
        // jump normalization: the [2j-1] quasi-derivative jumps by -1, lower
        // orders are continuous (the plain-derivative jump alternates as (-1)^j)
        track(res, std::abs(mean_jump(hi, 2 * j - 1).jump + 1.0));
        for (int k = 0; k <= 2 * j - 2; ++k)
            track(res, std::abs(trace(hi, Side::Right, k) - trace(hi, Side::Left, k)));
    }
    const DistributionalValue delta = distributional_apply_a(fundamental_solution(2));
    track(res, delta.regular.coeff_scale());
    track(res, std::abs(delta.delta_coeffs.at(0) - 1.0));
    track(res, delta.delta_coeffs.size() == 1 ? 0.0 : 1.0);
}

void suite_inverse_roundtrip(Rng& rng, SuiteResult& res) {
    ExpPolyOptions opts;
    for (int t = 0; t < 30; ++t) {
        // exercise the exact resonant path (rate 1) on every third trial and
        // keep random rates away from the ill-conditioned near-resonant strip
        if (t % 3 == 0) {
            opts.rate_min = 1.0;
            opts.rate_max = 1.0;
        } else if (t % 3 == 1) {
            opts.rate_min = 0.4;
            opts.rate_max = 0.85;
        } else {
            opts.rate_min = 1.15;
            opts.rate_max = 2.5;
        }
        const PiecewiseExpPoly g = random_exppoly(rng, opts);
        const PiecewiseExpPoly f = solve_a_inverse(g);
        // near-resonant rates amplify the particular solution; judge the
        // round trip against the intermediate magnitude
        track(res, rel(coeff_distance(apply_a(f), g),
                       std::max(g.coeff_scale(), f.coeff_scale())));
        track(res, is_matched(f, 1) ? 0.0 : 1.0);
        const PiecewiseExpPoly u = match_through(random_exppoly(rng, opts), 1);
        const PiecewiseExpPoly au = apply_a(u);
        track(res, rel(coeff_distance(solve_a_inverse(au), u),
                       std::max(u.coeff_scale(), au.coeff_scale())));
    }
}

void decompose_roundtrip_trials(Rng& rng, SuiteResult& res, std::initializer_list<int> ps) {
    for (int p : ps) {
        const auto basis = defect_basis(p);
        for (int t = 0; t < 10; ++t) {
            PiecewiseExpPoly f = random_matched(rng, 2 * p + 1);
            std::vector<Complex> coeffs;
            for (const auto& b : basis) {
                const Complex c = rng.complex_box();
                coeffs.push_back(c);
                f += c * b;
            }
            // the jump-matching system sees derivative values of orders up to
            // 2p+1; judge coefficient recovery against that magnitude
            double jump_scale = 1.0;
            for (int k = p; k <= 2 * p + 1; ++k)
                jump_scale = std::max(jump_scale,
                                      std::abs(trace(f, Side::Right, k) - trace(f, Side::Left, k)));
            const ScaleElement el = decompose(f, p);
            for (std::size_t i = 0; i < coeffs.size(); ++i)
                track(res, std::abs(el.singular_coeffs[i] - coeffs[i]) / jump_scale);
            track(res, rel(coeff_distance(el.reconstruct(), f), f.coeff_scale()));
        }
    }
}

void suite_decompose_roundtrip(Rng& rng, SuiteResult& res) {
    decompose_roundtrip_trials(rng, res, {0, 2});
}

// the p = 4 jump system couples derivative orders 4..9; its conditioning
// limits coefficient recovery to ~1e-11 in doubles
void suite_decompose_roundtrip_p4(Rng& rng, SuiteResult& res) {
    decompose_roundtrip_trials(rng, res, {4});
}

void suite_fourier(Rng&, SuiteResult& res) {
    for (int index : {2, 4, 6, 8}) {
        const PiecewiseExpPoly m = fundamental_solution(index);
        for (double x : {0.0, 0.5, 1.0, 2.0})
            track(res, std::abs(m(x == 0.0 ? 1e-300 : x).real() - fourier_inverse_m(index / 2, x)));
    }
}

// ---------- bvs suites ------------------------------------------------------

void suite_green_l2(Rng& rng, SuiteResult& res) {
    std::vector<Eigen::Matrix2cd> rs = {canonical_r_l2()};
    for (int i = 0; i < 5; ++i) rs.push_back(random_hermitian(rng, 2));
    for (int t = 0; t < 100; ++t) {
        const PiecewiseExpPoly f = random_exppoly(rng);
        const PiecewiseExpPoly g = random_exppoly(rng);
        for (const auto& R : rs)
            track(res, green_residual_l2(f, g, R) / green_scale_l2(f, g, R));
    }
}

void suite_green_powers(Rng& rng, SuiteResult& res) {
    for (int p : {1, 2, 3})
        for (int t = 0; t < 100; ++t) {
            const PiecewiseExpPoly f = random_exppoly(rng);
            const PiecewiseExpPoly g = random_exppoly(rng);
            track(res, green_residual_powers(f, g, p) / green_scale_powers(f, g, p));
        }
}

void suite_green_sobolev(Rng& rng, SuiteResult& res) {
    for (int p : {2, 4})
        for (int t = 0; t < 100; ++t) {
            const PiecewiseExpPoly f = random_scale_element(rng, p);
            const PiecewiseExpPoly g = random_scale_element(rng, p);
            track(res, green_residual_sobolev(f, g, p) / green_scale_sobolev(f, g, p));
        }
}

void suite_kernel_characterization(Rng& rng, SuiteResult& res) {
    for (int t = 0; t < 25; ++t) {
        // matched functions are exactly ker Gamma_1
        const PiecewiseExpPoly u = random_matched(rng, 1);
        track(res, boundary_data_l2(u).gamma1.norm() / std::max(1.0, u.coeff_scale()));
        PiecewiseExpPoly f = random_exppoly(rng);
        const Eigen::VectorXcd g1 = boundary_data_l2(f).gamma1;
        const bool matched = is_matched(f, 1);
        const bool zero = g1.norm() <= 1e-10 * std::max(1.0, f.coeff_scale());
        track(res, matched == zero ? 0.0 : 1.0);
    }
}

void suite_sobolev_kernel(Rng& rng, SuiteResult& res) {
    const int p = 2;
    for (int t = 0; t < 20; ++t) {
        // u in D(A_M): one-sided traces of orders 0..p+1 vanish on both sides
        PiecewiseExpPoly u = random_exppoly(rng);
        for (int k = 0; k <= p + 1; ++k) {
            const PiecewiseExpPoly br =
                PiecewiseExpPoly::right_only({ExpTerm{Complex(1, 0), k, Complex(1, 0)}});
            const PiecewiseExpPoly bl =
                PiecewiseExpPoly::left_only({ExpTerm{Complex(1, 0), k, Complex(1, 0)}});
            u -= (trace(u, Side::Right, k) / trace(br, Side::Right, k)) * br;
            u -= (trace(u, Side::Left, k) / trace(bl, Side::Left, k)) * bl;
        }
        const BoundaryData bd = quasi_boundary_data_sobolev(u, p);
        track(res, bd.gamma0.norm() / std::max(1.0, u.coeff_scale()));
    }
}

void suite_surjectivity(Rng& rng, SuiteResult& res) {
    // solve for preimages of random boundary data within the exp-poly class
    {
        std::vector<PiecewiseExpPoly> span = defect_basis(0);
        span.push_back(PiecewiseExpPoly::even({ExpTerm{Complex(1, 0), 0, Complex(2, 0)}}));
        span.push_back(PiecewiseExpPoly::odd({ExpTerm{Complex(1, 0), 0, Complex(2, 0)}}));
        Eigen::MatrixXcd M(4, 4);
        for (int j = 0; j < 4; ++j) {
            const BoundaryData bd = boundary_data_l2(span[j]);
            M.col(j).segment(0, 2) = bd.gamma0;
            M.col(j).segment(2, 2) = bd.gamma1;
        }
        for (int t = 0; t < 20; ++t) {
            const Eigen::VectorXcd target = random_vector(rng, 4);
            const Eigen::VectorXcd c = M.partialPivLu().solve(target);
            PiecewiseExpPoly f;
            for (int j = 0; j < 4; ++j) f += c(j) * span[j];
            const BoundaryData bd = boundary_data_l2(f);
            Eigen::VectorXcd got(4);
            got << bd.gamma0, bd.gamma1;
            track(res, (got - target).norm() / std::max(1.0, target.norm()));
        }
    }
    {
        const int p = 2;
        std::vector<PiecewiseExpPoly> span = defect_basis(p);
        for (double mu : {2.0, 3.0}) {
            span.push_back(PiecewiseExpPoly::even({ExpTerm{Complex(1, 0), 0, Complex(mu, 0)}}));
            span.push_back(PiecewiseExpPoly::odd({ExpTerm{Complex(1, 0), 0, Complex(mu, 0)}}));
        }
        const int n = static_cast<int>(span.size()); // 8 = 2(p+2)
        std::vector<PiecewiseExpPoly> matched;
        for (const auto& s : span) matched.push_back(match_through(s, p - 1));
        Eigen::MatrixXcd M(n, n);
        for (int j = 0; j < n; ++j) {
            const BoundaryData bd = quasi_boundary_data_sobolev(matched[j], p);
            M.col(j).segment(0, p + 2) = bd.gamma0;
            M.col(j).segment(p + 2, p + 2) = bd.gamma1;
        }
        for (int t = 0; t < 20; ++t) {
            const Eigen::VectorXcd target = random_vector(rng, n);
            const Eigen::VectorXcd c = M.partialPivLu().solve(target);
            PiecewiseExpPoly f;
            for (int j = 0; j < n; ++j) f += c(j) * matched[j];
            const BoundaryData bd = quasi_boundary_data_sobolev(f, p);
            Eigen::VectorXcd got(n);
            got << bd.gamma0, bd.gamma1;
            track(res, (got - target).norm() / std::max(1.0, target.norm()));
        }
    }
}

// ---------- extension suites -----------------------------------------------

void symmetry_trials(Rng& rng, SuiteResult& res, const std::function<ExtensionSpec(Rng&)>& make,
                     int trials) {
    for (int t = 0; t < trials; ++t) {
        const ExtensionSpec spec = make(rng);
        const auto f = random_domain_element(rng, spec);
        const auto g = random_domain_element(rng, spec);
        if (!f || !g) continue;
        const PiecewiseExpPoly af = apply_extension(*f, spec);
        const PiecewiseExpPoly ag = apply_extension(*g, spec);
        Complex ip1, ip2;
        if (spec.family == Family::Sobolev) {
            ip1 = sobolev_inner(af, *g, spec.p);
            ip2 = sobolev_inner(*f, ag, spec.p);
        } else {
            ip1 = l2_inner(af, *g);
            ip2 = l2_inner(*f, ag);
        }
        track(res, std::abs(ip1 - ip2) / std::max(1.0, std::abs(ip1) + std::abs(ip2)));
    }
}

void suite_symmetry_l2(Rng& rng, SuiteResult& res) {
    symmetry_trials(rng, res, [](Rng& r) {
        Eigen::Matrix2cd B = random_hermitian(r, 2, 2.0);
        Eigen::Matrix2cd R = (r.uniform() < 0.5) ? Eigen::Matrix2cd(canonical_r_l2())
                                                 : Eigen::Matrix2cd(random_hermitian(r, 2));
        return l2_spec(B, R);
    }, 100);
}

void suite_symmetry_sobolev(Rng& rng, SuiteResult& res) {
    symmetry_trials(rng, res, [](Rng& r) { return sobolev_spec(2, random_hermitian(r, 4, 2.0)); },
                    50);
}

void suite_symmetry_nonlocal(Rng& rng, SuiteResult& res) {
    symmetry_trials(rng, res, [](Rng& r) {
        const int k = r.uniform_int(1, 2);
        return nonlocal_spec(k, random_hermitian(r, 2, 2.0));
    }, 50);
}

void suite_symmetry_3d(Rng& rng, SuiteResult& res) {
    symmetry_trials(rng, res, [](Rng& r) {
        return point3d_spec(r.uniform(0.5, 2.0), r.uniform(-3.0, 3.0));
    }, 50);
}

void suite_symmetry_rank_one(Rng& rng, SuiteResult& res) {
    symmetry_trials(rng, res, [](Rng& r) {
        return rank_one_spec(r.uniform(-2.0, 2.0), r.uniform(-1.0, 1.5));
    }, 25);
}

// two routes to B Gamma_0^R f - Gamma_1 f: regularized_apply computes the
// boundary data directly; the check recomputes Gamma_1 from the jump-matching
// decomposition coefficients
void suite_regularized_l2(Rng& rng, SuiteResult& res) {
    for (int t = 0; t < 100; ++t) {
        const PiecewiseExpPoly f = random_exppoly(rng);
        const ExtensionSpec spec = l2_spec(random_hermitian(rng, 2, 2.0), random_hermitian(rng, 2));
        const DistributionalValue v = regularized_apply(f, spec);
        Eigen::VectorXcd got = Eigen::VectorXcd::Zero(2);
        for (std::size_t i = 0; i < v.delta_coeffs.size(); ++i) got(i) = v.delta_coeffs[i];

        const ScaleElement el = decompose(f, 0);
        const auto basis = defect_basis(0);
        Eigen::MatrixXcd J(2, 2);
        for (int j = 0; j < 2; ++j) J.col(j) = boundary_data_l2(basis[j]).gamma1;
        Eigen::VectorXcd coeffs(2);
        coeffs << el.singular_coeffs[0], el.singular_coeffs[1];
        const Eigen::VectorXcd gamma1 = J * coeffs;
        const Eigen::VectorXcd want = spec.B * boundary_data_l2(f, spec.R).gamma0 - gamma1;
        track(res, (got - want).norm() / std::max(1.0, want.norm()));
        // regular part is the pointwise action
        track(res, rel(coeff_distance(v.regular, apply_a(f)), f.coeff_scale()));
        // in-domain functions have vanishing singular part
        const auto fd = random_domain_element(rng, spec);
        if (fd) {
            const DistributionalValue vd = regularized_apply(*fd, spec);
            double n2 = 0;
            for (const auto& d : vd.delta_coeffs) n2 += std::norm(d);
            track(res, std::sqrt(n2) / std::max(1.0, fd->coeff_scale()));
        }
    }
}

void suite_regularized_sobolev(Rng& rng, SuiteResult& res) {
    const int p = 2;
    const auto basis = defect_basis(p);
    Eigen::MatrixXcd J(p + 2, p + 2);
    for (int j = 0; j < p + 2; ++j) J.col(j) = quasi_boundary_data_sobolev(basis[j], p).gamma1;
    for (int t = 0; t < 100; ++t) {
        const PiecewiseExpPoly f = random_scale_element(rng, p);
        const ExtensionSpec spec = sobolev_spec(p, random_hermitian(rng, p + 2, 2.0),
                                                random_hermitian(rng, p + 2, 0.5));
        const DistributionalValue v = regularized_apply(f, spec);
        Eigen::VectorXcd got = Eigen::VectorXcd::Zero(p + 2);
        for (std::size_t i = 0; i < v.delta_coeffs.size(); ++i) got(i) = v.delta_coeffs[i];

        const ScaleElement el = decompose(f, p);
        Eigen::VectorXcd coeffs(p + 2);
        for (int i = 0; i < p + 2; ++i) coeffs(i) = el.singular_coeffs[i];
        const Eigen::VectorXcd gamma1 = J * coeffs;
        const Eigen::VectorXcd want = spec.B * boundary_data(spec, f).gamma0 - gamma1;
        track(res, (got - want).norm() / std::max(1.0, want.norm()));
        track(res, rel(coeff_distance(v.regular, apply_a(el.smooth)), f.coeff_scale()));
    }
}

void suite_cayley(Rng& rng, SuiteResult& res) {
    for (int t = 0; t < 200; ++t) {
        const int n = rng.uniform_int(1, 3);
        const Eigen::MatrixXcd B = random_hermitian(rng, n, 2.0);
        const Eigen::MatrixXcd U = cayley_u_from_b(B);
        const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
        track(res, (U.adjoint() * U - I).cwiseAbs().maxCoeff());
        track(res, (cayley_b_from_u(U) - B).cwiseAbs().maxCoeff() /
                       std::max(1.0, B.cwiseAbs().maxCoeff()));

        const Complex i01(0, 1);
        auto u_residual = [&](const Eigen::VectorXcd& g0, const Eigen::VectorXcd& g1) {
            return ((I - U) * g0 - i01 * (I + U) * g1).norm();
        };
        // satisfied pair
        const Eigen::VectorXcd g0 = random_vector(rng, n);
        const Eigen::VectorXcd g1 = B * g0;
        const double scale = std::max(1.0, g0.norm() + g1.norm());
        track(res, u_residual(g0, g1) / scale);
        // violated pair: both forms must reject it
        Eigen::VectorXcd bad = g1;
        bad(rng.uniform_int(0, n - 1)) += Complex(1.0, 0.5);
        const bool b_viol = (B * g0 - bad).norm() > 1e-6 * scale;
        const bool u_viol = u_residual(g0, bad) > 1e-8 * scale;
        track(res, (b_viol && u_viol) ? 0.0 : 1.0);
    }
    // B = 0 <-> U = I exactly
    const Eigen::MatrixXcd U0 = cayley_u_from_b(Eigen::MatrixXcd::Zero(2, 2));
    track(res, (U0 - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff());
    bool threw = false;
    try {
        cayley_b_from_u(-Eigen::MatrixXcd::Identity(2, 2));
    } catch (const CayleySingular&) {
        threw = true;
    }
    track(res, threw ? 0.0 : 1.0);
}

void suite_admissible(Rng& rng, SuiteResult& res) {
    auto scalar = [](double a, double r, double b) {
        AdmissibilityData data;
        data.gram = Eigen::MatrixXcd::Constant(1, 1, Complex(a, 0));
        data.dim_intersection = 1;
        return admissible(Eigen::MatrixXcd::Constant(1, 1, Complex(b, 0)),
                          Eigen::MatrixXcd::Constant(1, 1, Complex(r, 0)), data);
    };
    track(res, scalar(2.0, 0.0, 0.5).admissible ? 1.0 : 0.0); // b(a-r)=1: not admissible
    track(res, scalar(2.0, 0.0, 1.0).admissible ? 0.0 : 1.0);
    // witness verification for non-admissible cases
    {
        const AdmissibilityResult r = scalar(2.0, 0.0, 0.5);
        const Complex eta = r.witness(0);
        track(res, std::abs(0.5 * 2.0 * eta - eta));
    }
    // R eta = P_N A eta makes every Hermitian B admissible
    for (int t = 0; t < 50; ++t) {
        const int n = rng.uniform_int(1, 3);
        AdmissibilityData data;
        data.gram = random_hermitian(rng, n, 2.0);
        data.dim_intersection = n;
        const auto out = admissible(random_hermitian(rng, n, 3.0), data.gram, data);
        track(res, out.admissible ? 0.0 : 1.0);
    }
    // constructed non-admissible matrix cases with verified witnesses
    for (int t = 0; t < 20; ++t) {
        const int n = rng.uniform_int(2, 3);
        AdmissibilityData data;
        data.gram = random_hermitian(rng, n, 2.0);
        data.dim_intersection = n;
        const Eigen::MatrixXcd R = random_hermitian(rng, n);
        Eigen::VectorXcd eta = random_vector(rng, n);
        eta.normalize();
        const Eigen::VectorXcd w = (data.gram - R) * eta;
        const Complex ip = eta.dot(w); // conj(eta)^T w
        if (std::abs(ip) < 1e-6) continue;
        // rotate eta so (eta, w) is real, then B = eta eta^H / (eta, w)
        const Complex phase = std::conj(ip) / std::abs(ip);
        eta *= phase;
        const Eigen::VectorXcd w2 = (data.gram - R) * eta;
        const Eigen::MatrixXcd B = (eta * eta.adjoint()) / eta.dot(w2).real();
        const auto out = admissible(B, R, data);
        track(res, out.admissible ? 1.0 : 0.0);
        if (!out.admissible) {
            const Eigen::VectorXcd v = out.witness;
            track(res, (B * data.gram * v - v - B * R * v).norm());
        }
    }
}

void suite_inverse_problem(Rng& rng, SuiteResult& res) {
    TripleSpec triple;
    triple.family = TripleFamily::L2PointInteraction;
    triple.R = canonical_r_l2();
    const RecoveredPotential rec = recover_potential(triple);
    // psi_1 = delta, psi_2 = delta': the coefficient matrix is the identity
    for (int j = 0; j < 2; ++j) {
        const auto& psi = rec.psi_basis[j];
        track(res, psi.regular.coeff_scale());
        for (int k = 0; k < 2; ++k) {
            const Complex want = (j == k) ? Complex(1, 0) : Complex(0, 0);
            const Complex got =
                k < static_cast<int>(psi.delta_coeffs.size()) ? psi.delta_coeffs[k] : Complex(0, 0);
            track(res, std::abs(got - want));
        }
    }
    // round trip: the recovered potential's realization B Gamma_0^R f = Gamma_1 f
    // has the same domain indicator as the vanishing of the singular part
    for (int t = 0; t < 20; ++t) {
        const ExtensionSpec spec = l2_spec(random_hermitian(rng, 2, 2.0));
        const auto fd = random_domain_element(rng, spec);
        if (fd) {
            const DistributionalValue v = regularized_apply(*fd, spec);
            double n2 = 0;
            for (const auto& d : v.delta_coeffs) n2 += std::norm(d);
            const bool zero = std::sqrt(n2) <= 1e-9 * std::max(1.0, fd->coeff_scale());
            track(res, (in_domain(*fd, spec) && zero) ? 0.0 : 1.0);
        }
        const PiecewiseExpPoly f = random_exppoly(rng);
        const DistributionalValue v = regularized_apply(f, spec);
        double n2 = 0;
        for (const auto& d : v.delta_coeffs) n2 += std::norm(d);
        const bool zero = std::sqrt(n2) <= 1e-9 * std::max(1.0, f.coeff_scale());
        track(res, in_domain(f, spec) == zero ? 0.0 : 1.0);
    }
}

void suite_rank_one(Rng& rng, SuiteResult& res) {
    const double gram = rank_one_gram();
    track(res, std::abs(gram - 1.2));
    for (double alpha : {0.5, -0.5, 2.0, -2.0}) {
        track(res, std::abs(regular_rank_one_b(alpha, gram, gram) - alpha));
        for (double r : {0.0, gram}) {
            for (int t = 0; t < 20; ++t) {
                const PiecewiseExpPoly u = random_matched(rng, 1);
                track(res, verify_regular_identity(u, alpha, r));
            }
        }
    }
    track(res, std::abs(regular_rank_one_b(0.0, 0.3, gram)));
}

// ---------- spectral suites --------------------------------------------------

void suite_delta_family(Rng&, SuiteResult& res) {
    ScanParams scan;
    scan.e_min = -5.0;
    scan.e_max = 0.999;
    scan.step = 0.005;
    double prev = 2.0;
    for (double beta : {-0.5, -1.0, -2.0, -4.0}) {
        Eigen::Matrix2cd B = Eigen::Matrix2cd::Zero();
        B(0, 0) = beta;
        const SpectrumReport rep = bound_states_l2(l2_spec(B), scan);
        if (rep.eigenvalues.size() != 1) {
            track(res, 1.0);
            continue;
        }
        const double want = 1.0 - beta * beta / 4.0;
        track(res, std::abs(rep.eigenvalues[0] - want));
        track(res, rep.residuals[0]);
        // even bound state: kappa = -beta/2
        track(res, rep.eigenvalues[0] < prev ? 0.0 : 1.0); // decreasing in |beta|
        prev = rep.eigenvalues[0];
    }
    for (double gamma : {0.5, 1.0, 2.0, 4.0}) {
        Eigen::Matrix2cd B = Eigen::Matrix2cd::Zero();
        B(1, 1) = gamma;
        const SpectrumReport rep = bound_states_l2(l2_spec(B), scan);
        const double kappa = 2.0 / gamma;
        const double want = 1.0 - kappa * kappa;
        if (want < scan.e_min || want > scan.e_max) continue;
        if (rep.eigenvalues.size() != 1) {
            track(res, 1.0);
            continue;
        }
        track(res, std::abs(rep.eigenvalues[0] - want));
        track(res, rep.residuals[0]);
    }
    // free operator: no bound states
    const SpectrumReport free_rep = bound_states_l2(l2_spec(Eigen::Matrix2cd::Zero()), scan);
    track(res, free_rep.eigenvalues.empty() ? 0.0 : 1.0);
}

void suite_oracle_delta(Rng&, SuiteResult& res) {
    for (double beta : {-0.5, -1.0, -2.0, -4.0}) {
        Eigen::Matrix2cd B = Eigen::Matrix2cd::Zero();
        B(0, 0) = beta;
        const double want = 1.0 - beta * beta / 4.0;
        const GridOperator gop = discretize(l2_spec(B), 20.0, 0.01);
        const double got = lowest_eigenvalues(gop, 1)[0];
        track(res, std::abs(got - want) / 1e-3); // normalized to the 1e-3 budget
    }
}

void suite_3d(Rng&, SuiteResult& res) {
    const double pairs[][2] = {{1.0, 2.0}, {1.0, -1.0}, {2.0, 1.0}};
    for (const auto& mb : pairs) {
        const double mu = mb[0], b = mb[1];
        const SpectrumReport rep = bound_state_3d(b, mu);
        const double kappa = mu - 1.0 / b;
        if (kappa > 0.0) {
            const double want = mu * mu - kappa * kappa;
            if (rep.eigenvalues.size() != 1) {
                track(res, 1.0);
                continue;
            }
            track(res, std::abs(rep.eigenvalues[0] - want));
            track(res, rep.residuals[0]);
        } else {
            track(res, rep.eigenvalues.empty() ? 0.0 : 1.0);
        }
    }
    track(res, bound_state_3d(1.0, 1.0).eigenvalues.empty() ? 0.0 : 1.0); // threshold case
}

void suite_sobolev_spectrum(Rng&, SuiteResult& res) {
    const int p = 2;
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(p + 2, p + 2);
    B(0, 0) = -2.0;
    ScanParams scan;
    scan.e_min = -4.0;
    scan.e_max = 0.99;
    scan.step = 0.01;
    const SpectrumReport rep = bound_states_sobolev(sobolev_spec(p, B), scan);
    track(res, rep.eigenvalues.empty() ? 1.0 : 0.0);
    for (double r : rep.residuals) track(res, r / 1e-8);
    // doubling the scan resolution leaves the certified root set unchanged
    ScanParams fine = scan;
    fine.step = scan.step / 2.0;
    const SpectrumReport rep2 = bound_states_sobolev(sobolev_spec(p, B), fine);
    track(res, rep.eigenvalues.size() == rep2.eigenvalues.size() ? 0.0 : 1.0);
    for (std::size_t i = 0; i < std::min(rep.eigenvalues.size(), rep2.eigenvalues.size()); ++i)
        track(res, std::abs(rep.eigenvalues[i] - rep2.eigenvalues[i]) / 1e-9);
    // B = 0: the free operator in W^p_2 has no bound states
    const SpectrumReport free_rep =
        bound_states_sobolev(sobolev_spec(p, Eigen::MatrixXcd::Zero(p + 2, p + 2)), scan);
    track(res, free_rep.eigenvalues.empty() ? 0.0 : 1.0);
}

void suite_nonlocal_spectrum(Rng&, SuiteResult& res) {
    Eigen::Matrix2cd b;
    b << -3.0, 0.5, 0.5, -1.0;
    ScanParams scan;
    scan.e_min = -6.0;
    scan.e_max = 0.9;
    scan.step = 0.01;
    const ExtensionSpec spec = nonlocal_spec(1, b);
    const SpectrumReport rep = bound_states_nonlocal(spec, scan);
    track(res, rep.eigenvalues.empty() ? 1.0 : 0.0);
    for (double r : rep.residuals) track(res, r / 1e-8);
    // finite-difference cross-check at moderate resolution
    if (!rep.eigenvalues.empty()) {
        const GridOperator gop = discretize(spec, 20.0, 0.02);
        const double got = lowest_eigenvalues(gop, 1)[0];
        track(res, std::abs(got - rep.eigenvalues[0]) / 5e-3);
    }
}

// ---------- oracle suites ----------------------------------------------------

void suite_oracle_basics(Rng&, SuiteResult& res) {
    // free Dirichlet box: lowest eigenvalue 1 + (pi/40)^2
    {
        const GridOperator gop = discretize(l2_spec(Eigen::Matrix2cd::Zero()), 20.0, 0.01);
        const double want = 1.0 + std::pow(M_PI / 40.0, 2);
        track(res, std::abs(lowest_eigenvalues(gop, 1)[0] - want) / 1e-4);
        track(res, lowest_eigenvalues(gop, 0).empty() ? 0.0 : 1.0);
    }
    // second-order convergence for the delta well
    {
        Eigen::Matrix2cd B = Eigen::Matrix2cd::Zero();
        B(0, 0) = -2.0;
        double errs[3];
        int i = 0;
        for (double h : {0.04, 0.02, 0.01}) {
            const GridOperator gop = discretize(l2_spec(B), 20.0, h);
            errs[i++] = std::abs(lowest_eigenvalues(gop, 1)[0] - 0.0);
        }
        for (int j = 0; j + 1 < 3; ++j) {
            const double ratio = errs[j] / errs[j + 1];
            track(res, (ratio > 3.0 && ratio < 5.5) ? 0.0 : 1.0);
        }
        // truncation: L = 20 -> 30 changes the bound state at the e^{-kappa 15} scale
        const GridOperator g20 = discretize(l2_spec(B), 20.0, 0.02);
        const GridOperator g30 = discretize(l2_spec(B), 30.0, 0.02);
        track(res,
              std::abs(lowest_eigenvalues(g20, 1)[0] - lowest_eigenvalues(g30, 1)[0]) / 1e-6);
        // one bound state: second eigenvalue at the continuum edge
        track(res, lowest_eigenvalues(g20, 2)[1] >= 1.0 - 1e-6 ? 0.0 : 1.0);
    }
    // nonlocal hermiticity (complex coupling)
    {
        Eigen::Matrix2cd b;
        b << 1.0, Complex(0.25, 0.5), Complex(0.25, -0.5), -0.5;
        const GridOperator gop = discretize(nonlocal_spec(1, b), 10.0, 0.05);
        track(res, gop.hermiticity_defect() / 1e-12);
        const auto evs = lowest_eigenvalues(gop, 3);
        track(res, (evs.size() == 3 && evs[0] <= evs[1] && evs[1] <= evs[2]) ? 0.0 : 1.0);
    }
    // trapezoid quadrature examples
    {
        const PiecewiseExpPoly e1 = PiecewiseExpPoly::even({ExpTerm{Complex(1, 0), 0, Complex(1, 0)}});
        track(res, std::abs(quadrature_inner(e1, e1, 40.0, 0.005) - Complex(1, 0)) / 1e-5);
        const PiecewiseExpPoly m2 = fundamental_solution(2), m4 = fundamental_solution(4);
        track(res, std::abs(quadrature_inner(m2, m4, 40.0, 0.005) - Complex(3.0 / 16.0, 0)) / 1e-6);
        track(res, std::abs(quadrature_inner(m2, PiecewiseExpPoly(), 40.0, 0.005)));
    }
}

} // namespace

std::vector<SuiteResult> run_selftest(std::uint64_t seed) {
    const Rng base(seed);
    std::vector<SuiteResult> out;
    std::uint64_t stream = 0;
    auto add = [&](const std::string& name, double tol, const SuiteFn& fn) {
        out.push_back(run_suite(name, tol, base.fork(stream++), fn));
    };

    add("exppoly.closure", 0.0, suite_closure);
    add("exppoly.linearity_exact", 0.0, suite_linearity_exact);
    add("exppoly.pairing_symmetry", 1e-12, suite_pairing_symmetry);
    add("exppoly.quadrature_agreement", 1e-8, suite_quadrature_agreement);
    add("exppoly.trace_mean_jump", 0.0, suite_trace_mean_jump);
    add("ascale.m_ladder", 1e-13, suite_mladder);
    add("ascale.inverse_roundtrip", 1e-12, suite_inverse_roundtrip);
    add("ascale.decompose_roundtrip", 1e-12, suite_decompose_roundtrip);
    add("ascale.decompose_roundtrip_p4", 1e-9, suite_decompose_roundtrip_p4);
    add("ascale.fourier_crosscheck", 1e-6, suite_fourier);
    add("bvs.green_l2", 1e-9, suite_green_l2);
    add("bvs.green_powers", 1e-9, suite_green_powers);
    add("bvs.green_sobolev", 1e-9, suite_green_sobolev);
    add("bvs.kernel_characterization", 1e-10, suite_kernel_characterization);
    add("bvs.sobolev_kernel", 1e-10, suite_sobolev_kernel);
    add("bvs.surjectivity", 1e-8, suite_surjectivity);
    add("extensions.symmetry_l2", 1e-9, suite_symmetry_l2);
    add("extensions.symmetry_sobolev", 1e-9, suite_symmetry_sobolev);
    add("extensions.symmetry_nonlocal", 1e-9, suite_symmetry_nonlocal);
    add("extensions.symmetry_3d", 1e-9, suite_symmetry_3d);
    add("extensions.symmetry_rank_one", 1e-9, suite_symmetry_rank_one);
    add("extensions.regularized_identity_l2", 1e-12, suite_regularized_l2);
    add("extensions.regularized_identity_sobolev", 1e-12, suite_regularized_sobolev);
    add("extensions.cayley_equivalence", 1e-9, suite_cayley);
    add("extensions.admissibility", 1e-10, suite_admissible);
    add("extensions.inverse_problem", 1e-9, suite_inverse_problem);
    add("extensions.rank_one_correspondence", 1e-12, suite_rank_one);
    add("spectral.delta_families", 1e-10, suite_delta_family);
    add("spectral.oracle_delta_agreement", 1.0, suite_oracle_delta);
    add("spectral.point3d", 1e-12, suite_3d);
    add("spectral.sobolev_p2", 1.0, suite_sobolev_spectrum);
    add("spectral.nonlocal", 1.0, suite_nonlocal_spectrum);
    add("oracle.basics", 1.0, suite_oracle_basics);
    return out;
}

bool all_pass(const std::vector<SuiteResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace zrp
