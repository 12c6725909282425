#include "zrp/ascale.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>

namespace zrp {

namespace {

double binom_d(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

double double_factorial(int k) {
    if (k <= 0) return 1.0; // (-1)!! = 1
    double r = 1.0;
    for (; k > 0; k -= 2) r *= k;
    return r;
}

double factorial_d(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Solve -q'' + 2 mu q' + (c - mu^2) q = g (polynomials in t = |x|) for the
// particular solution of (-D^2 + c)[q e^{-mu t}] = g e^{-mu t} on a half-line.
// On rate resonance (mu^2 = c) the degree is bumped by one.
std::vector<Complex> particular_poly(const std::vector<Complex>& g, Complex mu, double c) {
    const int deg = static_cast<int>(g.size()) - 1;
    const Complex lam = c - mu * mu;
    if (std::abs(lam) > 1e-12 * std::max(1.0, std::abs(c))) {
        std::vector<Complex> q(deg + 1, Complex(0, 0));
        for (int n = deg; n >= 0; --n) {
            Complex v = g[n];
            if (n + 2 <= deg) v += double((n + 2) * (n + 1)) * q[n + 2];
            if (n + 1 <= deg) v -= 2.0 * mu * double(n + 1) * q[n + 1];
            q[n] = v / lam;
        }
        return q;
    }
    // resonant: -q'' + 2 mu q' = g, take the q_0 = 0 solution of degree deg+1
    std::vector<Complex> q(deg + 2, Complex(0, 0));
    for (int n = deg; n >= 0; --n) {
        Complex v = g[n];
        if (n + 2 <= deg + 1) v += double((n + 2) * (n + 1)) * q[n + 2];
        q[n + 1] = v / (2.0 * mu * double(n + 1));
    }
    return q;
}

std::vector<ExpTerm> particular_side(const std::vector<ExpTerm>& terms, double c) {
    std::map<std::pair<double, double>, std::vector<Complex>> by_rate;
    for (const auto& t : terms) {
        auto& poly = by_rate[{t.rate.real(), t.rate.imag()}];
        if (static_cast<int>(poly.size()) <= t.power) poly.resize(t.power + 1, Complex(0, 0));
        poly[t.power] += t.coeff;
    }
    std::vector<ExpTerm> out;
    for (const auto& [rate_key, poly] : by_rate) {
        const Complex mu(rate_key.first, rate_key.second);
        const auto q = particular_poly(poly, mu, c);
        for (int n = 0; n < static_cast<int>(q.size()); ++n)
            if (q[n] != Complex(0, 0)) out.push_back({q[n], n, mu});
    }
    return out;
}

// Decaying C^1-matched solution of (-D^2 + c) f = g, c = kappa^2 > 0.
PiecewiseExpPoly solve_shifted(const PiecewiseExpPoly& g, double c) {
    const double kappa = std::sqrt(c);
    PiecewiseExpPoly fp(particular_side(g.right(), c), particular_side(g.left(), c));
    // add a_r e^{-kappa x} (right), a_l e^{-kappa |x|} (left) to match f, f' at 0
    const Complex vr = trace(fp, Side::Right), vl = trace(fp, Side::Left);
    const Complex dr = trace(fp, Side::Right, 1), dl = trace(fp, Side::Left, 1);
    // value: vr + a_r = vl + a_l ; slope: dr - kappa a_r = dl + kappa a_l
    const Complex ar = ((vl - vr) + (dr - dl) / kappa) * 0.5;
    const Complex al = ((dr - dl) / kappa - (vl - vr)) * 0.5;
    PiecewiseExpPoly hom(
        {ExpTerm{ar, 0, Complex(kappa, 0)}},
        {ExpTerm{al, 0, Complex(kappa, 0)}});
    return fp + hom;
}

} // namespace

void DistributionalValue::trim() {
    while (!delta_coeffs.empty() && delta_coeffs.back() == Complex(0, 0)) delta_coeffs.pop_back();
}

DistributionalValue operator+(DistributionalValue a, const DistributionalValue& b) {
    a.regular += b.regular;
    if (a.delta_coeffs.size() < b.delta_coeffs.size()) a.delta_coeffs.resize(b.delta_coeffs.size());
    for (std::size_t k = 0; k < b.delta_coeffs.size(); ++k) a.delta_coeffs[k] += b.delta_coeffs[k];
    a.trim();
    return a;
}

DistributionalValue operator*(Complex c, DistributionalValue a) {
    a.regular *= c;
    for (auto& d : a.delta_coeffs) d *= c;
    a.trim();
    return a;
}

DistributionalValue distributional_apply_a(const PiecewiseExpPoly& f) {
    const Complex fs = trace(f, Side::Right) - trace(f, Side::Left);
    const Complex fps = trace(f, Side::Right, 1) - trace(f, Side::Left, 1);
    DistributionalValue v{apply_a(f), {-fps, -fs}};
    v.trim();
    return v;
}

DistributionalValue differentiate(const DistributionalValue& v) {
    // D(g + jump part) reproduces the jump deltas of g itself
    const Complex gs = trace(v.regular, Side::Right) - trace(v.regular, Side::Left);
    DistributionalValue out;
    out.regular = differentiate(v.regular);
    out.delta_coeffs.assign(v.delta_coeffs.size() + 1, Complex(0, 0));
    out.delta_coeffs[0] = gs;
    for (std::size_t k = 0; k < v.delta_coeffs.size(); ++k) out.delta_coeffs[k + 1] += v.delta_coeffs[k];
    out.trim();
    return out;
}

DistributionalValue apply_a(const DistributionalValue& v) {
    DistributionalValue out = distributional_apply_a(v.regular);
    if (out.delta_coeffs.size() < v.delta_coeffs.size() + 2)
        out.delta_coeffs.resize(v.delta_coeffs.size() + 2, Complex(0, 0));
    for (std::size_t k = 0; k < v.delta_coeffs.size(); ++k) {
        out.delta_coeffs[k] += v.delta_coeffs[k];      // +delta^{(k)}
        out.delta_coeffs[k + 2] -= v.delta_coeffs[k];  // -delta^{(k+2)}
    }
    out.trim();
    return out;
}

PiecewiseExpPoly fundamental_solution(int index) {
    if (index <= 0) throw InvalidIndex("fundamental solution index must be positive");
    if (index % 2 != 0) return differentiate(fundamental_solution(index + 1));
    const int j = index / 2;
    const double den = factorial_d(j - 1) * std::pow(2.0, j);
    std::vector<ExpTerm> terms;
    terms.reserve(j);
    for (int r = 0; r < j; ++r) {
        const double num = binom_d(2 * j - 2 - r, r) * double_factorial(2 * j - 3 - 2 * r);
        terms.push_back({Complex(num / den, 0.0), r, Complex(1.0, 0.0)});
    }
    return PiecewiseExpPoly::even(std::move(terms));
}

std::vector<PiecewiseExpPoly> defect_basis(int p) {
    if (p < 0 || p % 2 != 0) throw OddIndex("defect basis requires even nonnegative p");
    std::vector<PiecewiseExpPoly> basis;
    basis.reserve(p + 2);
    for (int j = p + 1; j >= p / 2 + 1; --j) {
        basis.push_back(fundamental_solution(2 * j));
        basis.push_back(fundamental_solution(2 * j - 1));
    }
    return basis;
}

PiecewiseExpPoly solve_a_inverse(const PiecewiseExpPoly& g) {
    return solve_shifted(g, 1.0);
}

PiecewiseExpPoly resolvent_apply(const PiecewiseExpPoly& g, double E) {
    if (E >= 1.0) throw WindowInvalid("resolvent_apply requires E < 1");
    return solve_shifted(g, 1.0 - E);
}

PiecewiseExpPoly ScaleElement::reconstruct() const {
    PiecewiseExpPoly f = smooth;
    const auto basis = defect_basis(p);
    for (std::size_t i = 0; i < singular_coeffs.size(); ++i) f += singular_coeffs[i] * basis[i];
    return f;
}

ScaleElement decompose(const PiecewiseExpPoly& f, int p) {
    if (p < 0 || p % 2 != 0) throw OddIndex("decompose requires even nonnegative p");
    if (!in_sobolev(f, p)) throw NotInScale("f has a derivative jump of order < p");

    const auto basis = defect_basis(p);
    const int n = p + 2;
    Eigen::MatrixXcd jumps(n, n);
    Eigen::VectorXcd rhs(n);
    for (int i = 0; i < n; ++i) {
        const int k = p + i; // derivative order
        for (int jb = 0; jb < n; ++jb)
            jumps(i, jb) = trace(basis[jb], Side::Right, k) - trace(basis[jb], Side::Left, k);
        rhs(i) = trace(f, Side::Right, k) - trace(f, Side::Left, k);
        // row equilibration: derivative magnitudes grow factorially with k
        const double s = jumps.row(i).cwiseAbs().maxCoeff();
        if (s > 0.0) {
            jumps.row(i) /= s;
            rhs(i) /= s;
        }
    }
    const Eigen::VectorXcd c = jumps.partialPivLu().solve(rhs);

    ScaleElement el;
    el.p = p;
    el.smooth = f;
    el.singular_coeffs.assign(c.data(), c.data() + n);
    for (int jb = 0; jb < n; ++jb) el.smooth -= el.singular_coeffs[jb] * basis[jb];

    // the basis jump map is triangular in the jump order and always invertible
    if (!is_matched(el.smooth, 2 * p + 1))
        throw Error("decompose: remainder failed to match through order 2p+1");
    return el;
}

} // namespace zrp
