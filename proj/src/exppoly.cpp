#include "zrp/exppoly.hpp"

#include <algorithm>
#include <cmath>

namespace zrp {

namespace {

constexpr double kRateMergeTol = 1e-14;

double factorial_d(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

void validate(const std::vector<ExpTerm>& terms) {
    for (const auto& t : terms) {
        if (t.power < 0) throw Error("ExpTerm power must be nonnegative");
        if (!(t.rate.real() > 0.0)) throw Error("ExpTerm rate must have positive real part");
    }
}

void normalize_side(std::vector<ExpTerm>& terms) {
    std::sort(terms.begin(), terms.end(), [](const ExpTerm& a, const ExpTerm& b) {
        if (a.power != b.power) return a.power < b.power;
        if (a.rate.real() != b.rate.real()) return a.rate.real() < b.rate.real();
        return a.rate.imag() < b.rate.imag();
    });
    std::vector<ExpTerm> out;
    for (const auto& t : terms) {
        if (!out.empty() && out.back().power == t.power &&
            std::abs(out.back().rate - t.rate) <= kRateMergeTol) {
            out.back().coeff += t.coeff;
        } else {
            out.push_back(t);
        }
    }
    std::erase_if(out, [](const ExpTerm& t) { return t.coeff == Complex(0.0, 0.0); });
    terms = std::move(out);
}

Complex eval_side(const std::vector<ExpTerm>& terms, double ax) {
    Complex v{0.0, 0.0};
    for (const auto& t : terms) v += t.coeff * std::pow(ax, t.power) * std::exp(-t.rate * ax);
    return v;
}

} // namespace

PiecewiseExpPoly::PiecewiseExpPoly(std::vector<ExpTerm> right, std::vector<ExpTerm> left)
    : right_(std::move(right)), left_(std::move(left)) {
    validate(right_);
    validate(left_);
    normalize();
}

PiecewiseExpPoly PiecewiseExpPoly::even(std::vector<ExpTerm> terms) {
    auto copy = terms;
    return PiecewiseExpPoly(std::move(terms), std::move(copy));
}

PiecewiseExpPoly PiecewiseExpPoly::odd(std::vector<ExpTerm> terms) {
    auto neg = terms;
    for (auto& t : neg) t.coeff = -t.coeff;
    return PiecewiseExpPoly(std::move(terms), std::move(neg));
}

PiecewiseExpPoly PiecewiseExpPoly::right_only(std::vector<ExpTerm> terms) {
    return PiecewiseExpPoly(std::move(terms), {});
}

PiecewiseExpPoly PiecewiseExpPoly::left_only(std::vector<ExpTerm> terms) {
    return PiecewiseExpPoly({}, std::move(terms));
}

void PiecewiseExpPoly::normalize() {
    normalize_side(right_);
    normalize_side(left_);
}

double PiecewiseExpPoly::coeff_scale() const {
    double s = 0.0;
    for (const auto& t : right_) s = std::max(s, std::abs(t.coeff));
    for (const auto& t : left_) s = std::max(s, std::abs(t.coeff));
    return s;
}

int PiecewiseExpPoly::max_power() const {
    int n = 0;
    for (const auto& t : right_) n = std::max(n, t.power);
    for (const auto& t : left_) n = std::max(n, t.power);
    return n;
}

Complex PiecewiseExpPoly::operator()(double x) const {
    return x > 0.0 ? eval_side(right_, x) : eval_side(left_, -x);
}

PiecewiseExpPoly& PiecewiseExpPoly::operator+=(const PiecewiseExpPoly& g) {
    right_.insert(right_.end(), g.right_.begin(), g.right_.end());
    left_.insert(left_.end(), g.left_.begin(), g.left_.end());
    normalize();
    return *this;
}

PiecewiseExpPoly& PiecewiseExpPoly::operator-=(const PiecewiseExpPoly& g) {
    for (const auto& t : g.right_) right_.push_back({-t.coeff, t.power, t.rate});
    for (const auto& t : g.left_) left_.push_back({-t.coeff, t.power, t.rate});
    normalize();
    return *this;
}

PiecewiseExpPoly& PiecewiseExpPoly::operator*=(Complex a) {
    for (auto& t : right_) t.coeff *= a;
    for (auto& t : left_) t.coeff *= a;
    normalize();
    return *this;
}

PiecewiseExpPoly differentiate(const PiecewiseExpPoly& f) {
    std::vector<ExpTerm> r, l;
    r.reserve(2 * f.right().size());
    l.reserve(2 * f.left().size());
    for (const auto& t : f.right()) {
        if (t.power > 0) r.push_back({t.coeff * double(t.power), t.power - 1, t.rate});
        r.push_back({-t.coeff * t.rate, t.power, t.rate});
    }
    // left side stores functions of |x| = -x, so d/dx picks up a sign
    for (const auto& t : f.left()) {
        if (t.power > 0) l.push_back({-t.coeff * double(t.power), t.power - 1, t.rate});
        l.push_back({t.coeff * t.rate, t.power, t.rate});
    }
    return PiecewiseExpPoly(std::move(r), std::move(l));
}

PiecewiseExpPoly apply_a(const PiecewiseExpPoly& f) {
    return f - differentiate(differentiate(f));
}

PiecewiseExpPoly quasi_derivative(const PiecewiseExpPoly& f, int tau) {
    if (tau < 0) throw InvalidIndex("quasi-derivative order must be nonnegative");
    PiecewiseExpPoly g = f;
    for (int k = 0; k < tau / 2; ++k) g = apply_a(g);
    if (tau % 2 != 0) g = differentiate(g);
    return g;
}

Complex l2_inner(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g) {
    // int_0^inf x^n e^{-mu x} dx = n! / mu^{n+1}, applied on each half-line
    auto side = [](const std::vector<ExpTerm>& a, const std::vector<ExpTerm>& b) {
        Complex s{0.0, 0.0};
        for (const auto& ta : a)
            for (const auto& tb : b) {
                const Complex mu = ta.rate + std::conj(tb.rate);
                const int n = ta.power + tb.power;
                s += ta.coeff * std::conj(tb.coeff) * factorial_d(n) / std::pow(mu, n + 1);
            }
        return s;
    };
    return side(f.right(), g.right()) + side(f.left(), g.left());
}

double l2_norm(const PiecewiseExpPoly& f) {
    return std::sqrt(std::max(0.0, l2_inner(f, f).real()));
}

Complex trace(const PiecewiseExpPoly& f, Side side, int k) {
    PiecewiseExpPoly g = f;
    for (int i = 0; i < k; ++i) g = differentiate(g);
    const auto& terms = (side == Side::Right) ? g.right() : g.left();
    Complex v{0.0, 0.0};
    for (const auto& t : terms)
        if (t.power == 0) v += t.coeff;
    return v;
}

MeanJump mean_jump(const PiecewiseExpPoly& f, int tau) {
    PiecewiseExpPoly g = quasi_derivative(f, tau);
    const Complex r = trace(g, Side::Right);
    const Complex l = trace(g, Side::Left);
    return {0.5 * (r + l), r - l};
}

double jump_tolerance(const PiecewiseExpPoly& f) {
    return 1e-10 * std::max(1.0, f.coeff_scale());
}

bool is_matched(const PiecewiseExpPoly& f, int order) {
    const double tol = jump_tolerance(f);
    PiecewiseExpPoly g = f;
    for (int k = 0; k <= order; ++k) {
        if (std::abs(trace(g, Side::Right) - trace(g, Side::Left)) > tol) return false;
        g = differentiate(g);
    }
    return true;
}

bool in_sobolev(const PiecewiseExpPoly& f, int p) {
    return p == 0 || is_matched(f, p - 1);
}

Complex sobolev_inner(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, int p) {
    if (p < 0 || p % 2 != 0) throw OddIndex("sobolev_inner requires even nonnegative p");
    if (p == 0) return l2_inner(f, g);
    if (!in_sobolev(f, p) || !in_sobolev(g, p))
        throw NotInSobolevSpace("argument has a derivative jump of order < p at 0");
    return l2_inner(quasi_derivative(f, p), quasi_derivative(g, p));
}

double sobolev_norm(const PiecewiseExpPoly& f, int p) {
    return std::sqrt(std::max(0.0, sobolev_inner(f, f, p).real()));
}

double coeff_distance(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g) {
    const PiecewiseExpPoly d = f - g;
    return d.coeff_scale();
}

} // namespace zrp
