#pragma once

#include <complex>
#include <vector>

#include "zrp/errors.hpp"

namespace zrp {

using Complex = std::complex<double>;

/// One-sided trace at the origin: Right is the limit x -> +0, Left is x -> -0.
enum class Side { Right, Left };

/// A single term c * |x|^n * exp(-mu |x|) on one half-line. Re(mu) > 0 so that
/// every function in the class decays and lies in L2 together with all
/// derivatives.
struct ExpTerm {
    Complex coeff{0.0, 0.0};
    int power = 0;
    Complex rate{1.0, 0.0};
};

/// Exact closed-form function on R \ {0}: a finite sum of ExpTerms on each
/// half-line, stored in the |x| convention (left terms are functions of -x).
/// The term list is kept normalized: canonical order, terms with equal
/// (power, rate) merged, exact-zero coefficients dropped.
class PiecewiseExpPoly {
public:
    PiecewiseExpPoly() = default;
    PiecewiseExpPoly(std::vector<ExpTerm> right, std::vector<ExpTerm> left);

    /// Same terms on both half-lines (an even function of x).
    static PiecewiseExpPoly even(std::vector<ExpTerm> terms);
    /// Terms on the right, negated on the left (an odd function of x).
    static PiecewiseExpPoly odd(std::vector<ExpTerm> terms);
    static PiecewiseExpPoly right_only(std::vector<ExpTerm> terms);
    static PiecewiseExpPoly left_only(std::vector<ExpTerm> terms);

    const std::vector<ExpTerm>& right() const { return right_; }
    const std::vector<ExpTerm>& left() const { return left_; }

    bool is_zero() const { return right_.empty() && left_.empty(); }
    /// Largest coefficient magnitude over both sides (0 for the zero function).
    double coeff_scale() const;
    int max_power() const;

    /// Pointwise evaluation; x != 0.
    Complex operator()(double x) const;

    PiecewiseExpPoly& operator+=(const PiecewiseExpPoly& g);
    PiecewiseExpPoly& operator-=(const PiecewiseExpPoly& g);
    PiecewiseExpPoly& operator*=(Complex a);

    friend PiecewiseExpPoly operator+(PiecewiseExpPoly f, const PiecewiseExpPoly& g) { return f += g; }
    friend PiecewiseExpPoly operator-(PiecewiseExpPoly f, const PiecewiseExpPoly& g) { return f -= g; }
    friend PiecewiseExpPoly operator*(Complex a, PiecewiseExpPoly f) { return f *= a; }
    friend PiecewiseExpPoly operator*(PiecewiseExpPoly f, Complex a) { return f *= a; }
    friend PiecewiseExpPoly operator-(PiecewiseExpPoly f) { return f *= Complex(-1.0, 0.0); }

private:
    std::vector<ExpTerm> right_, left_;
    void normalize();
};

/// Exact term-wise derivative on each half-line (the |x| convention makes the
/// left-side sign handling explicit).
PiecewiseExpPoly differentiate(const PiecewiseExpPoly& f);

/// (-D^2 + 1) f computed pointwise on each half-line; no distributional part.
PiecewiseExpPoly apply_a(const PiecewiseExpPoly& f);

/// Quasi-derivative f^[tau]: f^[2k] = (-D^2+1)^k f, f^[2k+1] = D f^[2k].
PiecewiseExpPoly quasi_derivative(const PiecewiseExpPoly& f, int tau);

/// Exact L2 inner product over both half-lines, conjugate-linear in g.
Complex l2_inner(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g);
double l2_norm(const PiecewiseExpPoly& f);

/// One-sided limit of the k-th (plain) derivative at the origin.
Complex trace(const PiecewiseExpPoly& f, Side side, int k = 0);

struct MeanJump {
    Complex mean; // f_r^[tau] = (f^[tau](+0) + f^[tau](-0)) / 2
    Complex jump; // f_s^[tau] = f^[tau](+0) - f^[tau](-0)
};

/// Mean and jump of the tau-th quasi-derivative at the origin.
MeanJump mean_jump(const PiecewiseExpPoly& f, int tau);

/// Absolute tolerance used for "this jump is zero" decisions, scaled by the
/// magnitude of the function.
double jump_tolerance(const PiecewiseExpPoly& f);

/// True when the plain-derivative jumps of orders 0..order all vanish within
/// jump_tolerance, i.e. f is C^order across the origin inside this class.
bool is_matched(const PiecewiseExpPoly& f, int order);

/// W^p_2 membership within the class: derivatives 0..p-1 continuous at 0.
bool in_sobolev(const PiecewiseExpPoly& f, int p);

/// (f, g)_p = (A^{p/2} f, A^{p/2} g) computed as l2_inner(f^[p], g^[p]).
/// Throws NotInSobolevSpace when either argument has a jump of order < p,
/// OddIndex for odd p.
Complex sobolev_inner(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, int p);
double sobolev_norm(const PiecewiseExpPoly& f, int p);

/// max |coeff difference| between matched term lists; a convenient exactness
/// metric for tests.
double coeff_distance(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g);

} // namespace zrp
