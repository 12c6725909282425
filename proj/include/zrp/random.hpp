#pragma once

#include <cstdint>
#include <optional>

#include "zrp/extensions.hpp"

namespace zrp {

/// SplitMix64. Deterministic across platforms (the standard distributions are
/// not), which the byte-stable selftest output relies on.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int uniform_int(int lo, int hi) { // inclusive
        return lo + int(next() % std::uint64_t(hi - lo + 1));
    }
    Complex complex_box() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }
    /// Dyadic rational in [-8, 8] on a 2^-10 grid; arithmetic on these is
    /// exact in doubles, which the exactness properties rely on.
    double dyadic() { return double(uniform_int(-8192, 8192)) * 0x1.0p-10; }

    /// Independent deterministic substream.
    Rng fork(std::uint64_t stream) const {
        Rng r(state_ ^ (0xa0761d6478bd642fULL * (stream + 1)));
        r.next();
        return r;
    }

private:
    std::uint64_t state_;
};

struct ExpPolyOptions {
    int max_terms_per_side = 3;
    int max_power = 2;
    double rate_min = 0.4;
    double rate_max = 2.5;
    bool complex_coeffs = true;
    bool complex_rates = false;
    bool dyadic_coeffs = false; // exact-arithmetic variant
};

PiecewiseExpPoly random_exppoly(Rng& rng, const ExpPolyOptions& opts = {});

/// Subtracts right-half-line corrections so that the derivative jumps of
/// orders 0..order vanish; the result is C^order across the origin.
PiecewiseExpPoly match_through(const PiecewiseExpPoly& f, int order);

PiecewiseExpPoly random_matched(Rng& rng, int order, const ExpPolyOptions& opts = {});

/// Random element of L_m for the Sobolev family: smooth part matched through
/// 2p+1 plus random defect-basis coefficients.
PiecewiseExpPoly random_scale_element(Rng& rng, int p);

Eigen::MatrixXcd random_hermitian(Rng& rng, int n, double scale = 1.0);
Eigen::MatrixXcd random_real_symmetric(Rng& rng, int n, double scale = 1.0);
Eigen::VectorXcd random_vector(Rng& rng, int n, double scale = 1.0);

/// A random element of the realization's domain (boundary constraints solved
/// within the exp-poly ansatz), or nullopt if the constraint system is
/// singular for this spec.
std::optional<PiecewiseExpPoly> random_domain_element(Rng& rng, const ExtensionSpec& spec);

} // namespace zrp
