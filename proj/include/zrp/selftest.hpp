#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zrp/exppoly.hpp"

namespace zrp {

struct SuiteResult {
    std::string name;
    int trials = 0;
    double max_residual = 0.0; // worst (usually relative) residual observed
    double tolerance = 0.0;    // pass when max_residual <= tolerance
    bool pass = false;
};

/// Runs every randomized property suite with substreams derived from `seed`.
/// Deterministic: equal seeds give bit-identical results.
std::vector<SuiteResult> run_selftest(std::uint64_t seed);

bool all_pass(const std::vector<SuiteResult>& results);

/// Independent oracle for the fundamental solutions: numerical Fourier
/// inversion (1/pi) int_0^inf cos(kx) (1+k^2)^{-j} dk.
double fourier_inverse_m(int j, double x);

/// Adaptive Simpson quadrature of f conj(g) over [-L, L], split at the
/// origin; the independent check of the closed-form l2_inner.
Complex adaptive_l2_inner(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, double L);

} // namespace zrp
