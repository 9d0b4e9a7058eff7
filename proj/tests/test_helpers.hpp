// Shared assertions and independent closed-form oracles for the test suites.
// Nothing here calls into the library's numerical routines.

#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "metricqm/linalg.hpp"

namespace metricqm::testing {

inline ::testing::AssertionResult MatrixNear(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    if (a.dim() != b.dim()) return ::testing::AssertionFailure() << "dims " << a.dim() << " vs " << b.dim();
    double worst = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c) worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
    if (worst <= tol) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "max entry deviation " << worst << " > " << tol;
}

inline ::testing::AssertionResult VectorNear(const ComplexVector& a, const ComplexVector& b, double tol) {
    if (a.dim() != b.dim()) return ::testing::AssertionFailure() << "dims differ";
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    if (worst <= tol) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "max entry deviation " << worst << " > " << tol;
}

namespace oracle {

// Eigenvalues of [[a, b], [conj(b), d]], ascending, by the quadratic formula.
inline std::pair<double, double> eig2(double a, cplx b, double d) {
    const double mean = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    return {mean - rad, mean + rad};
}

// Trace distance of two commuting (diagonal) states.
inline double diagonal_trace_distance(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

// Closed forms of the two-qubit example with A = diag(1, lambda), U = H, M = |0><0|.
inline double p_z(double lambda) { return 1.0 / (1.0 + lambda); }
inline double p_x(double) { return 0.5; }
inline double gap(double lambda) { return std::abs(1.0 - lambda) / (2.0 * (1.0 + lambda)); }
// trace distance between I/(1+lambda) and diag(1/2, 1/(2 lambda))
inline double defect(double lambda) {
    return diagonal_trace_distance({1.0 / (1.0 + lambda), 1.0 / (1.0 + lambda)}, {0.5, 0.5 / lambda});
}

}  // namespace oracle
}  // namespace metricqm::testing
