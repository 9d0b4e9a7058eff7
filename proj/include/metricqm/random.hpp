// random.hpp: seeded samplers for vectors, unitaries and metrics

#pragma once

#include <cstdint>
#include <random>

#include "metricqm/linalg.hpp"

namespace metricqm {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0);
    double gaussian();
    // Real and imaginary parts i.i.d. N(0, 1/2).
    cplx complex_gaussian();

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

ComplexVector random_vector(std::size_t dim, Rng& rng);
ComplexVector random_unit_vector(std::size_t dim, Rng& rng);

// Haar-distributed. For dim 2 this uses two phases and a rotation angle
// (SU(2) Euler form); higher dims use Gram-Schmidt on a Ginibre matrix.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng);

// Positive definite with eigenvalues drawn log-uniformly from [lo, hi].
ComplexMatrix random_positive_definite(std::size_t dim, Rng& rng, double lo = 0.2, double hi = 5.0);

// Random density matrix (unit trace, full rank almost surely).
ComplexMatrix random_density(std::size_t dim, Rng& rng);

}  // namespace metricqm
