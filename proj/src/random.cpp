#include "metricqm/random.hpp"

#include <cmath>
#include <numbers>

namespace metricqm {

double Rng::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::gaussian() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

cplx Rng::complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return cplx(re, im) * std::numbers::sqrt2 * 0.5;
}

ComplexVector random_vector(std::size_t dim, Rng& rng) {
    ComplexVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = rng.complex_gaussian();
    return v;
}

ComplexVector random_unit_vector(std::size_t dim, Rng& rng) {
    auto v = random_vector(dim, rng);
    return v * cplx(1.0 / v.norm());
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    using std::numbers::pi;
    if (dim == 2) {
        const double psi = rng.uniform(0.0, 2.0 * pi);
        const double chi = rng.uniform(0.0, 2.0 * pi);
        const double phi = std::asin(std::sqrt(rng.uniform()));
        const cplx a = std::polar(std::cos(phi), psi);
        const cplx b = std::polar(std::sin(phi), chi);
        return ComplexMatrix{{a, b}, {-std::conj(b), std::conj(a)}};
    }
    std::vector<ComplexVector> cols;
    cols.reserve(dim);
    while (cols.size() < dim) {
        auto v = random_vector(dim, rng);
        for (const auto& q : cols) v -= vdot(q, v) * q;
        const double n = v.norm();
        if (n < 1e-8) continue;
        cols.push_back(v * cplx(1.0 / n));
    }
    return ComplexMatrix::from_columns(cols);
}

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
    ComplexMatrix g(dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) g(r, c) = rng.complex_gaussian();
    auto h = 0.5 * (g + dagger(g));
    // exact Hermiticity
    for (std::size_t r = 0; r < dim; ++r) {
        h(r, r) = h(r, r).real();
        for (std::size_t c = r + 1; c < dim; ++c) h(c, r) = std::conj(h(r, c));
    }
    return h;
}

ComplexMatrix random_positive_definite(std::size_t dim, Rng& rng, double lo, double hi) {
    const auto u = random_unitary(dim, rng);
    std::vector<double> eig(dim);
    for (auto& e : eig) e = std::exp(rng.uniform(std::log(lo), std::log(hi)));
    auto a = u * ComplexMatrix::diag(eig) * dagger(u);
    return 0.5 * (a + dagger(a));
}

ComplexMatrix random_density(std::size_t dim, Rng& rng) {
    ComplexMatrix g(dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) g(r, c) = rng.complex_gaussian();
    auto rho = g * dagger(g);
    rho = 0.5 * (rho + dagger(rho));
    return rho * cplx(1.0 / rho.trace().real());
}

}  // namespace metricqm
