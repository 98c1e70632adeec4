#pragma once

#include "rsfem/sparse.hpp"

#include <span>
#include <string>
#include <vector>

namespace rsfem {

enum class Scheme { BE, SBD };

[[nodiscard]] std::string scheme_name(Scheme s);
/// Accepts "be"/"sbd" in any case; throws InvalidArgument otherwise.
[[nodiscard]] Scheme parse_scheme(const std::string& s);

/// delta(xi) = sum_k coefficients[k] xi^k, the characteristic polynomial of
/// the underlying multistep method divided by the step.
struct GeneratingPolynomial {
    Scheme scheme = Scheme::BE;
    std::vector<double> coefficients;
};

[[nodiscard]] GeneratingPolynomial generating_polynomial(Scheme s);

/// First N+1 power series coefficients of (delta(xi)/tau)^mu.
struct CQWeights {
    Scheme scheme = Scheme::BE;
    double mu = 0.0;
    double tau = 1.0;
    std::vector<double> w;

    [[nodiscard]] std::size_t size() const noexcept { return w.size(); }
    [[nodiscard]] double operator[](std::size_t j) const { return w[j]; }
};

[[nodiscard]] CQWeights weights(Scheme scheme, double mu, double tau, std::size_t N);

/// sum_{j=0}^{n} w_j g_{n-j}
[[nodiscard]] Vector discrete_convolution(const CQWeights& w, std::span<const Vector> g, std::size_t n);
[[nodiscard]] double discrete_convolution(const CQWeights& w, std::span<const double> g, std::size_t n);

} // namespace rsfem
