#pragma once

#include "rsfem/datum.hpp"
#include "rsfem/mesh.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rsfem {

enum class Domain { Interval, Square };

/// Dirichlet eigenpair of -Laplace. In 1D k is 0 and phi = sqrt2 sin(j pi x);
/// on the square phi = 2 sin(j pi x) sin(k pi y).
struct Mode {
    int j = 1;
    int k = 0;
    double lambda = 0.0;
};

/// The J smallest eigenpairs, ascending in lambda (ties broken by (j, k)).
[[nodiscard]] std::vector<Mode> eigenbasis(Domain domain, std::size_t J);
[[nodiscard]] double eigenfunction(const Mode& m, const Point& x);
[[nodiscard]] Point eigenfunction_gradient(const Mode& m, const Point& x);

/// (v, phi_j) in closed form. 1D data take k = 0.
[[nodiscard]] double datum_coefficient(const InitialDatum& v, int j, int k = 0);
[[nodiscard]] std::vector<double> datum_coefficients(const InitialDatum& v, std::span<const Mode> modes);

/// ||v||_L2 used to normalize reported errors. The Dirac datum has no L2
/// norm; it returns 1 so that normalized and raw errors coincide.
[[nodiscard]] double datum_norm(const InitialDatum& v);

/// Density whose Laplace transform is the modal time factor u_j.
struct KernelDensity {
    double lambda = 1.0;
    double gamma = 1.0;
    double alpha = 0.5;

    [[nodiscard]] double operator()(double r) const;
};

/// u_j(t) = int_0^inf exp(-r t) K(r) dr for t > 0.
[[nodiscard]] double uj_eval(const KernelDensity& density, double t);

/// Same integral scaled by lambda and written in eps = 1/lambda:
/// F(eps) = lambda u_j(t). eps = 0 gives the large-lambda limit.
[[nodiscard]] double scaled_modal_factor(double eps, double alpha, double gamma, double t);

/// Modal factor of the classical problem (alpha = 1, initial value imposed):
/// exp(-lambda t / (1 + gamma lambda)).
[[nodiscard]] double limit_alpha1(double lambda, double gamma, double t);

/// Pointwise limit of u_j(t), t > 0, as alpha -> 1 from below. The
/// fractional term carries no initial value, so an initial layer leaves the
/// classical factor divided by 1 + gamma lambda.
[[nodiscard]] double limit_alpha1_from_below(double lambda, double gamma, double t);

/// Transfer function of the fractional Rayleigh-Stokes operator.
struct SymbolProbe {
    double alpha = 0.5;
    double gamma = 1.0;

    /// g(z) = z / (1 + gamma z^alpha), principal branch.
    [[nodiscard]] std::complex<double> g(std::complex<double> z) const;
    /// H(z, lambda) = g(z) / (z (g(z) + lambda)).
    [[nodiscard]] std::complex<double> H(std::complex<double> z, double lambda) const;
};

struct SectorReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    // Largest value/bound ratio seen over all checks; at most 1 when clean.
    double worst_ratio = 0.0;
};

/// Checks |g(z)| <= |z| / sin(alpha pi), |g(z)| <= |z|^(1-alpha) / (gamma sin(alpha pi))
/// and |arg g(z)| <= phi for samples with |arg z| <= phi.
[[nodiscard]] SectorReport sector_probe(const SymbolProbe& probe, std::span<const std::complex<double>> samples,
                                        double phi);

} // namespace rsfem
