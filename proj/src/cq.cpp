#include "rsfem/cq.hpp"

#include "rsfem/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace rsfem {

std::string scheme_name(Scheme s)
{
    return s == Scheme::BE ? "BE" : "SBD";
}

Scheme parse_scheme(const std::string& s)
{
    std::string low(s);
    std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return std::tolower(c); });
    if (low == "be") {
        return Scheme::BE;
    }
    if (low == "sbd") {
        return Scheme::SBD;
    }
    throw InvalidArgument("unknown scheme '" + s + "' (expected be or sbd)");
}

GeneratingPolynomial generating_polynomial(Scheme s)
{
    if (s == Scheme::BE) {
        return {s, {1.0, -1.0}};
    }
    return {s, {1.5, -2.0, 0.5}};
}

CQWeights weights(Scheme scheme, double mu, double tau, std::size_t N)
{
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw InvalidArgument("weights: step size must be positive");
    }
    if (!std::isfinite(mu)) {
        throw InvalidArgument("weights: exponent must be finite");
    }
    const GeneratingPolynomial p = generating_polynomial(scheme);
    std::vector<long double> a(N + 1, 0.0L);
    const long double m = mu;
    if (scheme == Scheme::BE) {
        a[0] = 1.0L;
        for (std::size_t j = 1; j <= N; ++j) {
            a[j] = a[j - 1] * (static_cast<long double>(j) - 1.0L - m) / static_cast<long double>(j);
        }
    } else {
        // J.C.P. Miller recurrence for the power of a polynomial
        const long double c0 = p.coefficients[0];
        a[0] = std::pow(c0, m);
        for (std::size_t n = 1; n <= N; ++n) {
            long double s = 0.0L;
            const std::size_t kmax = std::min<std::size_t>(n, p.coefficients.size() - 1);
            for (std::size_t k = 1; k <= kmax; ++k) {
                const long double kn = static_cast<long double>(k) / static_cast<long double>(n);
                s += ((m + 1.0L) * kn - 1.0L) * static_cast<long double>(p.coefficients[k]) * a[n - k];
            }
            a[n] = s / c0;
        }
    }
    const long double scale = std::pow(static_cast<long double>(tau), -m);
    CQWeights out{scheme, mu, tau, std::vector<double>(N + 1)};
    for (std::size_t j = 0; j <= N; ++j) {
        out.w[j] = static_cast<double>(a[j] * scale);
    }
    return out;
}

Vector discrete_convolution(const CQWeights& w, std::span<const Vector> g, std::size_t n)
{
    if (n >= g.size() || n >= w.size()) {
        throw InvalidArgument("discrete_convolution: index beyond the available history or weights");
    }
    const std::size_t dim = g[0].size();
    Vector out(dim, 0.0);
    for (std::size_t j = 0; j <= n; ++j) {
        if (g[n - j].size() != dim) {
            throw InvalidArgument("discrete_convolution: vectors of unequal length");
        }
        axpy(w[j], g[n - j], out);
    }
    return out;
}

double discrete_convolution(const CQWeights& w, std::span<const double> g, std::size_t n)
{
    if (n >= g.size() || n >= w.size()) {
        throw InvalidArgument("discrete_convolution: index beyond the available history or weights");
    }
    long double s = 0.0L;
    for (std::size_t j = 0; j <= n; ++j) {
        s += static_cast<long double>(w[j]) * g[n - j];
    }
    return static_cast<double>(s);
}

} // namespace rsfem
