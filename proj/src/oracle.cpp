#include "rsfem/oracle.hpp"

#include "rsfem/errors.hpp"
#include "rsfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

namespace rsfem {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double sqrt2 = std::numbers::sqrt2;

void require_finite_positive(double x, const char* what)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw InvalidArgument(std::string(what) + " must be positive and finite");
    }
}

double step_coefficient(int j, double cut)
{
    const double w = j * pi;
    return sqrt2 * (1.0 - std::cos(w * cut)) / w;
}

double custom_coefficient(const CustomNodal& c, int j)
{
    // Integration by parts on each linear piece.
    const double w = j * pi;
    const std::size_t n = c.x.size();
    double s = (c.values.front() - c.values.back() * std::cos(w)) / w;
    for (std::size_t e = 0; e + 1 < n; ++e) {
        const double slope = (c.values[e + 1] - c.values[e]) / (c.x[e + 1] - c.x[e]);
        s += slope * (std::sin(w * c.x[e + 1]) - std::sin(w * c.x[e])) / (w * w);
    }
    return sqrt2 * s;
}

} // namespace

std::vector<Mode> eigenbasis(Domain domain, std::size_t J)
{
    if (J == 0) {
        throw InvalidArgument("eigenbasis: J must be positive");
    }
    std::vector<Mode> modes;
    if (domain == Domain::Interval) {
        modes.reserve(J);
        for (std::size_t j = 1; j <= J; ++j) {
            const double w = static_cast<double>(j) * pi;
            modes.push_back({static_cast<int>(j), 0, w * w});
        }
        return modes;
    }
    // Lattice points in a quarter disc of area ~ pi R^2 / 4 >= J.
    int R = static_cast<int>(std::ceil(std::sqrt(4.0 * static_cast<double>(J) / pi))) + 2;
    for (;;) {
        modes.clear();
        for (int j = 1; j <= R; ++j) {
            for (int k = 1; k <= R; ++k) {
                if (j * j + k * k <= R * R) {
                    modes.push_back({j, k, static_cast<double>(j * j + k * k) * pi * pi});
                }
            }
        }
        if (modes.size() >= J) {
            break;
        }
        R += 2;
    }
    std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
        if (a.lambda != b.lambda) {
            return a.lambda < b.lambda;
        }
        return a.j != b.j ? a.j < b.j : a.k < b.k;
    });
    modes.resize(J);
    return modes;
}

double eigenfunction(const Mode& m, const Point& x)
{
    if (m.k == 0) {
        return sqrt2 * std::sin(m.j * pi * x[0]);
    }
    return 2.0 * std::sin(m.j * pi * x[0]) * std::sin(m.k * pi * x[1]);
}

Point eigenfunction_gradient(const Mode& m, const Point& x)
{
    const double wj = m.j * pi;
    if (m.k == 0) {
        return {sqrt2 * wj * std::cos(wj * x[0]), 0.0};
    }
    const double wk = m.k * pi;
    return {2.0 * wj * std::cos(wj * x[0]) * std::sin(wk * x[1]),
            2.0 * wk * std::sin(wj * x[0]) * std::cos(wk * x[1])};
}

double datum_coefficient(const InitialDatum& v, int j, int k)
{
    if (j < 1 || k < 0) {
        throw InvalidArgument("datum_coefficient: mode indices out of range");
    }
    const bool square = datum_dimension(v) == 2;
    if (square != (k > 0)) {
        throw InvalidArgument("datum_coefficient: mode does not match the datum's domain");
    }
    if (const auto* s = std::get_if<SmoothSine>(&v)) {
        return j == s->mode ? 1.0 / sqrt2 : 0.0;
    }
    if (const auto* s = std::get_if<Step>(&v)) {
        return step_coefficient(j, s->cut);
    }
    if (const auto* d = std::get_if<Dirac>(&v)) {
        return sqrt2 * std::sin(j * pi * d->location);
    }
    if (const auto* s = std::get_if<Step2D>(&v)) {
        return step_coefficient(j, s->cut) * step_coefficient(k, 1.0);
    }
    return custom_coefficient(std::get<CustomNodal>(v), j);
}

std::vector<double> datum_coefficients(const InitialDatum& v, std::span<const Mode> modes)
{
    validate_datum(v);
    std::vector<double> c;
    c.reserve(modes.size());
    for (const Mode& m : modes) {
        c.push_back(datum_coefficient(v, m.j, m.k));
    }
    return c;
}

double datum_norm(const InitialDatum& v)
{
    validate_datum(v);
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SmoothSine>) {
                return 1.0 / sqrt2;
            } else if constexpr (std::is_same_v<T, Step> || std::is_same_v<T, Step2D>) {
                return std::sqrt(d.cut);
            } else if constexpr (std::is_same_v<T, Dirac>) {
                return 1.0;
            } else {
                double s = 0.0;
                for (std::size_t e = 0; e + 1 < d.x.size(); ++e) {
                    const double a = d.values[e];
                    const double b = d.values[e + 1];
                    s += (d.x[e + 1] - d.x[e]) * (a * a + a * b + b * b) / 3.0;
                }
                return std::sqrt(s);
            }
        },
        v);
}

double KernelDensity::operator()(double r) const
{
    const double ra = std::pow(r, alpha);
    const double sa = std::sin(alpha * pi);
    const double re = -r + lambda * gamma * ra * std::cos(alpha * pi) + lambda;
    const double im = lambda * gamma * ra * sa;
    return gamma / pi * lambda * ra * sa / (re * re + im * im);
}

double scaled_modal_factor(double eps, double alpha, double gamma, double t)
{
    require_finite_positive(t, "t");
    require_finite_positive(gamma, "gamma");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0,1)");
    }
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
        throw InvalidArgument("eps must be nonnegative");
    }
    const double sa = std::sin(alpha * pi);
    const double ca = std::cos(alpha * pi);
    const double pref = gamma / pi * sa;

    // r = e^s; the integrand is r K(r) exp(-r t) scaled by lambda.
    auto integrand = [&](double s) {
        const double r = std::exp(s);
        const double ra = std::exp(alpha * s);
        const double re = 1.0 - eps * r + gamma * ra * ca;
        const double im = gamma * ra * sa;
        return std::exp(-r * t) * pref * r * ra / (re * re + im * im);
    };

    const double s_max = std::log(50.0 / t);
    const double s_min = std::min(std::log(1e-18) / (1.0 + alpha), s_max - 10.0);

    // The real part of the denominator is monotone past its maximum, so it
    // has at most one zero; align a panel edge with it.
    auto re_at = [&](double s) { return 1.0 - eps * std::exp(s) + gamma * std::exp(alpha * s) * ca; };
    std::vector<double> edges{s_min};
    if (re_at(s_max) < 0.0) {
        double lo = s_min;
        double hi = s_max;
        if (ca > 0.0) {
            // start the bracket at the maximum of re
            const double smax_re = std::log(gamma * alpha * ca / eps) / (1.0 - alpha);
            lo = std::clamp(smax_re, s_min, s_max);
        }
        if (re_at(lo) > 0.0) {
            for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                (re_at(mid) > 0.0 ? lo : hi) = mid;
            }
            const double s0 = 0.5 * (lo + hi);
            edges.push_back(s0);
            // Near alpha = 1 the integrand is a narrow Lorentzian centred at
            // s0; grade the panels geometrically towards it.
            const double r0 = std::exp(s0);
            const double slope = std::abs(-eps * r0 + gamma * alpha * std::exp(alpha * s0) * ca);
            const double half_width = gamma * std::exp(alpha * s0) * sa / std::max(slope, 1e-300);
            for (double w = half_width; w < 0.5; w *= 2.0) {
                if (s0 - w > s_min) {
                    edges.push_back(s0 - w);
                }
                if (s0 + w < s_max) {
                    edges.push_back(s0 + w);
                }
            }
        }
    }
    edges.push_back(s_max);
    std::sort(edges.begin(), edges.end());

    const GaussRule& g = gauss_legendre(16);
    auto composite = [&](double width) {
        double total = 0.0;
        for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
            const double len = edges[b + 1] - edges[b];
            const int panels = std::max(1, static_cast<int>(std::ceil(len / width)));
            const double hw = 0.5 * len / panels;
            for (int p = 0; p < panels; ++p) {
                const double c = edges[b] + (2 * p + 1) * hw;
                double acc = 0.0;
                for (std::size_t q = 0; q < g.nodes.size(); ++q) {
                    acc += g.weights[q] * integrand(c + hw * g.nodes[q]);
                }
                total += hw * acc;
            }
        }
        return total;
    };

    double width = 1.0;
    double prev = composite(width);
    for (int level = 0; level < 14; ++level) {
        width *= 0.5;
        const double cur = composite(width);
        if (std::abs(cur - prev) <= 1e-13 * std::abs(cur)) {
            return cur;
        }
        prev = cur;
    }
    throw Error("scaled_modal_factor: quadrature did not converge (alpha=" + std::to_string(alpha) +
                ", eps=" + std::to_string(eps) + ", t=" + std::to_string(t) + ")");
}

double uj_eval(const KernelDensity& density, double t)
{
    require_finite_positive(t, "t");
    require_finite_positive(density.lambda, "lambda");
    const double eps = 1.0 / density.lambda;
    return eps * scaled_modal_factor(eps, density.alpha, density.gamma, t);
}

double limit_alpha1(double lambda, double gamma, double t)
{
    if (!(t >= 0.0)) {
        throw InvalidArgument("limit_alpha1: t must be nonnegative");
    }
    return std::exp(-lambda * t / (1.0 + gamma * lambda));
}

double limit_alpha1_from_below(double lambda, double gamma, double t)
{
    return limit_alpha1(lambda, gamma, t) / (1.0 + gamma * lambda);
}

std::complex<double> SymbolProbe::g(std::complex<double> z) const
{
    return z / (1.0 + gamma * std::pow(z, alpha));
}

std::complex<double> SymbolProbe::H(std::complex<double> z, double lambda) const
{
    const std::complex<double> gz = g(z);
    return gz / (z * (gz + lambda));
}

SectorReport sector_probe(const SymbolProbe& probe, std::span<const std::complex<double>> samples, double phi)
{
    SectorReport rep;
    const double sa = std::sin(probe.alpha * pi);
    for (const auto& z : samples) {
        if (z == 0.0 || std::abs(std::arg(z)) > phi) {
            throw InvalidArgument("sector_probe: sample outside the sector");
        }
        const std::complex<double> gz = probe.g(z);
        const double az = std::abs(z);
        const double ratios[3] = {
            std::abs(gz) / (az / sa),
            std::abs(gz) / (std::pow(az, 1.0 - probe.alpha) / (probe.gamma * sa)),
            std::abs(std::arg(gz)) / phi,
        };
        bool bad = false;
        for (double r : ratios) {
            rep.worst_ratio = std::max(rep.worst_ratio, r);
            bad = bad || r > 1.0 + 1e-12;
        }
        rep.samples += 1;
        rep.violations += bad ? 1 : 0;
    }
    return rep;
}

} // namespace rsfem
