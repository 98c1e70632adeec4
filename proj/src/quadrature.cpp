#include "rsfem/quadrature.hpp"

#include "rsfem/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace rsfem {

namespace {

GaussRule compute_gauss_legendre(int n)
{
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(int n)
{
    if (n < 1 || n > 256) {
        throw InvalidArgument("gauss_legendre: order must be in [1, 256]");
    }
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, compute_gauss_legendre(n)).first;
    }
    return it->second;
}

const TriangleRule& triangle_rule_deg5()
{
    static const TriangleRule rule = [] {
        const double s15 = std::sqrt(15.0);
        const double a1 = (6.0 - s15) / 21.0;
        const double b1 = (9.0 + 2.0 * s15) / 21.0;
        const double a2 = (6.0 + s15) / 21.0;
        const double b2 = (9.0 - 2.0 * s15) / 21.0;
        const double w0 = 9.0 / 80.0;
        const double w1 = (155.0 - s15) / 2400.0;
        const double w2 = (155.0 + s15) / 2400.0;
        TriangleRule r{};
        r.points = {{{1.0 / 3.0, 1.0 / 3.0}, {a1, a1}, {b1, a1}, {a1, b1}, {a2, a2}, {b2, a2}, {a2, b2}}};
        r.weights = {w0, w1, w1, w1, w2, w2, w2};
        return r;
    }();
    return rule;
}

} // namespace rsfem
