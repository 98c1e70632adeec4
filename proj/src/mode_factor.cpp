#include "rsfem/mode_factor.hpp"

#include "rsfem/errors.hpp"
#include "rsfem/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rsfem {

ModeFactor ModeFactor::exact(double alpha, double gamma, double t)
{
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw InvalidArgument("exact mode factor needs t > 0");
    }
    if (!(alpha > 0.0 && alpha < 1.0) || !(gamma > 0.0)) {
        throw InvalidArgument("exact mode factor: alpha in (0,1) and gamma > 0 required");
    }
    ModeFactor f;
    f.exact_ = true;
    f.alpha_ = alpha;
    f.gamma_ = gamma;
    f.t_ = t;
    return f;
}

ModeFactor ModeFactor::discrete(const SchemeConfig& cfg)
{
    validate(cfg);
    ModeFactor f;
    f.exact_ = false;
    f.alpha_ = cfg.alpha;
    f.gamma_ = cfg.gamma;
    f.t_ = cfg.tau * cfg.N;
    f.cfg_ = cfg;
    f.w_ = weights(cfg.scheme, cfg.alpha, cfg.tau, static_cast<std::size_t>(cfg.N)).w;
    return f;
}

bool ModeFactor::has_limit() const noexcept
{
    if (exact_) {
        return true;
    }
    if (cfg_.scheme == Scheme::BE) {
        return !cfg_.include_history_origin;
    }
    return cfg_.N >= 2;
}

double ModeFactor::scale() const noexcept
{
    return exact_ ? t_ : cfg_.tau;
}

std::string ModeFactor::describe() const
{
    std::ostringstream os;
    if (exact_) {
        os << "exact(alpha=" << alpha_ << ", t=" << t_ << ")";
    } else {
        os << scheme_name(cfg_.scheme) << "(alpha=" << alpha_ << ", tau=" << cfg_.tau << ", N=" << cfg_.N << ")";
    }
    return os.str();
}

double ModeFactor::value(double lambda) const
{
    if (!(lambda > 0.0)) {
        throw InvalidArgument("mode factor needs lambda > 0");
    }
    const double eps = 1.0 / lambda;
    return has_limit() ? eps * scaled(eps) : scaled(eps);
}

double ModeFactor::scaled(double eps) const
{
    if (exact_) {
        return scaled_modal_factor(eps, alpha_, gamma_, t_);
    }
    return discrete_scaled(eps);
}

// The scalar scheme for eps u' + ... + u = 0 rewritten for E^n = U^n / eps
// where that quotient stays bounded as eps -> 0.
double ModeFactor::discrete_scaled(double eps) const
{
    const double tau = cfg_.tau;
    const double g = gamma_;
    const auto N = static_cast<std::size_t>(cfg_.N);
    const std::vector<double>& w = w_;

    if (!has_limit()) {
        SchemeConfig c = cfg_;
        return scalar_recurrence(c, eps, 1.0, 1.0).back();
    }

    std::vector<double> E(N + 1, 0.0);
    if (cfg_.scheme == Scheme::BE) {
        const double a = eps / tau + 1.0 + g * w[0];
        E[1] = 1.0 / (tau * a);
        for (std::size_t n = 2; n <= N; ++n) {
            double h = 0.0;
            for (std::size_t j = 1; j < n; ++j) {
                h += w[n - j] * E[j];
            }
            E[n] = (eps * E[n - 1] / tau - g * h) / a;
        }
        return E[N];
    }

    // SBD: U^1 + U^0/2 = eps D stays O(eps) while U^1 itself does not, so
    // D takes the place of E^1 and the first two steps keep raw iterates.
    const double c = 1.0 + g * w[0];
    const double a = 1.5 * eps / tau + c;
    const double D = 2.25 / tau / a;
    const double U1 = eps * D - 0.5;
    // E[1] is unused; history sums run over j >= 2 plus the D term.
    auto history = [&](std::size_t n) {
        double h = w[n - 1] * D;
        for (std::size_t j = 2; j < n; ++j) {
            h += w[n - j] * E[j];
        }
        return h;
    };
    for (std::size_t n = 2; n <= N; ++n) {
        double diff;
        if (n == 2) {
            diff = 4.0 * U1 - 1.0;
        } else if (n == 3) {
            diff = 4.0 * eps * E[2] - U1;
        } else {
            diff = eps * (4.0 * E[n - 1] - E[n - 2]);
        }
        E[n] = (diff / (2.0 * tau) - g * history(n)) / a;
    }
    return E[N];
}

namespace {

constexpr int kChebNodes = 33;

double cheb_node(int i, double eps_max)
{
    return 0.5 * eps_max * (1.0 - std::cos(std::numbers::pi * i / (kChebNodes - 1)));
}

} // namespace

ModeFactorTable::ModeFactorTable(ModeFactor factor) : factor_(std::move(factor))
{
    const double s = factor_.scale();
    const double a = factor_.alpha();
    eps_max_ = 0.05 * std::min(factor_.gamma() * std::pow(s, 1.0 - a), s);
    limit_ = factor_.scaled(0.0);

    for (int attempt = 0; attempt < 40; ++attempt) {
        nodes_.resize(kChebNodes);
        values_.resize(kChebNodes);
        double vmax = 0.0;
        for (int i = 0; i < kChebNodes; ++i) {
            nodes_[i] = cheb_node(i, eps_max_);
            values_[i] = i == 0 ? limit_ : factor_.scaled(nodes_[i]);
            vmax = std::max(vmax, std::abs(values_[i]));
        }
        double worst = 0.0;
        for (int i = 0; i + 1 < kChebNodes; i += 2) {
            const double th = std::numbers::pi * (i + 0.5) / (kChebNodes - 1);
            const double e = 0.5 * eps_max_ * (1.0 - std::cos(th));
            worst = std::max(worst, std::abs(interpolate(e) - factor_.scaled(e)));
        }
        if (worst <= 1e-11 * std::max(vmax, 1e-300)) {
            return;
        }
        eps_max_ *= 0.5;
    }
    throw Error("ModeFactorTable: no interpolation range found for " + factor_.describe());
}

// Barycentric formula for Chebyshev-Lobatto nodes.
double ModeFactorTable::interpolate(double eps) const
{
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < kChebNodes; ++i) {
        const double d = eps - nodes_[i];
        if (d == 0.0) {
            return values_[i];
        }
        double wi = (i % 2 == 0) ? 1.0 : -1.0;
        if (i == 0 || i == kChebNodes - 1) {
            wi *= 0.5;
        }
        num += wi * values_[i] / d;
        den += wi / d;
    }
    return num / den;
}

double ModeFactorTable::scaled(double eps) const
{
    if (eps == 0.0) {
        return limit_;
    }
    return eps <= eps_max_ ? interpolate(eps) : factor_.scaled(eps);
}

double ModeFactorTable::value(double lambda) const
{
    if (!(lambda > 0.0)) {
        throw InvalidArgument("mode factor needs lambda > 0");
    }
    const double eps = 1.0 / lambda;
    return factor_.has_limit() ? eps * scaled(eps) : scaled(eps);
}

} // namespace rsfem
