#include "rsfem/stepper.hpp"

#include "rsfem/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace rsfem {

std::string projection_name(Projection p)
{
    return p == Projection::L2 ? "l2" : "ritz";
}

Projection parse_projection(const std::string& s)
{
    std::string low(s);
    std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return std::tolower(c); });
    if (low == "l2") {
        return Projection::L2;
    }
    if (low == "ritz") {
        return Projection::Ritz;
    }
    throw InvalidArgument("unknown projection '" + s + "' (expected l2 or ritz)");
}

void validate(const SchemeConfig& cfg)
{
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0,1)");
    }
    if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) {
        throw InvalidArgument("gamma must be positive");
    }
    if (!(cfg.tau > 0.0) || !std::isfinite(cfg.tau)) {
        throw InvalidArgument("tau must be positive");
    }
    if (cfg.N < 1) {
        throw InvalidArgument("N must be at least 1");
    }
}

Vector initial_vector(const FemSpace& space, const InitialDatum& v, Projection p)
{
    return p == Projection::L2 ? l2_project(space, v) : ritz_project(space, v);
}

namespace {

// Shared driver for both schemes. Stores S U^j for the history sum and
// keeps the last two iterates for the time difference.
class Integrator {
public:
    Integrator(const FemSpace& space, const SchemeConfig& cfg, const Vector& v, const std::optional<Forcing>& f)
        : space_(space), cfg_(cfg), f_(f)
    {
        validate(cfg);
        if (v.size() != space.n_dof()) {
            throw InvalidArgument("initial vector has " + std::to_string(v.size()) + " entries, expected " +
                                  std::to_string(space.n_dof()));
        }
        for (double x : v) {
            if (!std::isfinite(x)) {
                throw InvalidArgument("initial vector is not finite");
            }
        }
        w_ = weights(cfg.scheme, cfg.alpha, cfg.tau, static_cast<std::size_t>(cfg.N));
        g_ = cfg.gamma;  // weights already carry tau^-alpha
        traj_.config = cfg;
        traj_.times.push_back(0.0);
        traj_.snapshots.push_back(v);
        su_.reserve(static_cast<std::size_t>(cfg.N) + 1);
        su_.push_back(matvec(space.stiffness, v));
    }

    DiscreteTrajectory run()
    {
        const double tau = cfg_.tau;
        const double lead = cfg_.scheme == Scheme::BE ? 1.0 / tau : 1.5 / tau;
        SpdSolver solver(add_scaled(lead, space_.mass, 1.0 + g_ * w_[0], space_.stiffness));

        const std::size_t n_dof = space_.n_dof();
        Vector prev = traj_.snapshots.front();
        Vector prev2;
        Vector rhs(n_dof);
        Vector tmp(n_dof);
        const auto N = static_cast<std::size_t>(cfg_.N);

        for (std::size_t n = 1; n <= N; ++n) {
            std::fill(rhs.begin(), rhs.end(), 0.0);
            if (cfg_.scheme == Scheme::BE) {
                space_.mass.multiply(prev, tmp);
                axpy(1.0 / tau, tmp, rhs);
                const std::size_t j0 = cfg_.include_history_origin ? 0 : 1;
                for (std::size_t j = j0; j < n; ++j) {
                    axpy(-g_ * w_[n - j], su_[j], rhs);
                }
                add_load(rhs, static_cast<double>(n) * tau, 1.0);
            } else if (n == 1) {
                space_.mass.multiply(prev, tmp);
                axpy(1.5 / tau, tmp, rhs);
                axpy(-(0.5 * g_ * w_[0] + 0.5), su_[0], rhs);
                add_load(rhs, tau, 1.0);
                add_load(rhs, 0.0, 0.5);
            } else {
                for (std::size_t i = 0; i < n_dof; ++i) {
                    tmp[i] = 4.0 * prev[i] - prev2[i];
                }
                Vector mt = matvec(space_.mass, tmp);
                axpy(0.5 / tau, mt, rhs);
                for (std::size_t j = 1; j < n; ++j) {
                    axpy(-g_ * w_[n - j], su_[j], rhs);
                }
                axpy(-0.5 * g_ * w_[n - 1], su_[0], rhs);
                add_load(rhs, static_cast<double>(n) * tau, 1.0);
            }

            Vector next;
            try {
                next = solver.solve(rhs);
            } catch (const SolverFailure& e) {
                throw SolverFailure("step " + std::to_string(n) + ": " + e.what(), e.residual(), e.iterations());
            }
            for (double x : next) {
                if (!std::isfinite(x)) {
                    throw SolverFailure("step " + std::to_string(n) + ": non-finite iterate", 0.0, 0);
                }
            }
            if (n < N) {
                su_.push_back(matvec(space_.stiffness, next));
            }
            if (cfg_.keep_snapshots || n == N) {
                traj_.times.push_back(static_cast<double>(n) * tau);
                traj_.snapshots.push_back(next);
            }
            prev2 = std::move(prev);
            prev = std::move(next);
        }
        return std::move(traj_);
    }

private:
    void add_load(Vector& rhs, double t, double scale) const
    {
        if (!f_) {
            return;
        }
        const Vector b = (*f_)(t);
        if (b.size() != rhs.size()) {
            throw InvalidArgument("forcing returned a vector of the wrong length");
        }
        axpy(scale, b, rhs);
    }

    const FemSpace& space_;
    SchemeConfig cfg_;
    const std::optional<Forcing>& f_;
    CQWeights w_;
    double g_ = 0.0;
    DiscreteTrajectory traj_;
    std::vector<Vector> su_;
};

} // namespace

DiscreteTrajectory step_be(const FemSpace& space, const SchemeConfig& cfg, const Vector& v,
                           const std::optional<Forcing>& f)
{
    if (cfg.scheme != Scheme::BE) {
        throw InvalidArgument("step_be called with a non-BE configuration");
    }
    return Integrator(space, cfg, v, f).run();
}

DiscreteTrajectory step_sbd(const FemSpace& space, const SchemeConfig& cfg, const Vector& v,
                            const std::optional<Forcing>& f)
{
    if (cfg.scheme != Scheme::SBD) {
        throw InvalidArgument("step_sbd called with a non-SBD configuration");
    }
    return Integrator(space, cfg, v, f).run();
}

DiscreteTrajectory run_scheme(const FemSpace& space, const SchemeConfig& cfg, const Vector& v,
                              const std::optional<Forcing>& f)
{
    return cfg.scheme == Scheme::BE ? step_be(space, cfg, v, f) : step_sbd(space, cfg, v, f);
}

std::vector<double> scalar_recurrence(const SchemeConfig& cfg, double m, double s, double u0)
{
    validate(cfg);
    const auto N = static_cast<std::size_t>(cfg.N);
    const CQWeights w = weights(cfg.scheme, cfg.alpha, cfg.tau, N);
    const double g = cfg.gamma;
    const double tau = cfg.tau;
    std::vector<double> u(N + 1, 0.0);
    u[0] = u0;
    if (cfg.scheme == Scheme::BE) {
        const double a = m / tau + s * (1.0 + g * w[0]);
        const std::size_t j0 = cfg.include_history_origin ? 0 : 1;
        for (std::size_t n = 1; n <= N; ++n) {
            long double h = 0.0L;
            for (std::size_t j = j0; j < n; ++j) {
                h += static_cast<long double>(w[n - j]) * u[j];
            }
            u[n] = (m * u[n - 1] / tau - g * s * static_cast<double>(h)) / a;
        }
    } else {
        const double a = 1.5 * m / tau + s * (1.0 + g * w[0]);
        u[1] = (1.5 * m * u0 / tau - s * (0.5 * g * w[0] + 0.5) * u0) / a;
        for (std::size_t n = 2; n <= N; ++n) {
            long double h = 0.5L * w[n - 1] * u0;
            for (std::size_t j = 1; j < n; ++j) {
                h += static_cast<long double>(w[n - j]) * u[j];
            }
            u[n] = (m * (4.0 * u[n - 1] - u[n - 2]) / (2.0 * tau) - g * s * static_cast<double>(h)) / a;
        }
    }
    return u;
}

} // namespace rsfem
