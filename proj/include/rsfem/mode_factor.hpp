#pragma once

#include "rsfem/stepper.hpp"

#include <string>
#include <vector>

namespace rsfem {

/// Time factor multiplying a single eigenmode at the observation time:
/// either the exact u(t; lambda) or the value U^N(lambda) of a time stepping
/// scheme applied to the scalar mode.
///
/// Evaluation is organised in eps = 1/lambda. When lambda f(lambda) has a
/// finite limit as lambda -> infinity, scaled(eps) returns lambda f, which is
/// smooth up to eps = 0; otherwise scaled(eps) returns f itself.
class ModeFactor {
public:
    [[nodiscard]] static ModeFactor exact(double alpha, double gamma, double t);
    [[nodiscard]] static ModeFactor discrete(const SchemeConfig& cfg);

    [[nodiscard]] bool is_exact() const noexcept { return exact_; }
    [[nodiscard]] bool has_limit() const noexcept;
    [[nodiscard]] double time() const noexcept { return t_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] const SchemeConfig& scheme() const noexcept { return cfg_; }

    [[nodiscard]] double scaled(double eps) const;
    [[nodiscard]] double value(double lambda) const;

    /// Length scale below which eps-dependence is mild: t for the exact
    /// factor, tau for a scheme.
    [[nodiscard]] double scale() const noexcept;
    [[nodiscard]] std::string describe() const;

private:
    ModeFactor() = default;
    [[nodiscard]] double discrete_scaled(double eps) const;

    bool exact_ = true;
    double alpha_ = 0.5;
    double gamma_ = 1.0;
    double t_ = 0.0;
    SchemeConfig cfg_{};
    std::vector<double> w_;  // CQ weights including tau^-alpha
};

/// ModeFactor with cached evaluation for large lambda: below lambda0 the
/// factor is evaluated directly, above it a Chebyshev interpolant in eps on
/// [0, 1/lambda0] is used. lambda0 is lowered until the interpolant matches
/// direct values at check points.
class ModeFactorTable {
public:
    explicit ModeFactorTable(ModeFactor factor);

    [[nodiscard]] const ModeFactor& factor() const noexcept { return factor_; }
    [[nodiscard]] double lambda0() const noexcept { return 1.0 / eps_max_; }
    [[nodiscard]] double scaled(double eps) const;
    [[nodiscard]] double value(double lambda) const;
    /// scaled(0)
    [[nodiscard]] double limit() const noexcept { return limit_; }

private:
    [[nodiscard]] double interpolate(double eps) const;

    ModeFactor factor_;
    double eps_max_ = 0.0;
    double limit_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> values_;
};

} // namespace rsfem
