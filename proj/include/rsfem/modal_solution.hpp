#pragma once

#include "rsfem/datum.hpp"
#include "rsfem/fem.hpp"
#include "rsfem/mode_factor.hpp"
#include "rsfem/oracle.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace rsfem {

struct ModalOptions {
    double l2_tol = 1e-10;
    double h1_tol = 1e-6;
    int max_modes_1d = 10000;
    // On the square the cap applies per direction.
    double l2_tol_2d = 1e-8;
    double h1_tol_2d = 1e-5;
    int max_modes_2d = 2000;
    // A 2D tail bound is also accepted once it falls below this fraction of
    // the retained series' own norm (L2 and H1 checked separately).
    double rel_tol_2d = 1e-4;
    // Split off factor(infinity) * A^{-1} v in closed form for the step and
    // Dirac data so the remaining series decays two orders faster.
    bool subtract_singular = true;
};

/// The reference solution at one time, as a truncated eigenfunction series.
class ModalSnapshot final : public ExactField {
public:
    void evaluate(std::span<const Point> points, std::span<double> values,
                  std::span<Point> gradients) const override;
    [[nodiscard]] std::vector<double> break_points() const override;

    [[nodiscard]] int truncation() const noexcept { return J_; }
    [[nodiscard]] double l2_bound() const noexcept { return l2_bound_; }
    [[nodiscard]] double h1_bound() const noexcept { return h1_bound_; }
    [[nodiscard]] bool subtracted() const noexcept { return subtract_; }
    [[nodiscard]] double time() const noexcept { return t_; }
    /// sqrt(sum (c_j f_j)^2) over the retained modes.
    [[nodiscard]] double l2_norm() const noexcept { return l2_norm_; }
    [[nodiscard]] std::pair<double, Point> at(const Point& x) const;

private:
    friend class ModalSolution;
    ModalSnapshot() = default;

    void evaluate_1d(std::span<const Point> points, std::span<double> values, std::span<Point> gradients) const;
    void evaluate_2d(std::span<const Point> points, std::span<double> values, std::span<Point> gradients) const;

    InitialDatum datum_;
    int dim_ = 1;
    int J_ = 0;
    double t_ = 0.0;
    bool subtract_ = false;
    double limit_ = 0.0;
    std::vector<double> amp_;  // 1D: amp_[j-1]; 2D: amp_[(j-1) J + (k-1)]
    double l2_bound_ = 0.0;
    double h1_bound_ = 0.0;
    double l2_norm_ = 0.0;
};

/// Eigenfunction expansion of the solution for a fixed datum and model
/// parameters; snapshots are taken at exact or time-discrete factors.
class ModalSolution {
public:
    ModalSolution(InitialDatum v, double alpha, double gamma, ModalOptions opts = {});

    [[nodiscard]] const InitialDatum& datum() const noexcept { return v_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] Domain domain() const noexcept { return dim_ == 1 ? Domain::Interval : Domain::Square; }
    [[nodiscard]] double datum_norm() const;

    /// Exact solution u(., t); t must be positive.
    [[nodiscard]] ModalSnapshot exact_at(double t) const;
    /// Modes advanced by the given factor. Throws TruncationFailure when the
    /// tail bound cannot meet the tolerances within the mode cap.
    [[nodiscard]] ModalSnapshot at(const ModeFactor& factor) const;

private:
    [[nodiscard]] ModalSnapshot build_1d(const ModeFactorTable& table) const;
    [[nodiscard]] ModalSnapshot build_2d(const ModeFactorTable& table) const;

    InitialDatum v_;
    double alpha_;
    double gamma_;
    ModalOptions opts_;
    int dim_;
};

/// u(x, t) and its gradient.
[[nodiscard]] std::pair<double, Point> exact_solution(const ModalSolution& ms, const Point& x, double t);

/// Errors of a discrete solution against the exact solution at time t > 0.
[[nodiscard]] ErrorNorms error_norms(const FemSpace& space, std::span<const double> numeric,
                                     const ModalSolution& exact, double t);

} // namespace rsfem
