#pragma once

#include "rsfem/cq.hpp"
#include "rsfem/datum.hpp"
#include "rsfem/fem.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rsfem {

enum class Projection { L2, Ritz };

[[nodiscard]] std::string projection_name(Projection p);
[[nodiscard]] Projection parse_projection(const std::string& s);

struct SchemeConfig {
    Scheme scheme = Scheme::SBD;
    double alpha = 0.5;
    double gamma = 1.0;
    double tau = 0.0;
    int N = 0;
    // Keep the j = 0 term of the BE history sum. Dropping it is the default
    // because keeping it limits BE to order 1 - alpha for nonsmooth data.
    bool include_history_origin = false;
    Projection initial_projection = Projection::L2;
    // When false only U^0 and U^N are retained.
    bool keep_snapshots = true;
};

/// Validates ranges; throws InvalidArgument.
void validate(const SchemeConfig& cfg);

/// Interior load vector at time t, i.e. (f(t), phi_i).
using Forcing = std::function<Vector(double t)>;

struct DiscreteTrajectory {
    SchemeConfig config;
    std::vector<double> times;      // t_n for each stored snapshot
    std::vector<Vector> snapshots;  // interior coefficients

    [[nodiscard]] const Vector& initial() const { return snapshots.front(); }
    [[nodiscard]] const Vector& final() const { return snapshots.back(); }
    [[nodiscard]] double final_time() const { return times.back(); }
};

/// U^0 = P_h v or R_h v according to the projection.
[[nodiscard]] Vector initial_vector(const FemSpace& space, const InitialDatum& v, Projection p);

[[nodiscard]] DiscreteTrajectory step_be(const FemSpace& space, const SchemeConfig& cfg, const Vector& v,
                                         const std::optional<Forcing>& f = std::nullopt);
[[nodiscard]] DiscreteTrajectory step_sbd(const FemSpace& space, const SchemeConfig& cfg, const Vector& v,
                                          const std::optional<Forcing>& f = std::nullopt);
/// Dispatches on cfg.scheme.
[[nodiscard]] DiscreteTrajectory run_scheme(const FemSpace& space, const SchemeConfig& cfg, const Vector& v,
                                            const std::optional<Forcing>& f = std::nullopt);

/// The same recurrence for a single mode m u' + ... + s u = 0, i.e. the
/// matrices M and S replaced by scalars. Returns U^0..U^N.
[[nodiscard]] std::vector<double> scalar_recurrence(const SchemeConfig& cfg, double m, double s, double u0);

} // namespace rsfem
