#pragma once

#include "rsfem/datum.hpp"
#include "rsfem/mesh.hpp"
#include "rsfem/sparse.hpp"

#include <span>
#include <vector>

namespace rsfem {

/// Continuous P1 space on a mesh with homogeneous Dirichlet conditions.
///
/// `mass` and `stiffness` act on interior unknowns only; the full matrices
/// (boundary rows and columns kept) are retained for projecting data that are
/// not in the space.
struct FemSpace {
    Mesh mesh;
    std::vector<int> dof_of_node;  // -1 on Dirichlet nodes
    std::vector<int> node_of_dof;
    CsrMatrix mass;
    CsrMatrix stiffness;
    CsrMatrix full_mass;
    CsrMatrix full_stiffness;

    [[nodiscard]] std::size_t n_dof() const noexcept { return node_of_dof.size(); }
    /// Interior coefficients -> nodal values with zeros on the boundary.
    [[nodiscard]] Vector to_nodal(std::span<const double> interior) const;
    /// Nodal values -> interior coefficients (boundary values dropped).
    [[nodiscard]] Vector restrict_to_interior(std::span<const double> nodal) const;
};

/// Exact P1 element integration; throws AssemblyFailure on a degenerate
/// or inverted element.
[[nodiscard]] FemSpace assemble(const Mesh& mesh);

/// Load vector b_i = (v, phi_i) over interior basis functions.
[[nodiscard]] Vector load_vector(const FemSpace& space, const InitialDatum& v);

/// L2 projection P_h v, as interior coefficients.
[[nodiscard]] Vector l2_project(const FemSpace& space, const InitialDatum& v);

/// Ritz projection R_h v; only data with a gradient (smooth_sine, custom)
/// are accepted, others raise UnsupportedDatum.
[[nodiscard]] Vector ritz_project(const FemSpace& space, const InitialDatum& v);

/// Nodal interpolant of f, as interior coefficients.
template <class F>
[[nodiscard]] Vector interpolate(const FemSpace& space, F&& f)
{
    Vector u(space.n_dof());
    for (std::size_t d = 0; d < u.size(); ++d) {
        u[d] = f(space.mesh.nodes[static_cast<std::size_t>(space.node_of_dof[d])]);
    }
    return u;
}

/// A function that can be sampled with its gradient; the reference
/// solutions implement this.
class ExactField {
public:
    virtual ~ExactField() = default;
    virtual void evaluate(std::span<const Point> points, std::span<double> values,
                          std::span<Point> gradients) const = 0;
    /// 1D abscissae where the field is not smooth; quadrature splits there.
    [[nodiscard]] virtual std::vector<double> break_points() const { return {}; }
};

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;
    double l2_normalized = 0.0;
    double h1_normalized = 0.0;
};

/// L2 and H1-seminorm of (exact - numeric) by composite Gauss quadrature:
/// 6 points per 1D (sub)element, the degree-5 7-point rule per triangle.
/// Normalized entries divide by `normalization` (typically ||v||_L2).
[[nodiscard]] ErrorNorms error_norms(const FemSpace& space, std::span<const double> numeric,
                                     const ExactField& exact, double normalization = 1.0);

/// Norms of a discrete function itself: sqrt(u'Mu) and sqrt(u'Su).
[[nodiscard]] double fe_l2_norm(const FemSpace& space, std::span<const double> u);
[[nodiscard]] double fe_h1_seminorm(const FemSpace& space, std::span<const double> u);

} // namespace rsfem
