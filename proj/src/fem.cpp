#include "rsfem/fem.hpp"

#include "rsfem/errors.hpp"
#include "rsfem/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

namespace rsfem {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// sin(k)/k
double sinc(double k)
{
    if (std::abs(k) < 1e-3) {
        const double k2 = k * k;
        return 1.0 - k2 / 6.0 + k2 * k2 / 120.0;
    }
    return std::sin(k) / k;
}

// (sin k - k cos k) / k^2 = integral of s sin(k s) over [-1,1], halved
double sinc1(double k)
{
    if (std::abs(k) < 1e-2) {
        const double k2 = k * k;
        return k * (1.0 / 3.0 - k2 / 30.0 + k2 * k2 / 840.0 - k2 * k2 * k2 / 45360.0);
    }
    return (std::sin(k) - k * std::cos(k)) / (k * k);
}

void require_dim(const FemSpace& space, const InitialDatum& v)
{
    if (datum_dimension(v) != space.mesh.dim) {
        throw InvalidArgument("datum " + datum_name(v) + " does not live on a " +
                              std::to_string(space.mesh.dim) + "D mesh");
    }
}

void require_matching_nodes(const FemSpace& space, const CustomNodal& c)
{
    if (c.x.size() != space.mesh.num_nodes()) {
        throw InvalidArgument("custom_coefficients: node count does not match the mesh");
    }
    for (std::size_t i = 0; i < c.x.size(); ++i) {
        if (std::abs(c.x[i] - space.mesh.nodes[i][0]) > 1e-14) {
            throw InvalidArgument("custom_coefficients: abscissae do not match the mesh nodes");
        }
    }
}

// Integral of the hat functions of triangle `tri` over its part with x <= cut.
std::array<double, 3> clipped_hat_integrals(const std::array<Point, 3>& tri, double cut)
{
    std::vector<Point> poly;
    for (int i = 0; i < 3; ++i) {
        const Point& p = tri[i];
        const Point& q = tri[(i + 1) % 3];
        const bool pin = p[0] <= cut;
        const bool qin = q[0] <= cut;
        if (pin) {
            poly.push_back(p);
        }
        if (pin != qin) {
            const double s = (cut - p[0]) / (q[0] - p[0]);
            poly.push_back({cut, p[1] + s * (q[1] - p[1])});
        }
    }
    std::array<double, 3> out{0.0, 0.0, 0.0};
    if (poly.size() < 3) {
        return out;
    }
    const double area2 = (tri[1][0] - tri[0][0]) * (tri[2][1] - tri[0][1]) -
                         (tri[2][0] - tri[0][0]) * (tri[1][1] - tri[0][1]);
    auto bary = [&](const Point& x) {
        const double l1 = ((x[0] - tri[0][0]) * (tri[2][1] - tri[0][1]) - (tri[2][0] - tri[0][0]) * (x[1] - tri[0][1])) / area2;
        const double l2 = ((tri[1][0] - tri[0][0]) * (x[1] - tri[0][1]) - (x[0] - tri[0][0]) * (tri[1][1] - tri[0][1])) / area2;
        return std::array<double, 3>{1.0 - l1 - l2, l1, l2};
    };
    for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        const Point& a = poly[0];
        const Point& b = poly[k];
        const Point& c = poly[k + 1];
        const double area = 0.5 * std::abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
        const Point g{(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0};
        const auto lam = bary(g);
        for (int i = 0; i < 3; ++i) {
            out[i] += area * lam[i];
        }
    }
    return out;
}

// Full nodal load vector for a 1D or 2D datum.
Vector nodal_load(const FemSpace& space, const InitialDatum& v)
{
    const Mesh& mesh = space.mesh;
    Vector b(mesh.num_nodes(), 0.0);
    std::visit(Overloaded{
                   [&](const SmoothSine& s) {
                       const double omega = s.mode * std::numbers::pi;
                       for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
                           const auto el = mesh.element(e);
                           const double a = mesh.nodes[el[0]][0];
                           const double bb = mesh.nodes[el[1]][0];
                           const double c = 0.5 * (a + bb);
                           const double d = 0.5 * (bb - a);
                           const double i0 = 2.0 * std::sin(omega * c) * sinc(omega * d);
                           const double i1 = 2.0 * std::cos(omega * c) * sinc1(omega * d);
                           b[el[0]] += 0.5 * d * (i0 - i1);
                           b[el[1]] += 0.5 * d * (i0 + i1);
                       }
                   },
                   [&](const Step& s) {
                       for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
                           const auto el = mesh.element(e);
                           const double a = mesh.nodes[el[0]][0];
                           const double bb = mesh.nodes[el[1]][0];
                           if (a >= s.cut) {
                               continue;
                           }
                           const double L = bb - a;
                           const double end = std::min(bb, s.cut);
                           b[el[1]] += (end - a) * (end - a) / (2.0 * L);
                           b[el[0]] += (L * L - (bb - end) * (bb - end)) / (2.0 * L);
                       }
                   },
                   [&](const Dirac& d) {
                       for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
                           const auto el = mesh.element(e);
                           const double a = mesh.nodes[el[0]][0];
                           const double bb = mesh.nodes[el[1]][0];
                           if (d.location >= a && d.location < bb) {
                               const double s = (d.location - a) / (bb - a);
                               b[el[0]] += 1.0 - s;
                               b[el[1]] += s;
                               break;
                           }
                       }
                   },
                   [&](const Step2D& s) {
                       for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
                           const auto el = mesh.element(e);
                           const std::array<Point, 3> tri{mesh.nodes[el[0]], mesh.nodes[el[1]], mesh.nodes[el[2]]};
                           const auto w = clipped_hat_integrals(tri, s.cut);
                           for (int i = 0; i < 3; ++i) {
                               b[el[i]] += w[i];
                           }
                       }
                   },
                   [&](const CustomNodal& c) {
                       require_matching_nodes(space, c);
                       space.full_mass.multiply(c.values, b);
                   },
               },
               v);
    return b;
}

} // namespace

Vector FemSpace::to_nodal(std::span<const double> interior) const
{
    if (interior.size() != n_dof()) {
        throw InvalidArgument("FemSpace::to_nodal: expected " + std::to_string(n_dof()) + " coefficients");
    }
    Vector nodal(mesh.num_nodes(), 0.0);
    for (std::size_t d = 0; d < interior.size(); ++d) {
        nodal[static_cast<std::size_t>(node_of_dof[d])] = interior[d];
    }
    return nodal;
}

Vector FemSpace::restrict_to_interior(std::span<const double> nodal) const
{
    if (nodal.size() != mesh.num_nodes()) {
        throw InvalidArgument("FemSpace::restrict_to_interior: expected nodal vector");
    }
    Vector u(n_dof());
    for (std::size_t d = 0; d < u.size(); ++d) {
        u[d] = nodal[static_cast<std::size_t>(node_of_dof[d])];
    }
    return u;
}

FemSpace assemble(const Mesh& mesh)
{
    FemSpace space;
    space.mesh = mesh;
    space.dof_of_node.assign(mesh.num_nodes(), -1);
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
        if (!mesh.boundary_mask[i]) {
            space.dof_of_node[i] = static_cast<int>(space.node_of_dof.size());
            space.node_of_dof.push_back(static_cast<int>(i));
        }
    }
    if (space.node_of_dof.empty()) {
        throw AssemblyFailure("assemble: mesh has no interior nodes");
    }

    std::vector<std::tuple<int, int, double>> mt;
    std::vector<std::tuple<int, int, double>> st;
    const int npe = mesh.nodes_per_element();
    mt.reserve(mesh.num_elements() * static_cast<std::size_t>(npe * npe));
    st.reserve(mt.capacity());

    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto el = mesh.element(e);
        const double meas = mesh.signed_measure(e);
        const double scale = mesh.dim == 1 ? mesh.h : mesh.h * mesh.h;
        if (!(meas > 1e-12 * scale)) {
            throw AssemblyFailure("assemble: degenerate or inverted element " + std::to_string(e));
        }
        if (mesh.dim == 1) {
            const double L = meas;
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    mt.emplace_back(el[a], el[b], L / 6.0 * (a == b ? 2.0 : 1.0));
                    st.emplace_back(el[a], el[b], (a == b ? 1.0 : -1.0) / L);
                }
            }
        } else {
            std::array<std::array<double, 2>, 3> grad{};
            for (int i = 0; i < 3; ++i) {
                const Point& p1 = mesh.nodes[el[(i + 1) % 3]];
                const Point& p2 = mesh.nodes[el[(i + 2) % 3]];
                grad[i] = {(p1[1] - p2[1]) / (2.0 * meas), (p2[0] - p1[0]) / (2.0 * meas)};
            }
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    mt.emplace_back(el[a], el[b], meas / 12.0 * (a == b ? 2.0 : 1.0));
                    st.emplace_back(el[a], el[b], meas * (grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1]));
                }
            }
        }
    }
    space.full_mass = CsrMatrix::from_triplets(mesh.num_nodes(), mt);
    space.full_stiffness = CsrMatrix::from_triplets(mesh.num_nodes(), st);

    auto eliminate = [&](const std::vector<std::tuple<int, int, double>>& trip) {
        std::vector<std::tuple<int, int, double>> inner;
        inner.reserve(trip.size());
        for (const auto& [r, c, val] : trip) {
            const int dr = space.dof_of_node[static_cast<std::size_t>(r)];
            const int dc = space.dof_of_node[static_cast<std::size_t>(c)];
            if (dr >= 0 && dc >= 0) {
                inner.emplace_back(dr, dc, val);
            }
        }
        return CsrMatrix::from_triplets(space.n_dof(), inner);
    };
    space.mass = eliminate(mt);
    space.stiffness = eliminate(st);
    return space;
}

Vector load_vector(const FemSpace& space, const InitialDatum& v)
{
    validate_datum(v);
    require_dim(space, v);
    return space.restrict_to_interior(nodal_load(space, v));
}

Vector l2_project(const FemSpace& space, const InitialDatum& v)
{
    const Vector b = load_vector(space, v);
    return BandedCholesky(space.mass).solve(b);
}

Vector ritz_project(const FemSpace& space, const InitialDatum& v)
{
    validate_datum(v);
    require_dim(space, v);
    Vector c;
    if (const auto* s = std::get_if<SmoothSine>(&v)) {
        // (grad v, grad phi) = (-v'', phi) = omega^2 (v, phi) since phi vanishes on the boundary
        const double omega = s->mode * std::numbers::pi;
        c = space.restrict_to_interior(nodal_load(space, v));
        for (double& ci : c) {
            ci *= omega * omega;
        }
    } else if (const auto* cn = std::get_if<CustomNodal>(&v)) {
        require_matching_nodes(space, *cn);
        Vector full(space.mesh.num_nodes());
        space.full_stiffness.multiply(cn->values, full);
        c = space.restrict_to_interior(full);
    } else {
        throw UnsupportedDatum("ritz_project: datum " + datum_name(v) + " has no gradient representation");
    }
    return BandedCholesky(space.stiffness).solve(c);
}

ErrorNorms error_norms(const FemSpace& space, std::span<const double> numeric, const ExactField& exact,
                       double normalization)
{
    if (numeric.size() != space.n_dof()) {
        throw InvalidArgument("error_norms: coefficient vector has wrong length");
    }
    if (!(normalization > 0.0)) {
        throw InvalidArgument("error_norms: normalization must be positive");
    }
    const Mesh& mesh = space.mesh;
    const Vector nodal = space.to_nodal(numeric);

    std::vector<Point> pts;
    std::vector<double> wts;
    std::vector<double> uh;
    std::vector<Point> guh;

    if (mesh.dim == 1) {
        const GaussRule& g = gauss_legendre(6);
        std::vector<double> breaks = exact.break_points();
        std::sort(breaks.begin(), breaks.end());
        for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
            const auto el = mesh.element(e);
            const double a = mesh.nodes[el[0]][0];
            const double b = mesh.nodes[el[1]][0];
            const double ua = nodal[el[0]];
            const double ub = nodal[el[1]];
            const double slope = (ub - ua) / (b - a);
            std::vector<double> cuts{a};
            for (double x : breaks) {
                if (x > a && x < b) {
                    cuts.push_back(x);
                }
            }
            cuts.push_back(b);
            for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
                const double c = 0.5 * (cuts[s] + cuts[s + 1]);
                const double d = 0.5 * (cuts[s + 1] - cuts[s]);
                for (std::size_t q = 0; q < g.nodes.size(); ++q) {
                    const double x = c + d * g.nodes[q];
                    pts.push_back({x, 0.0});
                    wts.push_back(d * g.weights[q]);
                    uh.push_back(ua + slope * (x - a));
                    guh.push_back({slope, 0.0});
                }
            }
        }
    } else {
        const TriangleRule& r = triangle_rule_deg5();
        for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
            const auto el = mesh.element(e);
            const Point& p0 = mesh.nodes[el[0]];
            const Point& p1 = mesh.nodes[el[1]];
            const Point& p2 = mesh.nodes[el[2]];
            const double area = mesh.signed_measure(e);
            std::array<Point, 3> grad{};
            for (int i = 0; i < 3; ++i) {
                const Point& q1 = mesh.nodes[el[(i + 1) % 3]];
                const Point& q2 = mesh.nodes[el[(i + 2) % 3]];
                grad[i] = {(q1[1] - q2[1]) / (2.0 * area), (q2[0] - q1[0]) / (2.0 * area)};
            }
            const Point gu{nodal[el[0]] * grad[0][0] + nodal[el[1]] * grad[1][0] + nodal[el[2]] * grad[2][0],
                           nodal[el[0]] * grad[0][1] + nodal[el[1]] * grad[1][1] + nodal[el[2]] * grad[2][1]};
            for (std::size_t q = 0; q < r.points.size(); ++q) {
                const double s = r.points[q][0];
                const double t = r.points[q][1];
                pts.push_back({p0[0] + s * (p1[0] - p0[0]) + t * (p2[0] - p0[0]),
                               p0[1] + s * (p1[1] - p0[1]) + t * (p2[1] - p0[1])});
                wts.push_back(2.0 * area * r.weights[q]);
                uh.push_back((1.0 - s - t) * nodal[el[0]] + s * nodal[el[1]] + t * nodal[el[2]]);
                guh.push_back(gu);
            }
        }
    }

    std::vector<double> ue(pts.size());
    std::vector<Point> gue(pts.size());
    exact.evaluate(pts, ue, gue);

    double l2 = 0.0;
    double h1 = 0.0;
    for (std::size_t q = 0; q < pts.size(); ++q) {
        const double e0 = ue[q] - uh[q];
        const double ex = gue[q][0] - guh[q][0];
        const double ey = gue[q][1] - guh[q][1];
        l2 += wts[q] * e0 * e0;
        h1 += wts[q] * (ex * ex + ey * ey);
    }
    ErrorNorms out;
    out.l2 = std::sqrt(l2);
    out.h1 = std::sqrt(h1);
    out.l2_normalized = out.l2 / normalization;
    out.h1_normalized = out.h1 / normalization;
    return out;
}

double fe_l2_norm(const FemSpace& space, std::span<const double> u)
{
    return std::sqrt(std::max(0.0, dot(u, matvec(space.mass, u))));
}

double fe_h1_seminorm(const FemSpace& space, std::span<const double> u)
{
    return std::sqrt(std::max(0.0, dot(u, matvec(space.stiffness, u))));
}

} // namespace rsfem
