#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace rsfem {

using Point = std::array<double, 2>;

/// Conforming simplicial mesh of (0,1) or (0,1)^2.
///
/// 1D elements are segments (2 nodes), 2D elements are counter-clockwise
/// triangles (3 nodes). The y coordinate of 1D nodes is zero.
struct Mesh {
    int dim = 1;
    int subdivisions = 0;
    std::vector<Point> nodes;
    std::vector<int> connectivity;
    std::vector<bool> boundary_mask;
    double h = 0.0;

    [[nodiscard]] int nodes_per_element() const noexcept { return dim + 1; }
    [[nodiscard]] std::size_t num_nodes() const noexcept { return nodes.size(); }
    [[nodiscard]] std::size_t num_elements() const noexcept
    {
        return connectivity.size() / static_cast<std::size_t>(nodes_per_element());
    }
    [[nodiscard]] std::span<const int> element(std::size_t e) const
    {
        const auto npe = static_cast<std::size_t>(nodes_per_element());
        return {connectivity.data() + e * npe, npe};
    }
    [[nodiscard]] std::size_t num_boundary_nodes() const;

    /// Signed length (1D) or signed area (2D) of element e.
    [[nodiscard]] double signed_measure(std::size_t e) const;
};

/// Uniform mesh of (0,1) with K subintervals; requires K >= 2.
[[nodiscard]] Mesh build_interval_mesh(int K);

/// K x K squares of (0,1)^2, each cut along its lower-left to upper-right
/// diagonal. Nodes are ordered lexicographically by (y, x). Requires K >= 2.
[[nodiscard]] Mesh build_square_mesh(int K);

} // namespace rsfem
