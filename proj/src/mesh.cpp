#include "rsfem/mesh.hpp"

#include "rsfem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rsfem {

std::size_t Mesh::num_boundary_nodes() const
{
    return static_cast<std::size_t>(std::count(boundary_mask.begin(), boundary_mask.end(), true));
}

double Mesh::signed_measure(std::size_t e) const
{
    const auto el = element(e);
    if (dim == 1) {
        return nodes[el[1]][0] - nodes[el[0]][0];
    }
    const Point& a = nodes[el[0]];
    const Point& b = nodes[el[1]];
    const Point& c = nodes[el[2]];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

Mesh build_interval_mesh(int K)
{
    if (K < 2) {
        throw InvalidArgument("build_interval_mesh: K must be >= 2, got " + std::to_string(K));
    }
    Mesh mesh;
    mesh.dim = 1;
    mesh.subdivisions = K;
    mesh.h = 1.0 / K;
    mesh.nodes.resize(static_cast<std::size_t>(K) + 1);
    mesh.boundary_mask.assign(static_cast<std::size_t>(K) + 1, false);
    for (int i = 0; i <= K; ++i) {
        mesh.nodes[i] = {static_cast<double>(i) / K, 0.0};
    }
    mesh.boundary_mask.front() = true;
    mesh.boundary_mask.back() = true;
    mesh.connectivity.reserve(2 * static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
        mesh.connectivity.push_back(i);
        mesh.connectivity.push_back(i + 1);
    }
    return mesh;
}

Mesh build_square_mesh(int K)
{
    if (K < 2) {
        throw InvalidArgument("build_square_mesh: K must be >= 2, got " + std::to_string(K));
    }
    const int n1 = K + 1;
    auto id = [n1](int i, int j) { return i + n1 * j; };

    Mesh mesh;
    mesh.dim = 2;
    mesh.subdivisions = K;
    mesh.h = std::sqrt(2.0) / K;
    mesh.nodes.resize(static_cast<std::size_t>(n1) * n1);
    mesh.boundary_mask.assign(mesh.nodes.size(), false);
    for (int j = 0; j <= K; ++j) {
        for (int i = 0; i <= K; ++i) {
            mesh.nodes[id(i, j)] = {static_cast<double>(i) / K, static_cast<double>(j) / K};
            mesh.boundary_mask[id(i, j)] = (i == 0 || j == 0 || i == K || j == K);
        }
    }
    mesh.connectivity.reserve(6 * static_cast<std::size_t>(K) * K);
    for (int j = 0; j < K; ++j) {
        for (int i = 0; i < K; ++i) {
            // lower-right triangle, then upper-left; both counter-clockwise
            mesh.connectivity.insert(mesh.connectivity.end(), {id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            mesh.connectivity.insert(mesh.connectivity.end(), {id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return mesh;
}

} // namespace rsfem
