#pragma once

#include <vector>

#include "wavecharge/grid.hpp"

namespace wavecharge {

// Quadrature nodes on the unit sphere: Gauss-Legendre in cos(theta) crossed
// with a uniform azimuthal grid. Weights sum to 4*pi. Exact for spherical
// harmonics up to degree min(2*n_polar-1, n_azimuth-1).
struct SphereQuadrature {
    std::vector<Vec3> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

// n_polar Gauss-Legendre rings, n_azimuth points each (default 600 nodes).
SphereQuadrature make_sphere_quadrature(int n_polar = 15, int n_azimuth = 40);

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace wavecharge
