#ifndef TORLAB_CHEB_HPP
#define TORLAB_CHEB_HPP

#include <vector>

namespace torlab::cheb {

/// Chebyshev-Lobatto nodes on [-1,1], descending: x_i = cos(pi i / (n-1)).
const std::vector<double>& lobatto_nodes(int n);

/// Spectral differentiation matrix on the Lobatto nodes, row-major n x n.
const std::vector<double>& diff_matrix(int n);

/// Barycentric weights for the Lobatto nodes.
const std::vector<double>& bary_weights(int n);

/// Chebyshev expansion coefficients a_m of the interpolant through the
/// nodal values (direct cosine sums; n is small here).
std::vector<double> coefficients(const std::vector<double>& values);

/// Barycentric interpolation at t in [-1,1] given nodal values.
double interpolate(const std::vector<double>& values, double t);

}  // namespace torlab::cheb

#endif
