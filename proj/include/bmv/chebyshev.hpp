#pragma once

#include <vector>

namespace bmv {

// Chebyshev points of the first kind on (-1, 1), ascending. They never touch
// the endpoints, which is where the density jumps.
std::vector<double> chebyshev_points(int count);

// Fejer's first rule: the Clenshaw-Curtis-type weights for chebyshev_points,
// integrating over [-1, 1]. Exact for polynomials of degree < count.
std::vector<double> fejer_weights(int count);

}  // namespace bmv
