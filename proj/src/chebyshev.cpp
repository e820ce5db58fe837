#include "bmv/chebyshev.hpp"

#include "bmv/error.hpp"

#include <cmath>
#include <numbers>

namespace bmv {

namespace {

double angle(int i, int count) {
  // Ascending order: i = 0 is the point nearest -1.
  return std::numbers::pi * (2.0 * (count - 1 - i) + 1.0) / (2.0 * count);
}

}  // namespace

std::vector<double> chebyshev_points(int count) {
  if (count < 1) throw Error(ErrorKind::parameter, "need at least one Chebyshev point");
  std::vector<double> x(count);
  for (int i = 0; i < count; ++i) x[i] = std::cos(angle(i, count));
  if (count % 2 == 1) x[count / 2] = 0.0;
  return x;
}

std::vector<double> fejer_weights(int count) {
  if (count < 1) throw Error(ErrorKind::parameter, "need at least one Chebyshev point");
  std::vector<double> w(count);
  for (int i = 0; i < count; ++i) {
    const double theta = angle(i, count);
    double sum = 0.0;
    for (int j = 1; j <= count / 2; ++j) sum += std::cos(2.0 * j * theta) / (4.0 * j * j - 1.0);
    w[i] = 2.0 / count * (1.0 - 2.0 * sum);
  }
  return w;
}

}  // namespace bmv
