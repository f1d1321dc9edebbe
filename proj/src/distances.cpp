#include "linkinfer/distances.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linkinfer {

DistanceFeatures pairwise_distances(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("distance vectors differ in length");
  const std::size_t d = x.size();
  DistanceFeatures out;

  double dot = 0, xx = 0, yy = 0, sq = 0, cheb = 0, abs_diff = 0, abs_sum = 0, canberra = 0;
  double mean_x = 0, mean_y = 0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = x[i] - y[i];
    dot += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
    sq += diff * diff;
    cheb = std::max(cheb, std::abs(diff));
    abs_diff += std::abs(diff);
    abs_sum += std::abs(x[i] + y[i]);
    const double denom = std::abs(x[i]) + std::abs(y[i]);
    if (denom > 0) canberra += std::abs(diff) / denom;
    mean_x += x[i];
    mean_y += y[i];
  }
  if (d > 0) {
    mean_x /= static_cast<double>(d);
    mean_y /= static_cast<double>(d);
  }
  double cxy = 0, cxx = 0, cyy = 0;
  for (std::size_t i = 0; i < d; ++i) {
    const double a = x[i] - mean_x;
    const double b = y[i] - mean_y;
    cxy += a * b;
    cxx += a * a;
    cyy += b * b;
  }

  double cosine = 0;
  if (xx > 0 && yy > 0) cosine = dot / (std::sqrt(xx) * std::sqrt(yy));
  else out.degenerate = true;
  double correlation = 0;
  if (cxx > 0 && cyy > 0) correlation = cxy / (std::sqrt(cxx) * std::sqrt(cyy));
  else out.degenerate = true;

  out.values = {std::clamp(cosine, -1.0, 1.0),
                std::sqrt(sq),
                std::clamp(correlation, -1.0, 1.0),
                cheb,
                abs_sum > 0 ? abs_diff / abs_sum : 0.0,
                canberra,
                abs_diff,
                sq};
  return out;
}

}  // namespace linkinfer
