#include <algorithm>
#include <cmath>

#include "klentropy/kernels.hpp"

namespace klentropy::kernels::scalar {

void euclidean_distances(const double* soa, std::size_t stride, int dim, std::size_t begin,
                         std::size_t end, const double* query, double* out) {
  for (std::size_t j = begin; j < end; ++j) {
    double acc = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double diff = soa[static_cast<std::size_t>(d) * stride + j] - query[d];
      acc += diff * diff;
    }
    out[j - begin] = std::sqrt(acc);
  }
}

void torus_distances(const double* soa, std::size_t stride, int dim, std::size_t begin,
                     std::size_t end, const double* query, double* out) {
  for (std::size_t j = begin; j < end; ++j) {
    double acc = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double diff = std::abs(soa[static_cast<std::size_t>(d) * stride + j] - query[d]);
      const double m = std::min(diff, 1.0 - diff);
      acc += m * m;
    }
    out[j - begin] = std::sqrt(acc);
  }
}

}  // namespace klentropy::kernels::scalar
