#pragma once

// Point-to-many distance kernels over structure-of-arrays coordinates.
//
// Coordinates of point i in dimension d live at soa[d * stride + i]. Every
// variant accumulates the squared per-coordinate terms of one point in
// ascending dimension order starting from 0.0 and takes a correctly rounded
// sqrt, so all variants return bitwise identical results (given the build
// disables FMA contraction).

#include <cstddef>
#include <string_view>

#include "klentropy/metric_space.hpp"

namespace klentropy::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

/// The variant used by distances(). Defaults to the widest available one;
/// the environment variable KLENTROPY_ISA=scalar|avx2 overrides the default.
Isa active_isa();

/// Throws DomainError when the variant is unavailable.
void set_active_isa(Isa isa);

using DistanceKernel = void (*)(const double* soa, std::size_t stride, int dim, std::size_t begin,
                                std::size_t end, const double* query, double* out);

/// Writes out[j - begin] = d(query, point j) for j in [begin, end).
void distances(SpaceKind kind, const double* soa, std::size_t stride, int dim, std::size_t begin,
               std::size_t end, const double* query, double* out);

/// Direct access to one variant, for equivalence tests and benchmarks.
DistanceKernel kernel_for(SpaceKind kind, Isa isa);

namespace scalar {
void euclidean_distances(const double* soa, std::size_t stride, int dim, std::size_t begin,
                         std::size_t end, const double* query, double* out);
void torus_distances(const double* soa, std::size_t stride, int dim, std::size_t begin,
                     std::size_t end, const double* query, double* out);
}  // namespace scalar

namespace avx2 {
void euclidean_distances(const double* soa, std::size_t stride, int dim, std::size_t begin,
                         std::size_t end, const double* query, double* out);
void torus_distances(const double* soa, std::size_t stride, int dim, std::size_t begin,
                     std::size_t end, const double* query, double* out);
}  // namespace avx2

}  // namespace klentropy::kernels
