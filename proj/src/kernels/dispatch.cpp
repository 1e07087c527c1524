#include <atomic>
#include <cstdlib>
#include <string>

#include "klentropy/error.hpp"
#include "klentropy/kernels.hpp"

namespace klentropy::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(KLENTROPY_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa default_isa() {
  if (const char* env = std::getenv("KLENTROPY_ISA")) {
    const std::string value(env);
    if (value == "scalar") return Isa::scalar;
    if (value == "avx2" && cpu_has_avx2()) return Isa::avx2;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{default_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw DomainError("instruction set '" + std::string(to_string(isa)) + "' is not available");
  }
  active().store(isa, std::memory_order_relaxed);
}

DistanceKernel kernel_for(SpaceKind kind, Isa isa) {
#if defined(KLENTROPY_BUILD_AVX2)
  if (isa == Isa::avx2) {
    return kind == SpaceKind::euclidean ? &avx2::euclidean_distances : &avx2::torus_distances;
  }
#else
  (void)isa;
#endif
  return kind == SpaceKind::euclidean ? &scalar::euclidean_distances : &scalar::torus_distances;
}

void distances(SpaceKind kind, const double* soa, std::size_t stride, int dim, std::size_t begin,
               std::size_t end, const double* query, double* out) {
  kernel_for(kind, active_isa())(soa, stride, dim, begin, end, query, out);
}

}  // namespace klentropy::kernels
