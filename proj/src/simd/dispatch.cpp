#include <cstdlib>
#include <string>

#include "ldcube/simd/kernels.hpp"

namespace ldcube::simd {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
      return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const Kernels& active_kernels() {
  static const Kernels& chosen = []() -> const Kernels& {
    const char* forced = std::getenv("LDCUBE_SIMD");
    if (forced != nullptr && std::string(forced) == "scalar") return scalar_kernels();
    if (cpu_supports(Isa::Avx2)) return *avx2_kernels();
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace ldcube::simd
