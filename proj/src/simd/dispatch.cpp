#include <cstdlib>
#include <string>

#include "blockspec/error.hpp"
#include "blockspec/simd/kernels.hpp"

namespace blockspec::simd {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_compiled(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(BLOCKSPEC_HAVE_AVX2)
      return true;
#else
      return false;
#endif
  }
  return false;
}

bool isa_supported(Isa isa) noexcept {
  if (!isa_compiled(isa)) return false;
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa select_isa() {
  if (const char* env = std::getenv("BLOCKSPEC_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
  }
  return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

namespace detail {
#if !defined(BLOCKSPEC_HAVE_AVX2)
const KernelTable& avx2_table() noexcept { return scalar_table(); }
#endif
}  // namespace detail

const KernelTable& kernels(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorKind::invalid_argument,
                "kernel variant '" + std::string(to_string(isa)) + "' not available on this machine");
  }
  return isa == Isa::avx2 ? detail::avx2_table() : detail::scalar_table();
}

const KernelTable& kernels() {
  static const KernelTable& table = kernels(select_isa());
  return table;
}

}  // namespace blockspec::simd
