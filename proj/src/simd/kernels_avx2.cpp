// AVX2 variants of the scalar kernels. The functions carry a target
// attribute instead of the translation unit being built with -mavx2, so no
// inline helper instantiated here can leak AVX2 code into callers that run
// on older CPUs.

#include "ldcube/simd/kernels.hpp"

#if defined(LDCUBE_HAVE_AVX2)

#include <immintrin.h>

#include <bit>

#define LDCUBE_AVX2 __attribute__((target("avx2")))

namespace ldcube::simd {
namespace {

LDCUBE_AVX2 inline __m256i tail_mask_pd(std::size_t remaining) {
  const long long r = static_cast<long long>(remaining);
  return _mm256_setr_epi64x(r > 0 ? -1 : 0, r > 1 ? -1 : 0, r > 2 ? -1 : 0, r > 3 ? -1 : 0);
}

LDCUBE_AVX2 inline __m128i tail_mask_epi32(std::size_t remaining) {
  const int r = static_cast<int>(remaining);
  return _mm_setr_epi32(r > 0 ? -1 : 0, r > 1 ? -1 : 0, r > 2 ? -1 : 0, r > 3 ? -1 : 0);
}

// Exact uint32 -> double for four lanes: flip the sign bit, convert as
// signed, add 2^31 back.
LDCUBE_AVX2 inline __m256d u32_to_pd(__m128i x) {
  const __m128i flipped = _mm_xor_si128(x, _mm_set1_epi32(static_cast<int>(0x80000000u)));
  return _mm256_add_pd(_mm256_cvtepi32_pd(flipped), _mm256_set1_pd(2147483648.0));
}

LDCUBE_AVX2 void lattice_rows(std::span<const std::uint32_t> k, std::span<const std::uint32_t> z,
                              std::span<const double> shift, std::span<double> out) {
  const std::size_t dim = z.size();
  const __m256d scale = _mm256_set1_pd(0x1p-32);
  const __m256d one = _mm256_set1_pd(1.0);
  const bool shifted = !shift.empty();
  for (std::size_t i = 0; i < k.size(); ++i) {
    const __m128i ki = _mm_set1_epi32(static_cast<int>(k[i]));
    double* row = out.data() + i * dim;
    for (std::size_t j = 0; j < dim; j += 4) {
      const std::size_t rem = dim - j;
      const __m128i mi = tail_mask_epi32(rem);
      const __m256i md = tail_mask_pd(rem);
      const __m128i zj = _mm_maskload_epi32(reinterpret_cast<const int*>(z.data() + j), mi);
      __m256d v = _mm256_mul_pd(u32_to_pd(_mm_mullo_epi32(ki, zj)), scale);
      if (shifted) {
        v = _mm256_add_pd(v, _mm256_maskload_pd(shift.data() + j, md));
        const __m256d wrap = _mm256_and_pd(_mm256_cmp_pd(v, one, _CMP_GE_OQ), one);
        v = _mm256_sub_pd(v, wrap);
      }
      _mm256_maskstore_pd(row + j, md, v);
    }
  }
}

LDCUBE_AVX2 void digital_rows(std::uint64_t first_index, std::span<const std::uint32_t> directions,
                              std::span<const std::uint32_t> shift,
                              std::span<std::uint32_t> state, std::span<double> out) {
  const std::size_t dim = state.size();
  const std::size_t rows = dim == 0 ? 0 : out.size() / dim;
  const __m256d scale = _mm256_set1_pd(0x1p-32);
  for (std::size_t i = 0; i < rows; ++i) {
    double* row = out.data() + i * dim;
    const int bit = std::countr_zero(first_index + i + 1);
    const std::uint32_t* v =
        bit < 32 ? directions.data() + static_cast<std::size_t>(bit) * dim : nullptr;
    for (std::size_t j = 0; j < dim; j += 4) {
      const std::size_t rem = dim - j;
      const __m128i mi = tail_mask_epi32(rem);
      int* sp = reinterpret_cast<int*>(state.data() + j);
      const __m128i s = _mm_maskload_epi32(sp, mi);
      const __m128i sh = _mm_maskload_epi32(reinterpret_cast<const int*>(shift.data() + j), mi);
      _mm256_maskstore_pd(row + j, tail_mask_pd(rem),
                          _mm256_mul_pd(u32_to_pd(_mm_xor_si128(s, sh)), scale));
      if (v != nullptr) {
        const __m128i d = _mm_maskload_epi32(reinterpret_cast<const int*>(v + j), mi);
        _mm_maskstore_epi32(sp, mi, _mm_xor_si128(s, d));
      }
    }
  }
}

LDCUBE_AVX2 void affine_rows(std::span<const double> u, std::span<const double> lower,
                             std::span<const double> width, std::span<double> out) {
  const std::size_t dim = lower.size();
  const std::size_t rows = dim == 0 ? 0 : u.size() / dim;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < dim; j += 4) {
      const __m256i m = tail_mask_pd(dim - j);
      const __m256d x = _mm256_maskload_pd(u.data() + i * dim + j, m);
      const __m256d scaled = _mm256_mul_pd(x, _mm256_maskload_pd(width.data() + j, m));
      _mm256_maskstore_pd(out.data() + i * dim + j, m,
                          _mm256_add_pd(_mm256_maskload_pd(lower.data() + j, m), scaled));
    }
  }
}

LDCUBE_AVX2 void tent(std::span<double> x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d sign = _mm256_set1_pd(-0.0);
  for (std::size_t i = 0; i < x.size(); i += 4) {
    const __m256i m = tail_mask_pd(x.size() - i);
    const __m256d v = _mm256_maskload_pd(x.data() + i, m);
    const __m256d a = _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_mul_pd(two, v), one));
    _mm256_maskstore_pd(x.data() + i, m, _mm256_sub_pd(one, a));
  }
}

LDCUBE_AVX2 void column_sums(std::span<const double> values, std::span<double> sums) {
  const std::size_t cols = sums.size();
  const std::size_t rows = cols == 0 ? 0 : values.size() / cols;
  for (std::size_t j = 0; j < cols; j += 4) {
    const __m256i m = tail_mask_pd(cols - j);
    __m256d acc = _mm256_maskload_pd(sums.data() + j, m);
    for (std::size_t i = 0; i < rows; ++i) {
      acc = _mm256_add_pd(acc, _mm256_maskload_pd(values.data() + i * cols + j, m));
    }
    _mm256_maskstore_pd(sums.data() + j, m, acc);
  }
}

constexpr Kernels kAvx2{Isa::Avx2, lattice_rows, digital_rows, affine_rows, tent, column_sums};

}  // namespace

const Kernels* avx2_kernels() { return &kAvx2; }

}  // namespace ldcube::simd

#else

namespace ldcube::simd {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace ldcube::simd

#endif
