// AVX-512F lane kernels, eight paths per vector. Built with -mavx512f and
// selected at runtime; see kernel_available().

#include <immintrin.h>

#include "urnsa/kernels.hpp"

namespace urnsa::detail {
namespace {

struct Xoshiro8 {
  __m512i s0, s1, s2, s3;

  void load(const std::uint64_t* p0, const std::uint64_t* p1, const std::uint64_t* p2,
            const std::uint64_t* p3) noexcept {
    s0 = _mm512_loadu_si512(p0);
    s1 = _mm512_loadu_si512(p1);
    s2 = _mm512_loadu_si512(p2);
    s3 = _mm512_loadu_si512(p3);
  }

  void store(std::uint64_t* p0, std::uint64_t* p1, std::uint64_t* p2, std::uint64_t* p3) const noexcept {
    _mm512_storeu_si512(p0, s0);
    _mm512_storeu_si512(p1, s1);
    _mm512_storeu_si512(p2, s2);
    _mm512_storeu_si512(p3, s3);
  }

  __m512i next() noexcept {
    const __m512i result = _mm512_add_epi64(_mm512_rol_epi64(_mm512_add_epi64(s0, s3), 23), s0);
    const __m512i t = _mm512_slli_epi64(s1, 17);
    s2 = _mm512_xor_si512(s2, s0);
    s3 = _mm512_xor_si512(s3, s1);
    s1 = _mm512_xor_si512(s1, s2);
    s0 = _mm512_xor_si512(s0, s3);
    s2 = _mm512_xor_si512(s2, t);
    s3 = _mm512_rol_epi64(s3, 45);
    return result;
  }
};

inline __m512d uniform(__m512i bits) noexcept {
  const __m512i exponent = _mm512_set1_epi64(0x3FF0000000000000LL);
  const __m512d mant = _mm512_castsi512_pd(_mm512_or_si512(_mm512_srli_epi64(bits, 12), exponent));
  return _mm512_sub_pd(mant, _mm512_set1_pd(1.0));
}

template <int G>
void urn_group(double* W, double* T, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
               std::uint64_t* s3, UrnIncrements inc, std::uint64_t steps) noexcept {
  Xoshiro8 rng[G];
  __m512d w[G];
  __m512d t[G];
  for (int g = 0; g < G; ++g) {
    rng[g].load(s0 + 8 * g, s1 + 8 * g, s2 + 8 * g, s3 + 8 * g);
    w[g] = _mm512_loadu_pd(W + 8 * g);
    t[g] = _mm512_loadu_pd(T + 8 * g);
  }
  const __m512d white_W = _mm512_set1_pd(inc.white_W);
  const __m512d white_T = _mm512_set1_pd(inc.white_T);
  const __m512d black_W = _mm512_set1_pd(inc.black_W);
  const __m512d black_T = _mm512_set1_pd(inc.black_T);

  for (std::uint64_t k = 0; k < steps; ++k) {
    for (int g = 0; g < G; ++g) {
      const __m512d u = uniform(rng[g].next());
      const __mmask8 white = _mm512_cmp_pd_mask(_mm512_mul_pd(u, t[g]), w[g], _CMP_LT_OQ);
      w[g] = _mm512_add_pd(w[g], _mm512_mask_blend_pd(white, black_W, white_W));
      t[g] = _mm512_add_pd(t[g], _mm512_mask_blend_pd(white, black_T, white_T));
    }
  }

  for (int g = 0; g < G; ++g) {
    rng[g].store(s0 + 8 * g, s1 + 8 * g, s2 + 8 * g, s3 + 8 * g);
    _mm512_storeu_pd(W + 8 * g, w[g]);
    _mm512_storeu_pd(T + 8 * g, t[g]);
  }
}

template <int G>
void synthetic_group(double* Z, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2, std::uint64_t* s3,
                     const double* contraction, const double* noise_scale, std::size_t steps) noexcept {
  Xoshiro8 rng[G];
  __m512d z[G];
  for (int g = 0; g < G; ++g) {
    rng[g].load(s0 + 8 * g, s1 + 8 * g, s2 + 8 * g, s3 + 8 * g);
    z[g] = _mm512_loadu_pd(Z + 8 * g);
  }
  const __m512i sign = _mm512_set1_epi64(static_cast<long long>(0x8000000000000000ULL));

  for (std::size_t k = 0; k < steps; ++k) {
    const __m512d coef = _mm512_set1_pd(contraction[k]);
    const __m512i scale = _mm512_castpd_si512(_mm512_set1_pd(noise_scale[k]));
    for (int g = 0; g < G; ++g) {
      const __m512i bits = rng[g].next();
      const __m512d v = _mm512_castsi512_pd(_mm512_xor_si512(scale, _mm512_and_si512(bits, sign)));
      z[g] = _mm512_add_pd(_mm512_mul_pd(coef, z[g]), v);
    }
  }

  for (int g = 0; g < G; ++g) {
    rng[g].store(s0 + 8 * g, s1 + 8 * g, s2 + 8 * g, s3 + 8 * g);
    _mm512_storeu_pd(Z + 8 * g, z[g]);
  }
}

}  // namespace

void advance_urn_avx512(double* W, double* T, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
                        std::uint64_t* s3, std::size_t lanes, UrnIncrements inc, std::uint64_t steps) {
  std::size_t j = 0;
  for (; j + 32 <= lanes; j += 32) urn_group<4>(W + j, T + j, s0 + j, s1 + j, s2 + j, s3 + j, inc, steps);
  for (; j + 8 <= lanes; j += 8) urn_group<1>(W + j, T + j, s0 + j, s1 + j, s2 + j, s3 + j, inc, steps);
  if (j < lanes) advance_urn_scalar(W + j, T + j, s0 + j, s1 + j, s2 + j, s3 + j, lanes - j, inc, steps);
}

void advance_synthetic_avx512(double* Z, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
                              std::uint64_t* s3, std::size_t lanes, const double* contraction,
                              const double* noise_scale, std::size_t steps) {
  std::size_t j = 0;
  for (; j + 32 <= lanes; j += 32)
    synthetic_group<4>(Z + j, s0 + j, s1 + j, s2 + j, s3 + j, contraction, noise_scale, steps);
  for (; j + 8 <= lanes; j += 8)
    synthetic_group<1>(Z + j, s0 + j, s1 + j, s2 + j, s3 + j, contraction, noise_scale, steps);
  if (j < lanes)
    advance_synthetic_scalar(Z + j, s0 + j, s1 + j, s2 + j, s3 + j, lanes - j, contraction, noise_scale, steps);
}

}  // namespace urnsa::detail
