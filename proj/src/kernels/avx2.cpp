// AVX2 lane kernels, four paths per vector. Built with -mavx2 only and
// selected at runtime; see kernel_available().

#include <immintrin.h>

#include "urnsa/kernels.hpp"

namespace urnsa::detail {
namespace {

template <int K>
inline __m256i rotl(__m256i x) noexcept {
  return _mm256_or_si256(_mm256_slli_epi64(x, K), _mm256_srli_epi64(x, 64 - K));
}

struct Xoshiro4 {
  __m256i s0, s1, s2, s3;

  void load(const std::uint64_t* p0, const std::uint64_t* p1, const std::uint64_t* p2,
            const std::uint64_t* p3) noexcept {
    s0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p0));
    s1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p1));
    s2 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p2));
    s3 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p3));
  }

  void store(std::uint64_t* p0, std::uint64_t* p1, std::uint64_t* p2, std::uint64_t* p3) const noexcept {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(p0), s0);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(p1), s1);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(p2), s2);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(p3), s3);
  }

  __m256i next() noexcept {
    const __m256i result = _mm256_add_epi64(rotl<23>(_mm256_add_epi64(s0, s3)), s0);
    const __m256i t = _mm256_slli_epi64(s1, 17);
    s2 = _mm256_xor_si256(s2, s0);
    s3 = _mm256_xor_si256(s3, s1);
    s1 = _mm256_xor_si256(s1, s2);
    s0 = _mm256_xor_si256(s0, s3);
    s2 = _mm256_xor_si256(s2, t);
    s3 = rotl<45>(s3);
    return result;
  }
};

inline __m256d uniform(__m256i bits) noexcept {
  const __m256i exponent = _mm256_set1_epi64x(0x3FF0000000000000LL);
  const __m256d mant = _mm256_castsi256_pd(_mm256_or_si256(_mm256_srli_epi64(bits, 12), exponent));
  return _mm256_sub_pd(mant, _mm256_set1_pd(1.0));
}

// G independent vectors per iteration hide the compare/add latency chain.
template <int G>
void urn_group(double* W, double* T, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
               std::uint64_t* s3, UrnIncrements inc, std::uint64_t steps) noexcept {
  Xoshiro4 rng[G];
  __m256d w[G];
  __m256d t[G];
  for (int g = 0; g < G; ++g) {
    rng[g].load(s0 + 4 * g, s1 + 4 * g, s2 + 4 * g, s3 + 4 * g);
    w[g] = _mm256_loadu_pd(W + 4 * g);
    t[g] = _mm256_loadu_pd(T + 4 * g);
  }
  const __m256d white_W = _mm256_set1_pd(inc.white_W);
  const __m256d white_T = _mm256_set1_pd(inc.white_T);
  const __m256d black_W = _mm256_set1_pd(inc.black_W);
  const __m256d black_T = _mm256_set1_pd(inc.black_T);

  for (std::uint64_t k = 0; k < steps; ++k) {
    for (int g = 0; g < G; ++g) {
      const __m256d u = uniform(rng[g].next());
      const __m256d white = _mm256_cmp_pd(_mm256_mul_pd(u, t[g]), w[g], _CMP_LT_OQ);
      w[g] = _mm256_add_pd(w[g], _mm256_blendv_pd(black_W, white_W, white));
      t[g] = _mm256_add_pd(t[g], _mm256_blendv_pd(black_T, white_T, white));
    }
  }

  for (int g = 0; g < G; ++g) {
    rng[g].store(s0 + 4 * g, s1 + 4 * g, s2 + 4 * g, s3 + 4 * g);
    _mm256_storeu_pd(W + 4 * g, w[g]);
    _mm256_storeu_pd(T + 4 * g, t[g]);
  }
}

template <int G>
void synthetic_group(double* Z, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2, std::uint64_t* s3,
                     const double* contraction, const double* noise_scale, std::size_t steps) noexcept {
  Xoshiro4 rng[G];
  __m256d z[G];
  for (int g = 0; g < G; ++g) {
    rng[g].load(s0 + 4 * g, s1 + 4 * g, s2 + 4 * g, s3 + 4 * g);
    z[g] = _mm256_loadu_pd(Z + 4 * g);
  }
  const __m256i sign = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));

  for (std::size_t k = 0; k < steps; ++k) {
    const __m256d coef = _mm256_set1_pd(contraction[k]);
    const __m256i scale = _mm256_castpd_si256(_mm256_set1_pd(noise_scale[k]));
    for (int g = 0; g < G; ++g) {
      const __m256i bits = rng[g].next();
      const __m256d v = _mm256_castsi256_pd(_mm256_xor_si256(scale, _mm256_and_si256(bits, sign)));
      z[g] = _mm256_add_pd(_mm256_mul_pd(coef, z[g]), v);
    }
  }

  for (int g = 0; g < G; ++g) {
    rng[g].store(s0 + 4 * g, s1 + 4 * g, s2 + 4 * g, s3 + 4 * g);
    _mm256_storeu_pd(Z + 4 * g, z[g]);
  }
}

}  // namespace

void advance_urn_avx2(double* W, double* T, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
                      std::uint64_t* s3, std::size_t lanes, UrnIncrements inc, std::uint64_t steps) {
  std::size_t j = 0;
  for (; j + 16 <= lanes; j += 16) urn_group<4>(W + j, T + j, s0 + j, s1 + j, s2 + j, s3 + j, inc, steps);
  for (; j + 4 <= lanes; j += 4) urn_group<1>(W + j, T + j, s0 + j, s1 + j, s2 + j, s3 + j, inc, steps);
  if (j < lanes) advance_urn_scalar(W + j, T + j, s0 + j, s1 + j, s2 + j, s3 + j, lanes - j, inc, steps);
}

void advance_synthetic_avx2(double* Z, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
                            std::uint64_t* s3, std::size_t lanes, const double* contraction,
                            const double* noise_scale, std::size_t steps) {
  std::size_t j = 0;
  for (; j + 16 <= lanes; j += 16)
    synthetic_group<4>(Z + j, s0 + j, s1 + j, s2 + j, s3 + j, contraction, noise_scale, steps);
  for (; j + 4 <= lanes; j += 4)
    synthetic_group<1>(Z + j, s0 + j, s1 + j, s2 + j, s3 + j, contraction, noise_scale, steps);
  if (j < lanes)
    advance_synthetic_scalar(Z + j, s0 + j, s1 + j, s2 + j, s3 + j, lanes - j, contraction, noise_scale, steps);
}

}  // namespace urnsa::detail
