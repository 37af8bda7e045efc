#include <algorithm>
#include <array>
#include <cmath>

#include "urnsa/error.hpp"
#include "urnsa/kernels.hpp"
#include "urnsa/rng.hpp"

namespace urnsa {
namespace detail {

void advance_urn_scalar(double* W, double* T, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
                        std::uint64_t* s3, std::size_t lanes, UrnIncrements inc, std::uint64_t steps) {
  for (std::size_t j = 0; j < lanes; ++j) {
    Xoshiro256pp rng;
    rng.set_state({s0[j], s1[j], s2[j], s3[j]});
    double w = W[j];
    double t = T[j];
    for (std::uint64_t k = 0; k < steps; ++k) {
      const double u = uniform_from_bits(rng());
      const bool white = u * t < w;
      w += white ? inc.white_W : inc.black_W;
      t += white ? inc.white_T : inc.black_T;
    }
    W[j] = w;
    T[j] = t;
    const auto& st = rng.state();
    s0[j] = st[0];
    s1[j] = st[1];
    s2[j] = st[2];
    s3[j] = st[3];
  }
}

void advance_synthetic_scalar(double* Z, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
                              std::uint64_t* s3, std::size_t lanes, const double* contraction,
                              const double* noise_scale, std::size_t steps) {
  for (std::size_t j = 0; j < lanes; ++j) {
    Xoshiro256pp rng;
    rng.set_state({s0[j], s1[j], s2[j], s3[j]});
    double z = Z[j];
    for (std::size_t k = 0; k < steps; ++k) {
      const double v = signed_by_top_bit(noise_scale[k], rng());
      z = contraction[k] * z + v;
    }
    Z[j] = z;
    const auto& st = rng.state();
    s0[j] = st[0];
    s1[j] = st[1];
    s2[j] = st[2];
    s3[j] = st[3];
  }
}

}  // namespace detail

const char* to_string(KernelKind k) noexcept {
  switch (k) {
    case KernelKind::Auto: return "auto";
    case KernelKind::Scalar: return "scalar";
    case KernelKind::Avx2: return "avx2";
    case KernelKind::Avx512: return "avx512";
  }
  return "unknown";
}

KernelKind kernel_from_string(const std::string& name) {
  if (name == "auto") return KernelKind::Auto;
  if (name == "scalar") return KernelKind::Scalar;
  if (name == "avx2") return KernelKind::Avx2;
  if (name == "avx512") return KernelKind::Avx512;
  throw Error(ErrorCode::Configuration, "unknown kernel '" + name + "'");
}

bool kernel_available(KernelKind k) noexcept {
  switch (k) {
    case KernelKind::Auto:
    case KernelKind::Scalar:
      return true;
#if defined(URNSA_HAVE_X86_KERNELS)
    case KernelKind::Avx2:
      return __builtin_cpu_supports("avx2");
    case KernelKind::Avx512:
      return __builtin_cpu_supports("avx512f");
#else
    case KernelKind::Avx2:
    case KernelKind::Avx512:
      return false;
#endif
  }
  return false;
}

KernelKind resolve_kernel(KernelKind k) {
  if (k == KernelKind::Auto) {
    if (kernel_available(KernelKind::Avx512)) return KernelKind::Avx512;
    if (kernel_available(KernelKind::Avx2)) return KernelKind::Avx2;
    return KernelKind::Scalar;
  }
  if (!kernel_available(k))
    throw Error(ErrorCode::Configuration, std::string("kernel ") + to_string(k) + " is not available here");
  return k;
}

void LaneRng::seed(std::uint64_t master_seed, std::uint64_t first_path) {
  for (std::size_t j = 0; j < size(); ++j) {
    const Xoshiro256pp rng(master_seed, first_path + j);
    const auto& st = rng.state();
    s0[j] = st[0];
    s1[j] = st[1];
    s2[j] = st[2];
    s3[j] = st[3];
  }
}

void advance_urn(UrnLanes lanes, const ReplacementMatrix& m, std::uint64_t steps, KernelKind kind) {
  const std::size_t n = lanes.W.size();
  if (lanes.T.size() != n || lanes.rng == nullptr || lanes.rng->size() < n)
    throw Error(ErrorCode::Configuration, "advance_urn: lane arrays disagree in length");
  LaneRng& r = *lanes.rng;
  const auto inc = detail::urn_increments(m);
  switch (resolve_kernel(kind)) {
#if defined(URNSA_HAVE_X86_KERNELS)
    case KernelKind::Avx512:
      detail::advance_urn_avx512(lanes.W.data(), lanes.T.data(), r.s0.data(), r.s1.data(), r.s2.data(),
                                 r.s3.data(), n, inc, steps);
      return;
    case KernelKind::Avx2:
      detail::advance_urn_avx2(lanes.W.data(), lanes.T.data(), r.s0.data(), r.s1.data(), r.s2.data(),
                               r.s3.data(), n, inc, steps);
      return;
#endif
    default:
      detail::advance_urn_scalar(lanes.W.data(), lanes.T.data(), r.s0.data(), r.s1.data(), r.s2.data(),
                                 r.s3.data(), n, inc, steps);
      return;
  }
}

SyntheticCoefficients synthetic_coefficients(const SyntheticProcess& proc, std::uint64_t k) noexcept {
  const double g = step_divisor(proc.step_family, k);
  return {1.0 - proc.gamma / g, std::sqrt(proc.sigma2) / std::sqrt(g)};
}

void advance_synthetic(SyntheticLanes lanes, const SyntheticProcess& proc, std::uint64_t from,
                       std::uint64_t to, KernelKind kind) {
  const std::size_t n = lanes.Z.size();
  if (lanes.rng == nullptr || lanes.rng->size() < n)
    throw Error(ErrorCode::Configuration, "advance_synthetic: lane arrays disagree in length");
  LaneRng& r = *lanes.rng;
  const KernelKind resolved = resolve_kernel(kind);

  constexpr std::size_t kChunk = 2048;
  std::array<double, kChunk> contraction{};
  std::array<double, kChunk> scale{};
  for (std::uint64_t k0 = from; k0 < to; k0 += kChunk) {
    const auto len = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, to - k0));
    for (std::size_t i = 0; i < len; ++i) {
      const auto cf = synthetic_coefficients(proc, k0 + i);
      contraction[i] = cf.contraction;
      scale[i] = cf.noise_scale;
    }
    switch (resolved) {
#if defined(URNSA_HAVE_X86_KERNELS)
      case KernelKind::Avx512:
        detail::advance_synthetic_avx512(lanes.Z.data(), r.s0.data(), r.s1.data(), r.s2.data(), r.s3.data(), n,
                                         contraction.data(), scale.data(), len);
        break;
      case KernelKind::Avx2:
        detail::advance_synthetic_avx2(lanes.Z.data(), r.s0.data(), r.s1.data(), r.s2.data(), r.s3.data(), n,
                                       contraction.data(), scale.data(), len);
        break;
#endif
      default:
        detail::advance_synthetic_scalar(lanes.Z.data(), r.s0.data(), r.s1.data(), r.s2.data(), r.s3.data(), n,
                                         contraction.data(), scale.data(), len);
        break;
    }
  }
}

}  // namespace urnsa
