#pragma once

// Lane kernels: advance many independent paths in structure-of-arrays form.
// Every variant performs the same IEEE operations in the same order per lane
// (the project builds with -ffp-contract=off), so results are bit-identical
// across Scalar, Avx2 and Avx512.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "urnsa/polya_urn.hpp"
#include "urnsa/sa_core.hpp"

namespace urnsa {

enum class KernelKind { Auto, Scalar, Avx2, Avx512 };

const char* to_string(KernelKind k) noexcept;
KernelKind kernel_from_string(const std::string& name);

/// Whether this CPU and build can run the given kernel. Auto and Scalar are always available.
bool kernel_available(KernelKind k) noexcept;

/// Auto becomes the widest available variant; anything else is checked and returned.
KernelKind resolve_kernel(KernelKind k);

/// xoshiro256++ states of many lanes, one array per state word.
struct LaneRng {
  std::vector<std::uint64_t> s0, s1, s2, s3;

  LaneRng() = default;
  explicit LaneRng(std::size_t lanes) : s0(lanes), s1(lanes), s2(lanes), s3(lanes) {}

  std::size_t size() const noexcept { return s0.size(); }

  /// Seeds lane j with the stream of path first_path + j.
  void seed(std::uint64_t master_seed, std::uint64_t first_path);
};

/// Lane views of urn paths: white count W and total T per lane.
struct UrnLanes {
  std::span<double> W;
  std::span<double> T;
  LaneRng* rng = nullptr;
};

struct SyntheticLanes {
  std::span<double> Z;
  LaneRng* rng = nullptr;
};

/// Performs `steps` draws on every lane: white iff u * T < W.
void advance_urn(UrnLanes lanes, const ReplacementMatrix& m, std::uint64_t steps, KernelKind kind);

/// Applies Z <- (1 - Gamma/g_k) Z + sigma r / sqrt(g_k), r = +-1, for k = from .. to-1.
void advance_synthetic(SyntheticLanes lanes, const SyntheticProcess& proc, std::uint64_t from,
                       std::uint64_t to, KernelKind kind);

/// Per-step coefficients shared by all synthetic kernels.
struct SyntheticCoefficients {
  double contraction;  // 1 - Gamma/g_k
  double noise_scale;  // sigma / sqrt(g_k)
};

SyntheticCoefficients synthetic_coefficients(const SyntheticProcess& proc, std::uint64_t k) noexcept;

namespace detail {

struct UrnIncrements {
  double white_W, white_T, black_W, black_T;
};

inline UrnIncrements urn_increments(const ReplacementMatrix& m) noexcept {
  return {m.a, m.a + m.b, m.c, m.c + m.d};
}

void advance_urn_scalar(double* W, double* T, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
                        std::uint64_t* s3, std::size_t lanes, UrnIncrements inc, std::uint64_t steps);
void advance_urn_avx2(double* W, double* T, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
                      std::uint64_t* s3, std::size_t lanes, UrnIncrements inc, std::uint64_t steps);
void advance_urn_avx512(double* W, double* T, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
                        std::uint64_t* s3, std::size_t lanes, UrnIncrements inc, std::uint64_t steps);

void advance_synthetic_scalar(double* Z, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
                              std::uint64_t* s3, std::size_t lanes, const double* contraction,
                              const double* noise_scale, std::size_t steps);
void advance_synthetic_avx2(double* Z, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
                              std::uint64_t* s3, std::size_t lanes, const double* contraction,
                              const double* noise_scale, std::size_t steps);
void advance_synthetic_avx512(double* Z, std::uint64_t* s0, std::uint64_t* s1, std::uint64_t* s2,
                              std::uint64_t* s3, std::size_t lanes, const double* contraction,
                              const double* noise_scale, std::size_t steps);

}  // namespace detail
}  // namespace urnsa
