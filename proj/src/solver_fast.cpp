#include "march.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <bit>
#include <map>

namespace volterra::detail {

namespace {

// Blocks at or below this size run the direct recursion.
constexpr std::size_t kBaseBlock = 64;
// Parallelize FFT entry loops only when the blocks are large enough to pay for it.
constexpr std::size_t kParallelFftSize = 1024;

using Buffer = std::vector<cplx>;

Eigen::FFT<double>& thread_fft() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

/// Online (relaxed) convolution over the index range [0, bit_ceil(steps)).
///
/// Invariant: when solve_range(lo, hi) starts, acc_(n) for n in [lo, hi) holds
/// sum_{k<lo} B(n-k) x(k). The left half is solved, its contribution is added
/// to the right half's accumulators through one circular convolution of size
/// hi - lo (only lags 1 .. hi-lo-1 are needed, so nothing aliases into the
/// outputs that are kept), then the right half is solved.
class OnlineConvolution {
 public:
  OnlineConvolution(const FlatSystem<cplx>& sys, Index p, const cplx* forcing, cplx* states, std::size_t steps)
      : sys_(sys),
        p_(p),
        forcing_(forcing),
        states_(states),
        steps_(steps),
        bs_(static_cast<std::size_t>(sys.d * p)),
        acc_(steps * bs_, cplx{0.0, 0.0}) {}

  void run() {
    if (steps_ == 0) return;
    solve_range(0, std::bit_ceil(steps_));
  }

 private:
  void solve_range(std::size_t lo, std::size_t hi) {
    if (lo >= steps_) return;
    if (hi - lo <= kBaseBlock) {
      advance_block<cplx>(sys_, p_, forcing_, acc_.data(), states_, lo, std::min(hi, steps_));
      return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    solve_range(lo, mid);
    if (mid < steps_) push_contribution(lo, mid, hi);
    solve_range(mid, hi);
  }

  const std::vector<Buffer>& kernel_spectra(std::size_t size) {
    auto it = spectra_.find(size);
    if (it != spectra_.end()) return it->second;
    const Index d = sys_.d;
    const auto dd = static_cast<std::size_t>(d * d);
    const std::size_t available = std::min(size, sys_.lags());
    std::vector<Buffer> spectra(dd);
#pragma omp parallel for schedule(static) if (dd > 1 && size >= kParallelFftSize)
    for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(dd); ++e) {
      Buffer in(size, cplx{0.0, 0.0});
      for (std::size_t t = 0; t < available; ++t) in[t] = sys_.kernel[t * dd + static_cast<std::size_t>(e)];
      thread_fft().fwd(spectra[static_cast<std::size_t>(e)], in);
    }
    return spectra_.emplace(size, std::move(spectra)).first->second;
  }

  void push_contribution(std::size_t lo, std::size_t mid, std::size_t hi) {
    const std::size_t size = hi - lo;
    const std::size_t left = mid - lo;
    const Index d = sys_.d;
    const auto& kernel = kernel_spectra(size);

    std::vector<Buffer> state_spectra(bs_);
#pragma omp parallel for schedule(static) if (bs_ > 1 && size >= kParallelFftSize)
    for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(bs_); ++e) {
      Buffer in(size, cplx{0.0, 0.0});
      for (std::size_t t = 0; t < left; ++t) in[t] = states_[(lo + t) * bs_ + static_cast<std::size_t>(e)];
      thread_fft().fwd(state_spectra[static_cast<std::size_t>(e)], in);
    }

#pragma omp parallel for schedule(static) if (bs_ > 1 && size >= kParallelFftSize)
    for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(bs_); ++e) {
      const Index i = static_cast<Index>(e) % d;
      const Index c = static_cast<Index>(e) / d;
      Buffer product(size, cplx{0.0, 0.0});
      for (Index j = 0; j < d; ++j) {
        const Buffer& k = kernel[static_cast<std::size_t>(i + j * d)];
        const Buffer& x = state_spectra[static_cast<std::size_t>(j + c * d)];
        for (std::size_t f = 0; f < size; ++f) product[f] += k[f] * x[f];
      }
      Buffer out;
      thread_fft().inv(out, product);
      const std::size_t last = std::min(hi, steps_);
      for (std::size_t n = mid; n < last; ++n) acc_[n * bs_ + static_cast<std::size_t>(e)] += out[n - lo];
    }
  }

  const FlatSystem<cplx>& sys_;
  Index p_;
  const cplx* forcing_;
  cplx* states_;
  std::size_t steps_;
  std::size_t bs_;
  Buffer acc_;
  std::map<std::size_t, std::vector<Buffer>> spectra_;
};

}  // namespace

void march_fast(const FlatSystem<cplx>& sys, Index p, const cplx* forcing, cplx* states, std::size_t steps) {
  OnlineConvolution(sys, p, forcing, states, steps).run();
}

}  // namespace volterra::detail
