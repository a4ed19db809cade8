#include "mmgesture/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace mmg {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// Planning is not thread-safe in FFTW; execution with the new-array API is.
fftw_plan plan_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanHandle> plans;
  std::lock_guard lock(mutex);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second.get();
  std::vector<Complex> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(n, PlanHandle(p));
  return p;
}

}  // namespace

void fft_forward(std::span<Complex> data) {
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(data.size()), buf, buf);
}

void fft_shift(std::span<Complex> data) {
  std::rotate(data.begin(), data.begin() + static_cast<std::ptrdiff_t>((data.size() + 1) / 2),
              data.end());
}

std::vector<double> hann_window(std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (length < 2) return w;
  for (std::size_t i = 0; i < length; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(length - 1));
  }
  return w;
}

}  // namespace mmg
