#include "toa/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace toa {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(Index n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Fft: size must be positive");
  buf_ = static_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<size_t>(n)));
  if (!buf_) throw std::bad_alloc();
  auto* raw = reinterpret_cast<fftw_complex*>(buf_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fwd_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) {
    fftw_free(buf_);
    throw std::runtime_error("Fft: plan creation failed");
  }
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(buf_);
}

void Fft::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }

void Fft::backward() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

ComplexArray Fft::forward(const ComplexArray& in) {
  if (in.size() != n_) throw std::invalid_argument("Fft: size mismatch");
  view() = in;
  forward();
  return view();
}

}  // namespace toa
