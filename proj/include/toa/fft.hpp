#pragma once

#include "toa/types.hpp"

namespace toa {

/// In-place complex FFT of fixed size on an owned, FFTW-aligned buffer.
/// Plans use FFTW_ESTIMATE: planning is then deterministic, which keeps
/// propagation results byte-identical across runs (measured planning picks
/// timing-dependent algorithms).  Transforms are unnormalized; callers fold
/// the 1/n where convenient.  Plan creation is serialized internally
/// (the FFTW planner is not thread-safe); execution is.
class Fft {
 public:
  explicit Fft(Index n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  Index size() const { return n_; }
  Complex* data() { return buf_; }
  const Complex* data() const { return buf_; }
  Eigen::Map<ComplexArray> view() { return {buf_, n_}; }

  void forward();
  void backward();

  /// Out-of-place convenience (copies through the work buffer).
  ComplexArray forward(const ComplexArray& in);

 private:
  Index n_;
  Complex* buf_;
  void* fwd_;
  void* bwd_;
};

}  // namespace toa
