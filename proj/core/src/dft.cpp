#include "maskpr/dft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace maskpr {

namespace {
// FFTW planning touches global state.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Dft::Impl {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Impl(int n) {
    in = fftw_alloc_complex(static_cast<std::size_t>(n));
    out = fftw_alloc_complex(static_cast<std::size_t>(n));
    if (in == nullptr || out == nullptr) throw std::bad_alloc();
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (backward != nullptr) fftw_destroy_plan(backward);
    fftw_free(in);
    fftw_free(out);
  }

  CVector run(fftw_plan plan, const CVector& v, double scale) {
    const auto n = v.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      in[i][0] = v[i].real();
      in[i][1] = v[i].imag();
    }
    fftw_execute(plan);
    CVector result(n);
    for (Eigen::Index i = 0; i < n; ++i) result[i] = Complex(out[i][0], out[i][1]) * scale;
    return result;
  }
};

Dft::Dft(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Dft: length must be positive");
  impl_ = std::make_unique<Impl>(n);
}

Dft::~Dft() = default;
Dft::Dft(Dft&&) noexcept = default;
Dft& Dft::operator=(Dft&&) noexcept = default;

CVector Dft::analyze(const CVector& y) {
  if (y.size() != n_) throw std::invalid_argument("Dft::analyze: length mismatch");
  return impl_->run(impl_->forward, y, 1.0 / static_cast<double>(n_));
}

CVector Dft::synthesize(const CVector& c) {
  if (c.size() != n_) throw std::invalid_argument("Dft::synthesize: length mismatch");
  return impl_->run(impl_->backward, c, 1.0);
}

}  // namespace maskpr
