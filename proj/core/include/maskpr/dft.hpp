#pragma once

#include <memory>

#include "maskpr/types.hpp"

namespace maskpr {

/// Length-n DFT backed by an FFTW plan.
///
/// Uses the normalization (F*y)(m) = (1/n) sum_{m'} y(m') exp(-2 pi i m m'/n)
/// for the analysis direction, and the plain unnormalized sum
/// y(m') = sum_m c(m) exp(+2 pi i m m'/n) for synthesis, so that
/// synthesize(analyze(y)) == y.
///
/// A Dft instance owns scratch buffers and is not safe to share between
/// threads; construct one per thread.
class Dft {
 public:
  explicit Dft(int n);
  ~Dft();
  Dft(Dft&&) noexcept;
  Dft& operator=(Dft&&) noexcept;
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  int size() const noexcept { return n_; }

  CVector analyze(const CVector& y);
  CVector synthesize(const CVector& c);

 private:
  struct Impl;
  int n_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace maskpr
