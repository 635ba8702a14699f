#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace coughsel::audio {

/// Precomputed DFT of a fixed length. Radix-2 for powers of two,
/// direct summation otherwise.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n), twiddle_(n) {
    for (std::size_t k = 0; k < n; ++k)
      twiddle_[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    pow2_ = n > 0 && (n & (n - 1)) == 0;
    if (pow2_) {
      bitrev_.resize(n);
      std::size_t bits = 0;
      while ((std::size_t{1} << bits) < n) ++bits;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b)
          if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        bitrev_[i] = r;
      }
    }
  }

  std::size_t size() const { return n_; }

  /// Forward transform of a real sequence of length size().
  std::vector<std::complex<double>> forward(std::span<const double> x) const {
    std::vector<std::complex<double>> out(n_);
    if (!pow2_) {
      for (std::size_t k = 0; k < n_; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t t = 0; t < n_; ++t) acc += x[t] * twiddle_[(k * t) % n_];
        out[k] = acc;
      }
      return out;
    }
    for (std::size_t i = 0; i < n_; ++i) out[bitrev_[i]] = x[i];
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          std::complex<double> t = twiddle_[j * stride] * out[start + j + half];
          out[start + j + half] = out[start + j] - t;
          out[start + j] += t;
        }
      }
    }
    return out;
  }

 private:
  std::size_t n_;
  bool pow2_ = false;
  std::vector<std::complex<double>> twiddle_;
  std::vector<std::size_t> bitrev_;
};

}  // namespace coughsel::audio
