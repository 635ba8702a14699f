#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <span>

#include "coughsel/audio/mel.hpp"
#include "coughsel/audio/stft.hpp"

namespace coughsel::audio {

struct ContrastConfig {
  std::size_t n_bands = 6;   // octave bands above the base band
  double alpha = 0.02;       // fraction of bins averaged for peak and valley
  double base_hz = 200.0;    // upper edge of the lowest band

  void validate() const {
    if (n_bands < 1) throw InputError("spectral_contrast: n_bands must be at least 1");
    if (!(alpha >= 0.02 && alpha <= 0.2)) throw InputError("spectral_contrast: alpha must lie in [0.02, 0.2]");
    if (!(base_hz > 0.0)) throw InputError("spectral_contrast: base frequency must be positive");
  }
};

/// Half-open bin ranges [first, last) of the n_bands + 1 sub-bands: below
/// base_hz, then octaves base_hz * 2^k, the last one closed at Nyquist.
inline std::vector<std::pair<std::size_t, std::size_t>> contrast_bands(int sample_rate, std::size_t n_fft,
                                                                       const ContrastConfig& cfg) {
  cfg.validate();
  const auto freqs = bin_frequencies(sample_rate, n_fft);
  const double nyquist = sample_rate / 2.0;
  std::vector<double> edges{0.0};
  for (std::size_t b = 0; b <= cfg.n_bands; ++b) edges.push_back(std::min(cfg.base_hz * std::pow(2.0, double(b)), nyquist));
  std::vector<std::pair<std::size_t, std::size_t>> bands;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const bool last = b + 2 == edges.size();
    std::size_t first = freqs.size(), end = 0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      const bool inside = freqs[k] >= edges[b] && (last ? freqs[k] <= edges[b + 1] : freqs[k] < edges[b + 1]);
      if (inside) {
        first = std::min(first, k);
        end = k + 1;
      }
    }
    if (end == 0)
      throw InputError("spectral_contrast: sub-band " + std::to_string(b) + " contains no FFT bins");
    bands.emplace_back(first, end);
  }
  return bands;
}

/// log(mean of top ceil(alpha N)) - log(mean of bottom ceil(alpha N)).
inline double band_contrast(std::span<const double> magnitudes, double alpha) {
  std::vector<double> x(magnitudes.begin(), magnitudes.end());
  std::sort(x.begin(), x.end(), std::greater<>());
  const std::size_t n = x.size();
  const auto take = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(alpha * double(n) - 1e-9)));
  double top = 0.0, bottom = 0.0;
  for (std::size_t i = 0; i < take; ++i) {
    top += x[i];
    bottom += x[n - 1 - i];
  }
  const double peak = std::log(std::max(top / double(take), kLogFloor));
  const double valley = std::log(std::max(bottom / double(take), kLogFloor));
  return peak - valley;
}

/// Frames x (n_bands + 1) contrast values over STFT magnitudes.
inline Eigen::MatrixXd contrast_from_power(const Spectrogram& power, int sample_rate, std::size_t n_fft,
                                           const ContrastConfig& cfg = {}) {
  const auto bands = contrast_bands(sample_rate, n_fft, cfg);
  Eigen::MatrixXd out(power.rows(), static_cast<Eigen::Index>(bands.size()));
  std::vector<double> mag;
  for (Eigen::Index t = 0; t < power.rows(); ++t) {
    for (std::size_t b = 0; b < bands.size(); ++b) {
      mag.clear();
      for (std::size_t k = bands[b].first; k < bands[b].second; ++k)
        mag.push_back(std::sqrt(power(t, static_cast<Eigen::Index>(k))));
      out(t, static_cast<Eigen::Index>(b)) = band_contrast(mag, cfg.alpha);
    }
  }
  return out;
}

inline Eigen::VectorXd spectral_contrast(const AudioClip& clip, const StftConfig& cfg = {},
                                         const ContrastConfig& contrast = {}) {
  return frame_mean(contrast_from_power(stft_power(clip, cfg), clip.sample_rate, cfg.n_fft, contrast));
}

}  // namespace coughsel::audio
