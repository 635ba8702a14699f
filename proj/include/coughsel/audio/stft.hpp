#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "coughsel/audio/fft.hpp"
#include "coughsel/audio/wav.hpp"
#include "coughsel/common.hpp"

namespace coughsel::audio {

/// Frame length and hop in samples; the window is always a periodic Hann
/// of length n_fft.
struct StftConfig {
  std::size_t n_fft = 2048;
  std::size_t hop = 512;

  std::size_t n_bins() const { return n_fft / 2 + 1; }

  void validate() const {
    if (n_fft < 2) throw InputError("stft: n_fft must be at least 2");
    if (hop == 0 || hop > n_fft) throw InputError("stft: hop must satisfy 0 < hop <= n_fft");
  }
};

/// Frames x bins, row t holds frame t.
using Spectrogram = Eigen::MatrixXd;

inline std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

inline std::size_t frame_count(std::size_t len, std::size_t hop) { return 1 + (len + hop - 1) / hop; }

/// Sample at signal index p after centre padding of `pad` samples per side.
/// Reflection (without edge repeat) inside the padding, zero beyond it.
inline double padded_sample(const std::vector<double>& s, long p, long pad) {
  const auto len = static_cast<long>(s.size());
  if (p >= 0 && p < len) return s[static_cast<std::size_t>(p)];
  if (p < -pad || p > len - 1 + pad || len < 2) return 0.0;
  const long period = 2 * (len - 1);
  long q = p % period;
  if (q < 0) q += period;
  if (q >= len) q = period - q;
  return s[static_cast<std::size_t>(q)];
}

/// Power spectrogram |FFT(hann * frame)|^2 of centred frames.
inline Spectrogram stft_power(const AudioClip& clip, const StftConfig& cfg = {}) {
  validate(clip);
  cfg.validate();
  const std::size_t frames = frame_count(clip.size(), cfg.hop);
  const std::size_t bins = cfg.n_bins();
  const auto pad = static_cast<long>(cfg.n_fft / 2);
  const auto window = hann_window(cfg.n_fft);
  const FftPlan plan(cfg.n_fft);
  Spectrogram power(frames, bins);
  std::vector<double> buf(cfg.n_fft);
  for (std::size_t t = 0; t < frames; ++t) {
    const long start = static_cast<long>(t * cfg.hop) - pad;
    for (std::size_t i = 0; i < cfg.n_fft; ++i)
      buf[i] = window[i] * padded_sample(clip.samples, start + static_cast<long>(i), pad);
    const auto spec = plan.forward(buf);
    for (std::size_t k = 0; k < bins; ++k) power(t, k) = std::norm(spec[k]);
  }
  return power;
}

/// Power spectrogram plus the reassigned (instantaneous) frequency of every
/// bin, in Hz, from the phase derivative of a second transform taken with the
/// time-derivative of the window. Bins with negligible power keep their
/// nominal centre frequency.
struct ReassignedSpectrogram {
  Spectrogram power;
  Eigen::MatrixXd frequency;
};

inline ReassignedSpectrogram stft_reassigned(const AudioClip& clip, const StftConfig& cfg = {}) {
  validate(clip);
  cfg.validate();
  const std::size_t frames = frame_count(clip.size(), cfg.hop);
  const std::size_t bins = cfg.n_bins();
  const auto pad = static_cast<long>(cfg.n_fft / 2);
  const double n = static_cast<double>(cfg.n_fft);
  const auto window = hann_window(cfg.n_fft);
  std::vector<double> dwindow(cfg.n_fft);
  for (std::size_t i = 0; i < cfg.n_fft; ++i)
    dwindow[i] = std::numbers::pi / n * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / n);
  const FftPlan plan(cfg.n_fft);
  ReassignedSpectrogram out{Spectrogram(frames, bins), Eigen::MatrixXd(frames, bins)};
  std::vector<double> raw(cfg.n_fft), buf(cfg.n_fft), dbuf(cfg.n_fft);
  for (std::size_t t = 0; t < frames; ++t) {
    const long start = static_cast<long>(t * cfg.hop) - pad;
    for (std::size_t i = 0; i < cfg.n_fft; ++i) {
      raw[i] = padded_sample(clip.samples, start + static_cast<long>(i), pad);
      buf[i] = window[i] * raw[i];
      dbuf[i] = dwindow[i] * raw[i];
    }
    const auto spec = plan.forward(buf);
    const auto dspec = plan.forward(dbuf);
    double peak = 0.0;
    for (std::size_t k = 0; k < bins; ++k) peak = std::max(peak, std::norm(spec[k]));
    for (std::size_t k = 0; k < bins; ++k) {
      const double p = std::norm(spec[k]);
      out.power(t, k) = p;
      double offset = 0.0;  // in bins
      if (p > 1e-14 * peak && p > 0.0) offset = -(n / (2.0 * std::numbers::pi)) * (dspec[k] * std::conj(spec[k])).imag() / p;
      out.frequency(t, k) = (static_cast<double>(k) + offset) * clip.sample_rate / n;
    }
  }
  return out;
}

/// Centre frequency in Hz of every STFT bin.
inline std::vector<double> bin_frequencies(int sample_rate, std::size_t n_fft) {
  std::vector<double> f(n_fft / 2 + 1);
  for (std::size_t k = 0; k < f.size(); ++k)
    f[k] = static_cast<double>(k) * sample_rate / static_cast<double>(n_fft);
  return f;
}

}  // namespace coughsel::audio
