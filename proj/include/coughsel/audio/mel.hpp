#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "coughsel/audio/stft.hpp"
#include "coughsel/common.hpp"

namespace coughsel::audio {

/// HTK mel scale: 2595 log10(1 + f / 700).
inline double mel_scale(double hz) {
  if (!(hz >= 0.0)) throw InputError("mel_scale: frequency must be non-negative");
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

/// n_mels + 2 band edges (Hz) equally spaced on the mel axis.
inline std::vector<double> mel_band_edges(std::size_t n_mels, double f_min, double f_max) {
  const double lo = mel_scale(f_min);
  const double hi = mel_scale(f_max);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_mels + 1));
  return edges;
}

/// Triangular filters (n_mels x (n_fft/2 + 1)) with unit peak at each centre.
inline Eigen::MatrixXd mel_filterbank(std::size_t n_mels, std::size_t n_fft, int sample_rate, double f_min,
                                      double f_max) {
  if (n_mels < 1) throw InputError("mel_filterbank: n_mels must be at least 1");
  if (sample_rate <= 0) throw InputError("mel_filterbank: sample rate must be positive");
  if (!(f_min >= 0.0 && f_min < f_max && f_max <= sample_rate / 2.0))
    throw InputError("mel_filterbank: need 0 <= f_min < f_max <= sample_rate / 2");
  const auto edges = mel_band_edges(n_mels, f_min, f_max);
  const auto freqs = bin_frequencies(sample_rate, n_fft);
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_mels), static_cast<Eigen::Index>(freqs.size()));
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double left = edges[m], centre = edges[m + 1], right = edges[m + 2];
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      const double f = freqs[k];
      const double rise = (f - left) / (centre - left);
      const double fall = (right - f) / (right - centre);
      fb(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = std::max(0.0, std::min(rise, fall));
    }
  }
  return fb;
}

/// Orthonormal DCT-II basis, n_out rows by n_in columns.
inline Eigen::MatrixXd dct_matrix(std::size_t n_out, std::size_t n_in) {
  Eigen::MatrixXd d(static_cast<Eigen::Index>(n_out), static_cast<Eigen::Index>(n_in));
  const double n = static_cast<double>(n_in);
  for (std::size_t k = 0; k < n_out; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (std::size_t i = 0; i < n_in; ++i)
      d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
          scale * std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n));
  }
  return d;
}

inline Eigen::VectorXd frame_mean(const Eigen::MatrixXd& per_frame) {
  return per_frame.colwise().mean().transpose();
}

inline constexpr double kLogFloor = 1e-10;

struct MelConfig {
  std::size_t n_mels = 128;
  double f_min = 0.0;
  double f_max = 0.0;  // 0 means Nyquist

  double resolved_f_max(int sample_rate) const { return f_max > 0.0 ? f_max : sample_rate / 2.0; }
};

/// Frames x n_mels filterbank energies of an existing power spectrogram.
inline Eigen::MatrixXd mel_from_power(const Spectrogram& power, int sample_rate, std::size_t n_fft,
                                      const MelConfig& mel = {}) {
  const Eigen::MatrixXd fb =
      mel_filterbank(mel.n_mels, n_fft, sample_rate, mel.f_min, mel.resolved_f_max(sample_rate));
  return power * fb.transpose();
}

inline Eigen::MatrixXd mel_spectrogram(const AudioClip& clip, const StftConfig& cfg = {}, const MelConfig& mel = {}) {
  return mel_from_power(stft_power(clip, cfg), clip.sample_rate, cfg.n_fft, mel);
}

/// Frame-mean of the mel spectrogram.
inline Eigen::VectorXd mel_spectrogram_features(const AudioClip& clip, const StftConfig& cfg = {},
                                                const MelConfig& mel = {}) {
  return frame_mean(mel_spectrogram(clip, cfg, mel));
}

/// Frames x n_mfcc cepstra: orthonormal DCT-II of floored natural-log mel energies.
inline Eigen::MatrixXd mfcc_from_mel(const Eigen::MatrixXd& mel_energies, std::size_t n_mfcc) {
  const auto n_mels = static_cast<std::size_t>(mel_energies.cols());
  if (n_mfcc > n_mels) throw InputError("mfcc: n_mfcc cannot exceed n_mels");
  const Eigen::MatrixXd log_mel = mel_energies.unaryExpr([](double x) { return std::log(std::max(x, kLogFloor)); });
  return log_mel * dct_matrix(n_mfcc, n_mels).transpose();
}

inline Eigen::VectorXd mfcc(const AudioClip& clip, const StftConfig& cfg = {}, std::size_t n_mfcc = 40,
                            const MelConfig& mel = {}) {
  return frame_mean(mfcc_from_mel(mel_spectrogram(clip, cfg, mel), n_mfcc));
}

}  // namespace coughsel::audio
