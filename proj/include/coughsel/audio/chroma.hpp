#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>

#include "coughsel/audio/mel.hpp"
#include "coughsel/audio/stft.hpp"

namespace coughsel::audio {

inline constexpr std::size_t kChromaBins = 12;

/// Pitch class (C = 0 ... B = 11) of the equal-tempered semitone nearest to `hz`.
inline int pitch_class(double hz) {
  const double midi = 69.0 + 12.0 * std::log2(hz / 440.0);
  const long note = std::lround(midi);
  return static_cast<int>(((note % 12) + 12) % 12);
}

/// Frames x 12 chroma. Each bin's power goes to the pitch class nearest its
/// reassigned frequency; bins at or below 0 Hz and the DC bin carry no pitch.
/// Every frame is scaled by its maximum (all-zero frames stay zero).
inline Eigen::MatrixXd chroma_from_spectrogram(const ReassignedSpectrogram& spec) {
  const Eigen::Index bins = spec.power.cols();
  Eigen::MatrixXd chroma = Eigen::MatrixXd::Zero(spec.power.rows(), kChromaBins);
  for (Eigen::Index t = 0; t < spec.power.rows(); ++t) {
    for (Eigen::Index k = 1; k < bins; ++k) {
      const double f = spec.frequency(t, k);
      if (f > 0.0) chroma(t, pitch_class(f)) += spec.power(t, k);
    }
    const double peak = chroma.row(t).maxCoeff();
    if (peak > 0.0) chroma.row(t) /= peak;
  }
  return chroma;
}

inline Eigen::VectorXd chromagram(const AudioClip& clip, const StftConfig& cfg = {}) {
  return frame_mean(chroma_from_spectrogram(stft_reassigned(clip, cfg)));
}

/// 6 x 12 tonal-centroid projection: circle of fifths (radius 1), minor
/// thirds (radius 1), major thirds (radius 0.5); rows alternate sin, cos.
inline Eigen::Matrix<double, 6, 12> tonnetz_basis() {
  constexpr double pi = std::numbers::pi;
  constexpr std::array<double, 3> radius{1.0, 1.0, 0.5};
  constexpr std::array<double, 3> step{7.0 * pi / 6.0, 3.0 * pi / 2.0, 2.0 * pi / 3.0};
  Eigen::Matrix<double, 6, 12> phi;
  for (int circle = 0; circle < 3; ++circle) {
    for (int l = 0; l < 12; ++l) {
      phi(2 * circle, l) = radius[circle] * std::sin(l * step[circle]);
      phi(2 * circle + 1, l) = radius[circle] * std::cos(l * step[circle]);
    }
  }
  return phi;
}

/// Tonal centroid of one 12-bin chroma vector; the zero vector maps to zero.
inline Eigen::Matrix<double, 6, 1> tonal_centroid_frame(const Eigen::Matrix<double, 12, 1>& chroma) {
  const double l1 = chroma.cwiseAbs().sum();
  if (l1 <= 0.0) return Eigen::Matrix<double, 6, 1>::Zero();
  return tonnetz_basis() * chroma / l1;
}

inline Eigen::MatrixXd tonnetz_from_chroma(const Eigen::MatrixXd& chroma) {
  const auto phi = tonnetz_basis();
  Eigen::MatrixXd out(chroma.rows(), 6);
  for (Eigen::Index t = 0; t < chroma.rows(); ++t) {
    const double l1 = chroma.row(t).cwiseAbs().sum();
    if (l1 <= 0.0) {
      out.row(t).setZero();
    } else {
      out.row(t) = (phi * chroma.row(t).transpose() / l1).transpose();
    }
  }
  return out;
}

inline Eigen::VectorXd tonal_centroid(const AudioClip& clip, const StftConfig& cfg = {}) {
  return frame_mean(tonnetz_from_chroma(chroma_from_spectrogram(stft_reassigned(clip, cfg))));
}

}  // namespace coughsel::audio
