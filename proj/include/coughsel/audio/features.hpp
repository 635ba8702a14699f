#pragma once

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "coughsel/audio/chroma.hpp"
#include "coughsel/audio/contrast.hpp"
#include "coughsel/audio/mel.hpp"
#include "coughsel/audio/stft.hpp"

namespace coughsel::audio {

inline constexpr std::size_t kMfccDim = 40;
inline constexpr std::size_t kMelDim = 128;
inline constexpr std::size_t kChromaDim = 12;
inline constexpr std::size_t kContrastDim = 7;
inline constexpr std::size_t kTonnetzDim = 6;
inline constexpr std::size_t kFeatureDim = kMfccDim + kMelDim + kChromaDim + kContrastDim + kTonnetzDim;
static_assert(kFeatureDim == 193);

/// Frame-mean acoustic descriptor. Block order is fixed:
/// MFCC, mel, chroma, contrast, tonnetz.
struct FeatureVector {
  std::array<double, kMfccDim> mfcc{};
  std::array<double, kMelDim> mel{};
  std::array<double, kChromaDim> chroma{};
  std::array<double, kContrastDim> contrast{};
  std::array<double, kTonnetzDim> tonnetz{};

  std::vector<double> flatten() const {
    std::vector<double> out;
    out.reserve(kFeatureDim);
    out.insert(out.end(), mfcc.begin(), mfcc.end());
    out.insert(out.end(), mel.begin(), mel.end());
    out.insert(out.end(), chroma.begin(), chroma.end());
    out.insert(out.end(), contrast.begin(), contrast.end());
    out.insert(out.end(), tonnetz.begin(), tonnetz.end());
    return out;
  }
};

/// Column names in flatten() order.
inline std::vector<std::string> feature_names() {
  std::vector<std::string> names;
  names.reserve(kFeatureDim);
  char buf[32];
  for (std::size_t i = 0; i < kMfccDim; ++i) { std::snprintf(buf, sizeof buf, "mfcc_%02zu", i); names.emplace_back(buf); }
  for (std::size_t i = 0; i < kMelDim; ++i) { std::snprintf(buf, sizeof buf, "mel_%03zu", i); names.emplace_back(buf); }
  for (std::size_t i = 0; i < kChromaDim; ++i) { std::snprintf(buf, sizeof buf, "chroma_%02zu", i); names.emplace_back(buf); }
  for (std::size_t i = 0; i < kContrastDim; ++i) names.push_back("contrast_" + std::to_string(i));
  for (std::size_t i = 0; i < kTonnetzDim; ++i) names.push_back("tonnetz_" + std::to_string(i));
  return names;
}

struct FeatureConfig {
  StftConfig stft;
  MelConfig mel;
  ContrastConfig contrast;
};

namespace detail {
template <std::size_t N>
void copy_block(const Eigen::VectorXd& v, std::array<double, N>& dst) {
  if (static_cast<std::size_t>(v.size()) != N) throw InputError("feature block has unexpected size");
  for (std::size_t i = 0; i < N; ++i) dst[i] = v(static_cast<Eigen::Index>(i));
}
}  // namespace detail

/// All five feature families from a single STFT pass.
inline FeatureVector extract_features(const AudioClip& clip, const FeatureConfig& cfg = {}) {
  if (cfg.mel.n_mels != kMelDim) throw InputError("extract_features: the descriptor layout needs 128 mel bands");
  if (cfg.contrast.n_bands + 1 != kContrastDim) throw InputError("extract_features: the descriptor layout needs 6 contrast bands");
  const ReassignedSpectrogram spec = stft_reassigned(clip, cfg.stft);
  const Spectrogram& power = spec.power;
  const Eigen::MatrixXd mel = mel_from_power(power, clip.sample_rate, cfg.stft.n_fft, cfg.mel);
  const Eigen::MatrixXd chroma = chroma_from_spectrogram(spec);
  FeatureVector fv;
  detail::copy_block(frame_mean(mfcc_from_mel(mel, kMfccDim)), fv.mfcc);
  detail::copy_block(frame_mean(mel), fv.mel);
  detail::copy_block(frame_mean(chroma), fv.chroma);
  detail::copy_block(frame_mean(contrast_from_power(power, clip.sample_rate, cfg.stft.n_fft, cfg.contrast)), fv.contrast);
  detail::copy_block(frame_mean(tonnetz_from_chroma(chroma)), fv.tonnetz);
  return fv;
}

}  // namespace coughsel::audio
