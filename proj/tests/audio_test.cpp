#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "coughsel/audio/features.hpp"
#include "coughsel/audio/wav.hpp"
#include "test_util.hpp"

namespace ca = coughsel::audio;
using coughsel::InputError;
using coughsel::testing::noise;
using coughsel::testing::scaled;
using coughsel::testing::sine;

namespace {

// Independent O(n^2) DFT power of one windowed frame.
std::vector<double> dft_power(const std::vector<double>& frame) {
  const std::size_t n = frame.size();
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    long double re = 0, im = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const long double ang = -2.0L * std::numbers::pi_v<long double> * (long double)(k * t % n) / n;
      re += frame[t] * std::cos(ang);
      im += frame[t] * std::sin(ang);
    }
    out[k] = static_cast<double>(re * re + im * im);
  }
  return out;
}

std::size_t argmax(const Eigen::VectorXd& v) {
  Eigen::Index i;
  v.maxCoeff(&i);
  return static_cast<std::size_t>(i);
}

}  // namespace

// ---- WAV decoding and resampling -------------------------------------------

TEST(Wav, Mono16BitIdentityUpToScaling) {
  std::vector<double> x{0.0, 0.25, -0.5, 0.999, -1.0};
  auto clip = ca::decode_wav(ca::encode_wav(x, 1, 22050));
  ASSERT_EQ(clip.sample_rate, 22050);
  ASSERT_EQ(clip.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    EXPECT_DOUBLE_EQ(clip.samples[i], std::lround(x[i] * 32767.0) / 32768.0);
}

TEST(Wav, StereoAntiphaseMixesToSilence) {
  std::vector<double> inter;
  for (int i = 0; i < 100; ++i) {
    double v = std::sin(0.1 * i) * 0.7;
    inter.push_back(v);
    inter.push_back(-v);
  }
  for (auto fmt : {ca::SampleFormat::kPcm16, ca::SampleFormat::kPcm24, ca::SampleFormat::kFloat32}) {
    auto clip = ca::decode_wav(ca::encode_wav(inter, 2, 16000, fmt));
    ASSERT_EQ(clip.size(), 100u);
    for (double s : clip.samples) EXPECT_EQ(s, 0.0);
  }
}

TEST(Wav, AllEncodingsDecodeWithinQuantisation) {
  std::vector<double> x{0.5, -0.25, 0.125, 0.0};
  struct Case { ca::SampleFormat f; double tol; };
  for (auto c : {Case{ca::SampleFormat::kPcm8, 1.0 / 64}, Case{ca::SampleFormat::kPcm16, 1e-4},
                 Case{ca::SampleFormat::kPcm24, 1e-6}, Case{ca::SampleFormat::kFloat32, 1e-7}}) {
    auto clip = ca::decode_wav(ca::encode_wav(x, 1, 8000, c.f));
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(clip.samples[i], x[i], c.tol);
  }
}

TEST(Wav, Errors) {
  EXPECT_THROW(ca::decode_wav("not a wav file at all"), InputError);
  EXPECT_THROW(ca::decode_wav(ca::encode_wav({}, 1, 22050)), InputError);  // zero length
  std::string bytes = ca::encode_wav({0.1, 0.2}, 1, 22050);
  bytes[34] = 32;  // 32-bit integer PCM is not supported
  EXPECT_THROW(ca::decode_wav(bytes), InputError);
  EXPECT_THROW(ca::load_and_resample("/nonexistent/file.wav"), InputError);
}

TEST(Resample, SameRateIsIdentity) {
  auto clip = noise(1000, 3);
  EXPECT_EQ(ca::resample(clip.samples, 22050, 22050), clip.samples);
}

TEST(Resample, HalvingRateMatchesDirectSynthesis) {
  auto hi = sine(440.0, 1.0, 44100);
  auto out = ca::resample(hi.samples, 44100, 22050);
  ASSERT_EQ(out.size(), 22050u);
  auto direct = sine(440.0, 1.0, 22050);
  double worst = 0.0;
  for (std::size_t i = 64; i + 64 < out.size(); ++i) worst = std::max(worst, std::abs(out[i] - direct.samples[i]));
  EXPECT_LT(worst, 1e-3);

  // Spectral peak located by a direct DFT scan over 400..480 Hz in 0.5 Hz steps.
  double best_hz = 0.0, best_mag = -1.0;
  for (double f = 400.0; f <= 480.0; f += 0.5) {
    std::complex<double> acc = 0.0;
    for (std::size_t n = 0; n < out.size(); ++n)
      acc += out[n] * std::polar(1.0, -2.0 * std::numbers::pi * f * static_cast<double>(n) / 22050.0);
    if (std::abs(acc) > best_mag) {
      best_mag = std::abs(acc);
      best_hz = f;
    }
  }
  EXPECT_NEAR(best_hz, 440.0, 2.0);
}

// ---- STFT -------------------------------------------------------------------

TEST(Stft, ZeroClipGivesZeroSpectrogram) {
  ca::AudioClip clip{std::vector<double>(5000, 0.0), 22050};
  auto p = ca::stft_power(clip);
  EXPECT_EQ(p.rows(), 1 + (5000 + 511) / 512);
  EXPECT_EQ(p.cols(), 1025);
  EXPECT_EQ(p.maxCoeff(), 0.0);
}

TEST(Stft, FrameCountUsesCeil) {
  for (std::size_t len : {1u, 2u, 511u, 512u, 513u, 4096u}) {
    ca::AudioClip clip{std::vector<double>(len, 0.1), 22050};
    EXPECT_EQ(static_cast<std::size_t>(ca::stft_power(clip).rows()), 1 + (len + 511) / 512) << len;
  }
}

TEST(Stft, MatchesDirectDftOracle) {
  const ca::StftConfig cfg{256, 64};
  auto clip = noise(1000, 11, 0.3);
  clip.samples[384] = 1.0;  // impulse at the centre of frame 6
  auto p = ca::stft_power(clip, cfg);
  const auto w = ca::hann_window(cfg.n_fft);
  for (std::size_t t : {0u, 6u, 10u}) {
    std::vector<double> frame(cfg.n_fft);
    for (std::size_t i = 0; i < cfg.n_fft; ++i) {
      long idx = static_cast<long>(t * cfg.hop + i) - 128;
      if (idx < 0) idx = -idx;  // reflection at the left edge
      frame[i] = w[i] * clip.samples[static_cast<std::size_t>(idx)];
    }
    auto expected = dft_power(frame);
    for (std::size_t k = 0; k < expected.size(); ++k)
      EXPECT_NEAR(p(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)), expected[k], 1e-9 * (1 + expected[k]));
  }
}

TEST(Stft, ImpulseAtFrameCentreHasFlatUnitSpectrum) {
  // Periodic Hann equals 1 at index n/2, so the windowed frame is a unit impulse.
  ca::AudioClip clip{std::vector<double>(4096, 0.0), 22050};
  clip.samples[2048] = 1.0;
  auto p = ca::stft_power(clip);
  for (Eigen::Index k = 0; k < p.cols(); ++k) EXPECT_NEAR(p(4, k), 1.0, 1e-12);
}

TEST(Stft, BinExactSineHasArgmaxAtItsBin) {
  const ca::StftConfig cfg;
  for (std::size_t k0 : {5u, 40u, 300u, 1000u}) {
    auto clip = sine(static_cast<double>(k0) * 22050.0 / 2048.0, 0.5, 22050);
    auto p = ca::stft_power(clip, cfg);
    // frames whose support lies entirely inside the clip
    const auto len = static_cast<Eigen::Index>(clip.size());
    for (Eigen::Index t = 4; t * 512 + 1024 <= len; ++t) {
      Eigen::Index best;
      p.row(t).maxCoeff(&best);
      EXPECT_EQ(static_cast<std::size_t>(best), k0) << "frame " << t;
    }
  }
}

TEST(Stft, InvalidConfig) {
  auto clip = noise(100, 1);
  EXPECT_THROW(ca::stft_power(clip, {2048, 0}), InputError);
  EXPECT_THROW(ca::stft_power(clip, {512, 1024}), InputError);
  EXPECT_THROW(ca::stft_power(ca::AudioClip{{}, 22050}), InputError);
}

// ---- Mel scale and filterbank ----------------------------------------------

TEST(MelScale, KnownValues) {
  EXPECT_EQ(ca::mel_scale(0.0), 0.0);
  const long double expected700 = 2595.0L * std::log10(2.0L);
  EXPECT_NEAR(ca::mel_scale(700.0), static_cast<double>(expected700), 1e-9);
  EXPECT_NEAR(ca::mel_scale(1000.0), 1000.0, 0.2);
  EXPECT_THROW(ca::mel_scale(-1.0), InputError);
  EXPECT_NEAR(ca::mel_to_hz(ca::mel_scale(4321.0)), 4321.0, 1e-9);
}

TEST(MelFilterbank, SingleFilterSpansWholeBand) {
  const double f_min = 300.0, f_max = 8000.0;
  auto fb = ca::mel_filterbank(1, 2048, 22050, f_min, f_max);
  ASSERT_EQ(fb.rows(), 1);
  const double centre = ca::mel_to_hz(0.5 * (ca::mel_scale(f_min) + ca::mel_scale(f_max)));
  auto freqs = ca::bin_frequencies(22050, 2048);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const double w = fb(0, static_cast<Eigen::Index>(k));
    if (freqs[k] <= f_min || freqs[k] >= f_max) {
      EXPECT_EQ(w, 0.0);
    } else {
      EXPECT_GT(w, 0.0);
    }
    if (freqs[k] < centre && k + 1 < freqs.size() && freqs[k + 1] < centre) {
      EXPECT_LE(w, fb(0, static_cast<Eigen::Index>(k + 1)));
    }
    if (freqs[k] > centre && k + 1 < freqs.size()) {
      EXPECT_GE(w, fb(0, static_cast<Eigen::Index>(k + 1)));
    }
  }
}

TEST(MelFilterbank, NoGapBetweenFirstAndLastCentre) {
  struct Cfg { std::size_t mels, nfft; int sr; double lo, hi; };
  for (auto c : {Cfg{128, 2048, 22050, 0, 11025}, Cfg{40, 512, 16000, 20, 8000}, Cfg{128, 512, 8000, 0, 4000},
                 Cfg{10, 1024, 44100, 100, 5000}}) {
    auto fb = ca::mel_filterbank(c.mels, c.nfft, c.sr, c.lo, c.hi);
    auto edges = ca::mel_band_edges(c.mels, c.lo, c.hi);
    auto freqs = ca::bin_frequencies(c.sr, c.nfft);
    Eigen::VectorXd total = fb.colwise().sum();
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      if (freqs[k] > edges[1] && freqs[k] < edges[c.mels]) {
        EXPECT_GT(total(static_cast<Eigen::Index>(k)), 0.0);
      }
    }
  }
}

TEST(MelFilterbank, CentresEquallySpacedInMel) {
  auto edges = ca::mel_band_edges(128, 0.0, 11025.0);
  const double step = ca::mel_scale(edges[1]) - ca::mel_scale(edges[0]);
  for (std::size_t i = 1; i < edges.size(); ++i)
    EXPECT_NEAR(ca::mel_scale(edges[i]) - ca::mel_scale(edges[i - 1]), step, 1e-9);
}

TEST(MelFilterbank, InvalidEdges) {
  EXPECT_THROW(ca::mel_filterbank(0, 2048, 22050, 0, 11025), InputError);
  EXPECT_THROW(ca::mel_filterbank(10, 2048, 22050, 500, 500), InputError);
  EXPECT_THROW(ca::mel_filterbank(10, 2048, 22050, 0, 12000), InputError);
}

TEST(Dct, OrthonormalRows) {
  auto m = ca::dct_matrix(40, 128);
  EXPECT_LT((m * m.transpose() - Eigen::MatrixXd::Identity(40, 40)).cwiseAbs().maxCoeff(), 1e-10);
}

// ---- MFCC / mel features ---------------------------------------------------

TEST(Mfcc, SilenceGivesOnlyDcCoefficient) {
  ca::AudioClip clip{std::vector<double>(8000, 0.0), 22050};
  auto c = ca::mfcc(clip);
  ASSERT_EQ(c.size(), 40);
  EXPECT_NEAR(c(0), std::sqrt(128.0) * std::log(1e-10), 1e-9);
  for (int i = 1; i < 40; ++i) EXPECT_NEAR(c(i), 0.0, 1e-9);
}

TEST(Mfcc, GainBecomesConstantOffset) {
  auto clip = noise(22050, 5);
  auto a = ca::mfcc(clip);
  auto b = ca::mfcc(scaled(clip, 10.0));
  for (int i = 1; i < 40; ++i) EXPECT_NEAR(a(i), b(i), 1e-6) << i;
  EXPECT_NEAR(b(0) - a(0), std::sqrt(128.0) * std::log(100.0), 1e-6);
}

TEST(MelFeatures, SilenceAndPowerScaling) {
  ca::AudioClip silent{std::vector<double>(3000, 0.0), 22050};
  EXPECT_EQ(ca::mel_spectrogram_features(silent).cwiseAbs().maxCoeff(), 0.0);
  auto clip = noise(8000, 7);
  auto a = ca::mel_spectrogram_features(clip);
  auto b = ca::mel_spectrogram_features(scaled(clip, 3.0));
  ASSERT_EQ(a.size(), 128);
  EXPECT_GE(a.minCoeff(), 0.0);
  for (int i = 0; i < 128; ++i) EXPECT_NEAR(b(i), 9.0 * a(i), 1e-9 * (1 + b(i)));
}

TEST(MelFeatures, SineAtFilterCentrePeaksInThatFilter) {
  auto edges = ca::mel_band_edges(128, 0.0, 11025.0);
  int checked = 0;
  for (std::size_t m = 0; m < 128; ++m) {
    auto clip = sine(edges[m + 1], 0.25, 22050);
    EXPECT_EQ(argmax(ca::mel_spectrogram_features(clip)), m) << "filter " << m << " centre " << edges[m + 1];
    ++checked;
  }
  EXPECT_EQ(checked, 128);
}

// ---- Chroma and tonnetz ----------------------------------------------------

TEST(Chroma, SilenceIsZero) {
  ca::AudioClip clip{std::vector<double>(3000, 0.0), 22050};
  EXPECT_EQ(ca::chromagram(clip).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Stft, ReassignedFrequencyTracksSinusoid) {
  auto clip = sine(440.0, 1.0, 22050);
  auto spec = ca::stft_reassigned(clip);
  auto plain = ca::stft_power(clip);
  EXPECT_LT((spec.power - plain).cwiseAbs().maxCoeff(), 1e-9);
  for (Eigen::Index k = 39; k <= 43; ++k) EXPECT_NEAR(spec.frequency(10, k), 440.0, 0.5) << "bin " << k;
}

TEST(Chroma, A440PeaksAtPitchClassA) {
  auto c = ca::chromagram(sine(440.0, 1.0, 22050));
  EXPECT_EQ(argmax(c), 9u);
  EXPECT_GE(c.minCoeff(), 0.0);
  EXPECT_LE(c.maxCoeff(), 1.0);
}

TEST(Chroma, SemitoneTranspositionShiftsByOneBin) {
  auto a = ca::chromagram(sine(440.0, 1.0, 22050));
  auto b = ca::chromagram(sine(440.0 * std::pow(2.0, 1.0 / 12.0), 1.0, 22050));
  for (int i = 0; i < 12; ++i) EXPECT_NEAR(b((i + 1) % 12), a(i), 0.05) << "class " << i;
}

TEST(Tonnetz, ZeroAndOneHotChroma) {
  EXPECT_EQ(ca::tonal_centroid_frame(Eigen::Matrix<double, 12, 1>::Zero()).norm(), 0.0);
  const auto phi = ca::tonnetz_basis();
  for (int l = 0; l < 12; ++l) {
    Eigen::Matrix<double, 12, 1> c = Eigen::Matrix<double, 12, 1>::Zero();
    c(l) = 1.0;
    EXPECT_EQ(ca::tonal_centroid_frame(c), phi.col(l));
  }
}

TEST(Tonnetz, CirclePairNormsBounded) {
  coughsel::Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::Matrix<double, 12, 1> c;
    for (int i = 0; i < 12; ++i) c(i) = rng.uniform01() < 0.3 ? 0.0 : rng.uniform01();
    auto z = ca::tonal_centroid_frame(c);
    EXPECT_LE(std::hypot(z(0), z(1)), 1.0 + 1e-12);
    EXPECT_LE(std::hypot(z(2), z(3)), 1.0 + 1e-12);
    EXPECT_LE(std::hypot(z(4), z(5)), 0.5 + 1e-12);
  }
}

// ---- Spectral contrast -----------------------------------------------------

TEST(Contrast, HandEvaluatedBands) {
  std::vector<double> flat(20, 0.3);
  EXPECT_DOUBLE_EQ(ca::band_contrast(flat, 0.02), 0.0);
  std::vector<double> x{2, 8, 1, 4};
  EXPECT_NEAR(ca::band_contrast(x, 0.02), std::log(8.0) - std::log(1.0), 1e-15);
  EXPECT_NEAR(ca::band_contrast(x, 0.2), std::log(8.0), 1e-15);  // ceil(0.8) = 1
  std::vector<double> y{10, 1, 1, 1, 1, 1, 1, 1, 1, 0.5};
  EXPECT_NEAR(ca::band_contrast(y, 0.2), std::log(5.5) - std::log(0.75), 1e-14);  // ceil(2) = 2
}

TEST(Contrast, BandLayoutAndErrors) {
  auto bands = ca::contrast_bands(22050, 2048, {});
  ASSERT_EQ(bands.size(), 7u);
  EXPECT_EQ(bands.front().first, 0u);
  EXPECT_EQ(bands.back().second, 1025u);
  for (std::size_t b = 1; b < bands.size(); ++b) EXPECT_EQ(bands[b].first, bands[b - 1].second);
  EXPECT_THROW(ca::contrast_bands(2000, 2048, {}), InputError);  // octaves above Nyquist are empty
  EXPECT_THROW(ca::contrast_bands(22050, 2048, {6, 0.5, 200.0}), InputError);
}

TEST(Contrast, NonNegativeEveryFrame) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto clip = noise(6000, seed, 0.4);
    auto frames = ca::contrast_from_power(ca::stft_power(clip), 22050, 2048);
    EXPECT_GE(frames.minCoeff(), 0.0);
  }
}

// ---- Full descriptor -------------------------------------------------------

TEST(Features, ShapeOrderAndNames) {
  auto fv = ca::extract_features(noise(5000, 2));
  auto flat = fv.flatten();
  ASSERT_EQ(flat.size(), 193u);
  EXPECT_EQ(flat[0], fv.mfcc[0]);
  EXPECT_EQ(flat[40], fv.mel[0]);
  EXPECT_EQ(flat[168], fv.chroma[0]);
  EXPECT_EQ(flat[180], fv.contrast[0]);
  EXPECT_EQ(flat[187], fv.tonnetz[0]);
  auto names = ca::feature_names();
  ASSERT_EQ(names.size(), 193u);
  EXPECT_EQ(names[0], "mfcc_00");
  EXPECT_EQ(names[39], "mfcc_39");
  EXPECT_EQ(names[40], "mel_000");
  EXPECT_EQ(names[167], "mel_127");
  EXPECT_EQ(names[179], "chroma_11");
  EXPECT_EQ(names[186], "contrast_6");
  EXPECT_EQ(names[192], "tonnetz_5");
}

TEST(Features, MatchesPerFamilyExtractors) {
  auto clip = noise(7000, 4, 0.2);
  auto fv = ca::extract_features(clip);
  auto m = ca::mfcc(clip), mel = ca::mel_spectrogram_features(clip), ch = ca::chromagram(clip),
       sc = ca::spectral_contrast(clip), tz = ca::tonal_centroid(clip);
  for (int i = 0; i < 40; ++i) EXPECT_EQ(fv.mfcc[i], m(i));
  for (int i = 0; i < 128; ++i) EXPECT_EQ(fv.mel[i], mel(i));
  for (int i = 0; i < 12; ++i) EXPECT_EQ(fv.chroma[i], ch(i));
  for (int i = 0; i < 7; ++i) EXPECT_EQ(fv.contrast[i], sc(i));
  for (int i = 0; i < 6; ++i) EXPECT_EQ(fv.tonnetz[i], tz(i));
}

TEST(Features, SilenceZeroesMelChromaContrast) {
  auto fv = ca::extract_features(ca::AudioClip{std::vector<double>(4000, 0.0), 22050});
  for (double v : fv.mel) EXPECT_EQ(v, 0.0);
  for (double v : fv.chroma) EXPECT_EQ(v, 0.0);
  for (double v : fv.contrast) EXPECT_EQ(v, 0.0);
}

TEST(Features, DeterministicForIdenticalInput) {
  auto a = ca::extract_features(noise(9000, 8)).flatten();
  auto b = ca::extract_features(noise(9000, 8)).flatten();
  EXPECT_EQ(a, b);
}

TEST(Features, ShortClipStillYieldsFrames) {
  auto fv = ca::extract_features(ca::AudioClip{{0.5}, 22050});
  for (double v : fv.flatten()) EXPECT_TRUE(std::isfinite(v));
}

TEST(Features, GainInvariantFamilies) {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto clip = noise(12000, seed, 0.05);
    const auto tone = sine(330.0 * seed, 12000.0 / 22050.0, 22050, 0.03);
    for (std::size_t i = 0; i < clip.samples.size(); ++i) clip.samples[i] += tone.samples[i];
    const auto a = ca::extract_features(clip), b = ca::extract_features(scaled(clip, 10.0));
    for (int i = 1; i < 40; ++i) EXPECT_NEAR(a.mfcc[i], b.mfcc[i], 1e-6) << "mfcc " << i;
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(a.chroma[i], b.chroma[i], 1e-6) << "chroma " << i;
    for (int i = 0; i < 7; ++i) EXPECT_NEAR(a.contrast[i], b.contrast[i], 1e-6) << "contrast " << i;
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(a.tonnetz[i], b.tonnetz[i], 1e-6) << "tonnetz " << i;
    for (int i = 0; i < 128; ++i) EXPECT_NEAR(b.mel[i], 100.0 * a.mel[i], 1e-9 * b.mel[i]) << "mel " << i;
  }
}
