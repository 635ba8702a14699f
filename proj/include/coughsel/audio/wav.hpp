#pragma once

// RIFF/WAVE decoding, mono mixdown and band-limited resampling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "coughsel/common.hpp"
#include "coughsel/io/csv.hpp"

namespace coughsel::audio {

inline constexpr int kDefaultSampleRate = 22050;

/// Mono sample buffer in [-1, 1] plus its rate in Hz.
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
};

/// Throws InputError unless the clip is usable by the extractors.
inline void validate(const AudioClip& clip) {
  if (clip.sample_rate <= 0) throw InputError("audio clip: sample rate must be positive");
  if (clip.samples.empty()) throw InputError("audio clip: no samples");
  for (double s : clip.samples)
    if (!std::isfinite(s)) throw InputError("audio clip: non-finite sample");
}

enum class SampleFormat { kPcm8, kPcm16, kPcm24, kFloat32 };

struct WavInfo {
  int channels = 0;
  int sample_rate = 0;
  SampleFormat format = SampleFormat::kPcm16;
};

namespace detail {

inline std::uint32_t le32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}
inline std::uint16_t le16(const std::uint8_t* p) { return std::uint16_t(p[0] | (p[1] << 8)); }

inline void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

}  // namespace detail

/// Decodes a WAV byte buffer and mixes all channels to mono by averaging.
inline AudioClip decode_wav(const std::string& bytes, const std::string& name = "<memory>") {
  const auto* data = reinterpret_cast<const std::uint8_t*>(bytes.data());
  const std::size_t n = bytes.size();
  if (n < 12 || std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0)
    throw InputError(name + ": not a RIFF/WAVE file");

  WavInfo info;
  bool have_fmt = false;
  const std::uint8_t* pcm = nullptr;
  std::size_t pcm_bytes = 0;
  std::size_t pos = 12;
  while (pos + 8 <= n) {
    const std::uint8_t* chunk = data + pos;
    std::uint32_t size = detail::le32(chunk + 4);
    std::size_t body = pos + 8;
    std::size_t avail = std::min<std::size_t>(size, n - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw InputError(name + ": truncated fmt chunk");
      const std::uint8_t* f = data + body;
      std::uint16_t tag = detail::le16(f);
      info.channels = detail::le16(f + 2);
      info.sample_rate = static_cast<int>(detail::le32(f + 4));
      std::uint16_t bits = detail::le16(f + 14);
      if (tag == 0xFFFE) {
        if (avail < 26) throw InputError(name + ": truncated extensible fmt chunk");
        tag = detail::le16(f + 24);  // first two bytes of the sub-format GUID
      }
      if (tag == 1 && bits == 8) info.format = SampleFormat::kPcm8;
      else if (tag == 1 && bits == 16) info.format = SampleFormat::kPcm16;
      else if (tag == 1 && bits == 24) info.format = SampleFormat::kPcm24;
      else if (tag == 3 && bits == 32) info.format = SampleFormat::kFloat32;
      else
        throw InputError(name + ": unsupported encoding (format tag " + std::to_string(tag) + ", " +
                         std::to_string(bits) + " bits)");
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      pcm = data + body;
      pcm_bytes = avail;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw InputError(name + ": missing fmt chunk");
  if (pcm == nullptr) throw InputError(name + ": missing data chunk");
  if (info.channels < 1 || info.channels > 2)
    throw InputError(name + ": unsupported channel count " + std::to_string(info.channels));
  if (info.sample_rate <= 0) throw InputError(name + ": invalid sample rate");

  const std::size_t width = info.format == SampleFormat::kPcm8    ? 1
                            : info.format == SampleFormat::kPcm16 ? 2
                            : info.format == SampleFormat::kPcm24 ? 3
                                                                  : 4;
  const std::size_t frame_bytes = width * static_cast<std::size_t>(info.channels);
  const std::size_t frames = pcm_bytes / frame_bytes;
  if (frames == 0) throw InputError(name + ": zero-length audio");

  auto sample_at = [&](const std::uint8_t* p) -> double {
    switch (info.format) {
      case SampleFormat::kPcm8:
        return (static_cast<double>(p[0]) - 128.0) / 128.0;
      case SampleFormat::kPcm16:
        return static_cast<std::int16_t>(detail::le16(p)) / 32768.0;
      case SampleFormat::kPcm24: {
        std::int32_t v = std::int32_t(p[0]) | (std::int32_t(p[1]) << 8) | (std::int32_t(p[2]) << 16);
        if (v & 0x800000) v -= 0x1000000;
        return v / 8388608.0;
      }
      case SampleFormat::kFloat32: {
        std::uint32_t bitsv = detail::le32(p);
        float f;
        std::memcpy(&f, &bitsv, sizeof f);
        if (!std::isfinite(f)) throw InputError(name + ": non-finite float sample");
        return std::clamp(static_cast<double>(f), -1.0, 1.0);
      }
    }
    return 0.0;
  };

  AudioClip clip;
  clip.sample_rate = info.sample_rate;
  clip.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const std::uint8_t* frame = pcm + i * frame_bytes;
    double acc = 0.0;
    for (int c = 0; c < info.channels; ++c) acc += sample_at(frame + static_cast<std::size_t>(c) * width);
    clip.samples[i] = acc / info.channels;
  }
  return clip;
}

/// Encodes interleaved samples (clamped to [-1, 1]) as a WAV byte buffer.
inline std::string encode_wav(const std::vector<double>& interleaved, int channels, int sample_rate,
                              SampleFormat format = SampleFormat::kPcm16) {
  const std::uint16_t width = format == SampleFormat::kPcm8    ? 1
                              : format == SampleFormat::kPcm16 ? 2
                              : format == SampleFormat::kPcm24 ? 3
                                                               : 4;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(interleaved.size() * width);
  std::string out = "RIFF";
  detail::put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  detail::put32(out, 16);
  detail::put16(out, format == SampleFormat::kFloat32 ? 3 : 1);
  detail::put16(out, static_cast<std::uint16_t>(channels));
  detail::put32(out, static_cast<std::uint32_t>(sample_rate));
  detail::put32(out, static_cast<std::uint32_t>(sample_rate * channels * width));
  detail::put16(out, static_cast<std::uint16_t>(channels * width));
  detail::put16(out, static_cast<std::uint16_t>(width * 8));
  out += "data";
  detail::put32(out, data_bytes);
  for (double s : interleaved) {
    s = std::clamp(s, -1.0, 1.0);
    switch (format) {
      case SampleFormat::kPcm8:
        out.push_back(static_cast<char>(static_cast<std::uint8_t>(std::lround(s * 127.0) + 128)));
        break;
      case SampleFormat::kPcm16:
        detail::put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(s * 32767.0))));
        break;
      case SampleFormat::kPcm24: {
        auto v = static_cast<std::uint32_t>(static_cast<std::int32_t>(std::lround(s * 8388607.0)));
        for (int i = 0; i < 3; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        break;
      }
      case SampleFormat::kFloat32: {
        float f = static_cast<float>(s);
        std::uint32_t b;
        std::memcpy(&b, &f, sizeof b);
        detail::put32(out, b);
        break;
      }
    }
  }
  return out;
}

/// Windowed-sinc resampler: Kaiser window (beta 8.6), 32 zero crossings,
/// cutoff at 0.95 of the lower Nyquist frequency.
inline std::vector<double> resample(const std::vector<double>& in, int from_rate, int to_rate) {
  if (from_rate <= 0 || to_rate <= 0) throw InputError("resample: rates must be positive");
  if (from_rate == to_rate) return in;
  constexpr double kBeta = 8.6;
  constexpr int kZeroCrossings = 32;
  constexpr double kRolloff = 0.95;
  const double ratio = static_cast<double>(to_rate) / from_rate;
  const double cutoff = kRolloff * std::min(1.0, ratio);  // in input-sample units
  const double half_width = kZeroCrossings / cutoff;
  // Kaiser window tabulated over |r| in [0, 1], linearly interpolated.
  constexpr std::size_t kTable = 1 << 16;
  std::vector<double> kaiser(kTable + 2);
  const double i0_beta = std::cyl_bessel_i(0.0, kBeta);
  for (std::size_t i = 0; i <= kTable; ++i) {
    const double r = static_cast<double>(i) / kTable;
    kaiser[i] = std::cyl_bessel_i(0.0, kBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
  }
  kaiser[kTable + 1] = 0.0;
  const auto out_len = static_cast<std::size_t>(std::llround(static_cast<double>(in.size()) * ratio));
  std::vector<double> out(std::max<std::size_t>(out_len, 1));
  const auto n_in = static_cast<long>(in.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double x = static_cast<double>(j) / ratio;
    const long lo = std::max(0L, static_cast<long>(std::ceil(x - half_width)));
    const long hi = std::min(n_in - 1, static_cast<long>(std::floor(x + half_width)));
    double acc = 0.0;
    for (long k = lo; k <= hi; ++k) {
      const double d = x - static_cast<double>(k);
      const double pos = std::min(1.0, std::abs(d) / half_width) * kTable;
      const auto cell = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(cell);
      const double win = kaiser[cell] + frac * (kaiser[cell + 1] - kaiser[cell]);
      const double arg = std::numbers::pi * cutoff * d;
      const double sinc = d == 0.0 ? 1.0 : std::sin(arg) / arg;
      acc += in[static_cast<std::size_t>(k)] * cutoff * sinc * win;
    }
    out[j] = acc;
  }
  return out;
}

/// Reads a WAV file, mixes to mono and resamples to `target_rate`.
inline AudioClip load_and_resample(const std::filesystem::path& path, int target_rate = kDefaultSampleRate) {
  AudioClip clip = decode_wav(io::read_file(path), path.string());
  if (clip.sample_rate != target_rate) {
    clip.samples = resample(clip.samples, clip.sample_rate, target_rate);
    for (double& s : clip.samples) s = std::clamp(s, -1.0, 1.0);
    clip.sample_rate = target_rate;
  }
  return clip;
}

}  // namespace coughsel::audio
