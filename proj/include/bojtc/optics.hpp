#pragma once

#include "bojtc/grid.hpp"

#include <optional>

namespace bojtc {

enum class Rounding
{
  HalfAwayFromZero,
};

/// Finite bit-depth of an SLM or FPA.
struct QuantSpec
{
  int bits = 8;
  Rounding rounding = Rounding::HalfAwayFromZero;
  /// Clamp codes into [0, maxCode]. Without it, out-of-range values are
  /// rounded but kept.
  bool saturate = true;

  /// Validated construction; bits must lie in [1, 16].
  static QuantSpec withBits(int bits);

  double maxCode() const { return static_cast<double>((1 << bits) - 1); }
  void validate() const;

  friend bool operator==(const QuantSpec&, const QuantSpec&) = default;
};

/// std::nullopt stands for an ideal device with infinite bit-depth.
using BitDepth = std::optional<QuantSpec>;

struct DeviceModel
{
  QuantSpec quant;
  int width = 1920;
  int height = 1080;
  double framerate = 720.0;

  /// Throws if f does not match the device resolution.
  void requireResolution(const Frame& f) const;
};

double roundHalfAwayFromZero(double v);

/// Rounds to integer codes and clamps into [0, 2^bits - 1]. Input must be
/// finite and already scaled to code units.
Frame quantize(const Frame& scaled, const QuantSpec& spec);

/// Linear amplitude SLM: amplitude = code / (2^bits - 1). An ideal SLM passes
/// the signal through unchanged. Throws on non-integer or out-of-range codes.
Frame slmProject(const Frame& codes, const BitDepth& spec);

/// Detects an optical intensity plane. A finite FPA maps fullScale to the
/// maximum code and saturates above it; an ideal FPA returns the intensity
/// unchanged. Throws on negative intensity or fullScale <= 0.
Frame fpaCapture(const Frame& opticalIntensity, const BitDepth& spec,
                 double fullScale);

/// Pixels whose intensity exceeds fullScale on a finite FPA.
std::size_t countSaturated(const Frame& opticalIntensity, const BitDepth& spec,
                           double fullScale);

} // namespace bojtc
