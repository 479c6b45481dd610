#pragma once

#include "bojtc/grid.hpp"
#include "bojtc/optics.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bojtc {

struct Peak
{
  int x = 0;
  int y = 0;
  /// Position relative to the plane center (width/2, height/2).
  Offset displacement;
  double value = 0.0;
  double normalized = 0.0;
};

struct PeakList
{
  /// Descending by value, all outside the DC exclusion disk.
  std::vector<Peak> peaks;
  double dcExclusionRadius = 0.0;
  double baseline = 1.0;

  const Peak* top() const { return peaks.empty() ? nullptr : &peaks.front(); }
  double topValue() const { return peaks.empty() ? 0.0 : peaks.front().value; }
  double topNormalized() const
  {
    return peaks.empty() ? 0.0 : peaks.front().normalized;
  }
};

struct PeakSearch
{
  /// Peaks closer than this (Chebyshev distance, pixels) to a stronger
  /// accepted peak are suppressed.
  int suppressionRadius = 5;
  /// Candidates at or below this fraction of the plane maximum are ignored.
  double minRelative = 1e-12;
};

/// Local maxima outside the disk of radius dcRadius around the plane center,
/// greedily non-maximum-suppressed, strongest first, at most maxPeaks.
PeakList findPeaks(const Frame& plane, double dcRadius, double baseline,
                   int maxPeaks, const PeakSearch& search = {});

struct HistogramReport
{
  int bits = 8;
  std::vector<std::size_t> counts;
  int maxUsedCode = 0;
  /// maxUsedCode / (2^bits - 1)
  double occupancyFraction = 0.0;
  std::size_t pixelCount = 0;
};

/// Exact bin counts over codes 0..2^bits-1. Throws on non-integer or
/// out-of-range codes.
HistogramReport histogram(const Frame& codes, int bits);

/// Histogram of the conjugate-product terms alone, expressed in the code
/// units a JTC would use: balanced * maxCode / jtcScale, offset so that the
/// minimum is zero, then quantized.
HistogramReport conjugateHistogram(const Frame& balanced, double jtcScale,
                                   const QuantSpec& slm);

enum class CaptureMode
{
  ThreeFpa,        ///< 3 FPAs, 2 input SLMs, all terms captured at once
  Multiplexed1Fpa, ///< 1 FPA behind a shutter cycling through 3 states
  SequentialSlm,   ///< 1 FPA, the SLM projects the 3 states in turn
};

enum class Limiter
{
  Slm,
  Fpa,
  Both,
};

std::string_view toString(CaptureMode mode);
std::string_view toString(Limiter limiter);
/// Accepts the canonical names plus "multiplexed" and "sequential".
CaptureMode parseCaptureMode(std::string_view name);

struct ThroughputEstimate
{
  CaptureMode mode = CaptureMode::ThreeFpa;
  double slmFps = 0.0;
  double fpaFps = 0.0;
  double correlationsPerSecond = 0.0;
  Limiter limitingComponent = Limiter::Slm;
};

ThroughputEstimate throughput(CaptureMode mode, double slmFps, double fpaFps);

} // namespace bojtc
