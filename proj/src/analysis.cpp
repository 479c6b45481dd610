#include "bojtc/analysis.hpp"

#include "bojtc/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bojtc {

PeakList findPeaks(const Frame& plane, double dcRadius, double baseline,
                   int maxPeaks, const PeakSearch& search)
{
  if (!(baseline > 0.0) || !std::isfinite(baseline))
    throw std::invalid_argument("peak normalization baseline must be > 0");
  if (!(dcRadius >= 0.0) ||
      dcRadius >= std::min(plane.width(), plane.height()) / 2.0)
    throw std::invalid_argument(
      "DC exclusion radius must lie in [0, min(width, height)/2)");
  requireFinite(plane, "output plane");

  PeakList list;
  list.dcExclusionRadius = dcRadius;
  list.baseline = baseline;
  if (maxPeaks <= 0)
    return list;

  const int w = plane.width();
  const int h = plane.height();
  const int cx = w / 2;
  const int cy = h / 2;
  const double planeMax =
    *std::max_element(plane.values().begin(), plane.values().end());
  if (!(planeMax > 0.0))
    return list;
  const double floorValue = planeMax * search.minRelative;
  const double r2 = dcRadius * dcRadius;

  std::vector<Peak> candidates;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
    {
      const double v = plane(x, y);
      if (v <= floorValue)
        continue;
      const double dx = x - cx;
      const double dy = y - cy;
      if (dx * dx + dy * dy <= r2)
        continue;
      bool isMax = true;
      for (int ny = std::max(0, y - 1); isMax && ny <= std::min(h - 1, y + 1);
           ++ny)
        for (int nx = std::max(0, x - 1); nx <= std::min(w - 1, x + 1); ++nx)
          if (plane(nx, ny) > v)
          {
            isMax = false;
            break;
          }
      if (isMax)
        candidates.push_back({x, y, {x - cx, y - cy}, v, v / baseline});
    }

  // ties broken by raster order so results are deterministic
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });

  for (const Peak& c : candidates)
  {
    const bool suppressed =
      std::any_of(list.peaks.begin(), list.peaks.end(), [&](const Peak& p) {
        return std::max(std::abs(p.x - c.x), std::abs(p.y - c.y)) <=
               search.suppressionRadius;
      });
    if (suppressed)
      continue;
    list.peaks.push_back(c);
    if (static_cast<int>(list.peaks.size()) == maxPeaks)
      break;
  }
  return list;
}

HistogramReport histogram(const Frame& codes, int bits)
{
  const QuantSpec spec = QuantSpec::withBits(bits);
  const int top = static_cast<int>(spec.maxCode());

  HistogramReport report;
  report.bits = bits;
  report.counts.assign(static_cast<std::size_t>(top) + 1, 0);
  report.pixelCount = codes.size();
  for (std::size_t i = 0; i < codes.size(); ++i)
  {
    const double c = codes[i];
    if (!(c >= 0.0 && c <= top) || c != std::floor(c))
      throw std::out_of_range("histogram input " + std::to_string(c) +
                              " at index " + std::to_string(i) +
                              " is not a valid " + std::to_string(bits) +
                              "-bit code");
    const int code = static_cast<int>(c);
    ++report.counts[code];
    report.maxUsedCode = std::max(report.maxUsedCode, code);
  }
  report.occupancyFraction = report.maxUsedCode / spec.maxCode();
  return report;
}

HistogramReport conjugateHistogram(const Frame& balanced, double jtcScale,
                                   const QuantSpec& slm)
{
  if (!(jtcScale > 0.0))
    throw std::invalid_argument("JTC scale must be positive");
  requireFinite(balanced, "balanced signal");

  const double top = slm.maxCode();
  const double lowest =
    *std::min_element(balanced.values().begin(), balanced.values().end());
  Frame scaled(balanced.width(), balanced.height());
  for (std::size_t i = 0; i < balanced.size(); ++i)
    scaled[i] = (balanced[i] - lowest) * top / jtcScale;
  return histogram(quantize(scaled, slm), slm.bits);
}

std::string_view toString(CaptureMode mode)
{
  switch (mode)
  {
    case CaptureMode::ThreeFpa: return "three_fpa";
    case CaptureMode::Multiplexed1Fpa: return "multiplexed_1fpa";
    case CaptureMode::SequentialSlm: return "sequential_slm";
  }
  throw std::invalid_argument("unknown capture mode");
}

std::string_view toString(Limiter limiter)
{
  switch (limiter)
  {
    case Limiter::Slm: return "slm";
    case Limiter::Fpa: return "fpa";
    case Limiter::Both: return "both";
  }
  throw std::invalid_argument("unknown limiter");
}

CaptureMode parseCaptureMode(std::string_view name)
{
  if (name == "three_fpa")
    return CaptureMode::ThreeFpa;
  if (name == "multiplexed_1fpa" || name == "multiplexed")
    return CaptureMode::Multiplexed1Fpa;
  if (name == "sequential_slm" || name == "sequential")
    return CaptureMode::SequentialSlm;
  throw std::invalid_argument("unknown capture mode '" + std::string(name) +
                              "'; expected three_fpa, multiplexed_1fpa or "
                              "sequential_slm");
}

ThroughputEstimate throughput(CaptureMode mode, double slmFps, double fpaFps)
{
  if (!(slmFps > 0.0) || !(fpaFps > 0.0) || !std::isfinite(slmFps) ||
      !std::isfinite(fpaFps))
    throw std::invalid_argument("device frame rates must be positive");

  // Effective correlation rate each device alone would allow.
  double slmRate = slmFps;
  double fpaRate = fpaFps;
  switch (mode)
  {
    case CaptureMode::ThreeFpa: break;
    case CaptureMode::Multiplexed1Fpa: fpaRate = fpaFps / 3.0; break;
    case CaptureMode::SequentialSlm: slmRate = slmFps / 3.0; break;
  }

  ThroughputEstimate est;
  est.mode = mode;
  est.slmFps = slmFps;
  est.fpaFps = fpaFps;
  est.correlationsPerSecond = std::min(slmRate, fpaRate);
  est.limitingComponent = slmRate == fpaRate ? Limiter::Both
                          : slmRate < fpaRate ? Limiter::Slm
                                              : Limiter::Fpa;
  return est;
}

} // namespace bojtc
