#include "bojtc/calibration.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <stdexcept>

namespace bojtc {

CalibrationReport summarizeExtrema(std::span<const Frame> signals)
{
  if (signals.empty())
    throw std::invalid_argument("calibration corpus is empty");

  CalibrationReport report;
  report.runCount = signals.size();
  for (const Frame& s : signals)
  {
    const auto [lo, hi] = std::minmax_element(s.values().begin(), s.values().end());
    report.perRunMax.push_back(*hi);
    report.perRunMin.push_back(*lo);
  }
  const double n = static_cast<double>(signals.size());
  report.ul =
    std::accumulate(report.perRunMax.begin(), report.perRunMax.end(), 0.0) / n;
  report.ll =
    std::accumulate(report.perRunMin.begin(), report.perRunMin.end(), 0.0) / n;
  if (!(report.ul > report.ll))
    throw std::domain_error(
      "degenerate calibration corpus: balanced signals are constant (UL == "
      "LL = " + std::to_string(report.ul) + ")");
  return report;
}

namespace {

template <typename Fn>
std::vector<Frame> mapPairs(std::span<const ImagePair> pairs, Fn fn)
{
  std::vector<std::future<Frame>> jobs;
  jobs.reserve(pairs.size());
  for (const ImagePair& p : pairs)
    jobs.push_back(std::async(std::launch::async, fn, std::cref(p)));
  std::vector<Frame> out;
  out.reserve(pairs.size());
  for (auto& j : jobs)
    out.push_back(j.get());
  return out;
}

} // namespace

CalibrationReport calibrate(std::span<const ImagePair> pairs,
                            const Geometry& geometry, const Devices& devices)
{
  if (pairs.empty())
    throw std::invalid_argument("calibration corpus is empty");
  const auto signals = mapPairs(pairs, [&](const ImagePair& p) {
    return balance(captureSimultaneous(p.ref, p.query, geometry, devices.fpa,
                                       devices.fpaFullScale));
  });
  return summarizeExtrema(signals);
}

CalibrationReport calibrateHoc(std::span<const ImagePair> pairs,
                               const Geometry& geometry,
                               const PlaneWaves& waves, const Devices& devices)
{
  if (pairs.empty())
    throw std::invalid_argument("calibration corpus is empty");
  const auto signals = mapPairs(pairs, [&](const ImagePair& p) {
    return hocCombine(captureHoc(p.ref, p.query, geometry, waves, devices.fpa,
                                 devices.fpaFullScale));
  });
  return summarizeExtrema(signals);
}

double calibrateJtcScale(const Frame& ref, const Geometry& geometry,
                         const Devices& devices)
{
  if (std::all_of(ref.values().begin(), ref.values().end(),
                  [](double v) { return v == 0.0; }))
    throw std::invalid_argument("JTC scale needs a nonzero reference image");
  const CaptureSet cap = captureSimultaneous(ref, ref, geometry, devices.fpa,
                                             devices.fpaFullScale);
  const double top =
    *std::max_element(cap.jps.values().begin(), cap.jps.values().end());
  if (!(top > 0.0))
    throw std::domain_error("reference autocorrelation JPS is zero after "
                            "capture; raise the FPA full scale sensitivity");
  return top;
}

} // namespace bojtc
