#pragma once

#include "bojtc/correlator.hpp"

#include <span>
#include <vector>

namespace bojtc {

struct ImagePair
{
  Frame ref;
  Frame query;
};

struct CalibrationReport
{
  double ul = 0.0;
  double ll = 0.0;
  std::vector<double> perRunMax;
  std::vector<double> perRunMin;
  std::size_t runCount = 0;

  RescaleParams params() const { return {ll, ul}; }
};

/// UL = mean of per-frame maxima, LL = mean of per-frame minima. Throws on an
/// empty set and when UL <= LL.
CalibrationReport summarizeExtrema(std::span<const Frame> signals);

/// Balanced signals of every pair on the aligned, quantized capture path,
/// reduced to mean extrema. Pairs are evaluated concurrently.
CalibrationReport calibrate(std::span<const ImagePair> pairs,
                            const Geometry& geometry, const Devices& devices);

/// Same reduction over HOC combinations.
CalibrationReport calibrateHoc(std::span<const ImagePair> pairs,
                               const Geometry& geometry,
                               const PlaneWaves& waves, const Devices& devices);

/// Maximum of the captured JPS of the reference autocorrelation.
double calibrateJtcScale(const Frame& ref, const Geometry& geometry,
                         const Devices& devices);

} // namespace bojtc
