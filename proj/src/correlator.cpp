#include "bojtc/correlator.hpp"

#include "bojtc/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bojtc {

double Geometry::defaultDcRadius() const
{
  return std::hypot(offset.x, offset.y) / 2.0;
}

Devices Devices::ideal()
{
  Devices d;
  d.slm.reset();
  d.fpa.reset();
  d.outFpa.reset();
  return d;
}

std::string_view toString(CaptureSchedule schedule)
{
  return schedule == CaptureSchedule::Simultaneous ? "simultaneous"
                                                   : "multiplexed";
}

std::string_view toString(Architecture arch)
{
  switch (arch)
  {
    case Architecture::Jtc: return "jtc";
    case Architecture::Bojtc: return "bojtc";
    case Architecture::Hoc: return "hoc";
  }
  throw std::invalid_argument("unknown architecture");
}

void RescaleParams::validate() const
{
  if (!std::isfinite(lowerLimit) || !std::isfinite(upperLimit) ||
      !(upperLimit > lowerLimit))
    throw std::invalid_argument("rescale limits need UL > LL, got UL=" +
                                std::to_string(upperLimit) +
                                " LL=" + std::to_string(lowerLimit));
}

namespace {

Frame placedAlone(const Frame& img, Offset position, const Geometry& g)
{
  Frame canvas(g.canvasWidth, g.canvasHeight);
  placeCentered(canvas, img, position);
  return canvas;
}

CaptureSet capture(const Frame& ref, const Frame& query,
                   const Geometry& geometry, const BitDepth& fpa,
                   double fullScale, CaptureSchedule schedule)
{
  // validates bounds and the no-overlap condition
  (void)embedWithOffset(ref, query, geometry.offset, geometry.canvasWidth,
                        geometry.canvasHeight);
  if (fpa && !(fullScale > 0.0))
    throw std::invalid_argument("FPA full scale must be positive");

  const auto [posRef, posQuery] = offsetPositions(geometry.offset);
  const ComplexField refFt = ft2Centered(placedAlone(ref, posRef, geometry));
  const ComplexField queryFt =
    ft2Centered(placedAlone(query, posQuery, geometry));

  Frame jps(geometry.canvasWidth, geometry.canvasHeight);
  for (std::size_t i = 0; i < jps.size(); ++i)
    jps[i] = std::norm(refFt[i] + queryFt[i]);
  const Frame refI = intensity(refFt);
  const Frame queryI = intensity(queryFt);

  CaptureSet cap;
  cap.meta.geometry = geometry;
  cap.meta.fpa = fpa;
  cap.meta.fullScale = fullScale;
  cap.meta.schedule = schedule;
  cap.meta.saturatedJps = countSaturated(jps, fpa, fullScale);
  cap.meta.saturatedRef = countSaturated(refI, fpa, fullScale);
  cap.meta.saturatedQuery = countSaturated(queryI, fpa, fullScale);
  cap.jps = fpaCapture(jps, fpa, fullScale);
  cap.refIntensity = fpaCapture(refI, fpa, fullScale);
  cap.queryIntensity = fpaCapture(queryI, fpa, fullScale);
  return cap;
}

double resolveDcRadius(const PeakOptions& opts, double fallback)
{
  return opts.dcRadius >= 0.0 ? opts.dcRadius : fallback;
}

} // namespace

CaptureSet captureSimultaneous(const Frame& ref, const Frame& query,
                               const Geometry& geometry, const BitDepth& fpa,
                               double fullScale)
{
  return capture(ref, query, geometry, fpa, fullScale,
                 CaptureSchedule::Simultaneous);
}

CaptureSet captureMultiplexed(const Frame& ref, const Frame& query,
                              const Geometry& geometry, const BitDepth& fpa,
                              double fullScale)
{
  // State 1: both open (JPS). State 2: query blocked. State 3: ref blocked.
  // The detected quantities are the same as the simultaneous layout.
  return capture(ref, query, geometry, fpa, fullScale,
                 CaptureSchedule::Multiplexed);
}

CaptureSet misalign(const CaptureSet& cap, const Misalignment& mis)
{
  CaptureSet out = cap;
  out.refIntensity = shiftZeroFill(cap.refIntensity, mis.refShift);
  out.queryIntensity = shiftZeroFill(cap.queryIntensity, mis.queryShift);
  return out;
}

Frame balance(const CaptureSet& cap, const Misalignment& mis)
{
  if (!cap.jps.sameShape(cap.refIntensity) ||
      !cap.jps.sameShape(cap.queryIntensity))
    throw std::invalid_argument("capture frames differ in shape");

  const Frame refI = shiftZeroFill(cap.refIntensity, mis.refShift);
  const Frame queryI = shiftZeroFill(cap.queryIntensity, mis.queryShift);
  Frame s(cap.jps.width(), cap.jps.height());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = cap.jps[i] - refI[i] - queryI[i];
  return s;
}

Frame rescaleForSlm(const Frame& balanced, const RescaleParams& params,
                    const BitDepth& slm)
{
  params.validate();
  if (!slm)
  {
    requireFinite(balanced, "balanced signal");
    return balanced;
  }

  // multiply before dividing so that the midpoint lands exactly on .5
  const double top = slm->maxCode();
  const double span = params.upperLimit - params.lowerLimit;
  Frame scaled(balanced.width(), balanced.height());
  for (std::size_t i = 0; i < scaled.size(); ++i)
    scaled[i] = (balanced[i] - params.lowerLimit) * top / span;

  QuantSpec clamped = *slm;
  clamped.saturate = true;
  return quantize(scaled, clamped);
}

std::size_t countClipped(const Frame& balanced, const RescaleParams& params)
{
  return static_cast<std::size_t>(std::count_if(
    balanced.values().begin(), balanced.values().end(), [&](double v) {
      return v < params.lowerLimit || v > params.upperLimit;
    }));
}

Frame jtcSlmSignal(const CaptureSet& cap, const BitDepth& slm, double jtcScale)
{
  if (!(jtcScale > 0.0) || !std::isfinite(jtcScale))
    throw std::invalid_argument("JTC scale must be positive");
  if (!slm)
    return cap.jps;

  const double top = slm->maxCode();
  Frame scaled(cap.jps.width(), cap.jps.height());
  for (std::size_t i = 0; i < scaled.size(); ++i)
    scaled[i] = cap.jps[i] * top / jtcScale;

  QuantSpec clamped = *slm;
  clamped.saturate = true;
  return quantize(scaled, clamped);
}

Frame outputStage(const Frame& slmSignal, const BitDepth& slm,
                  const BitDepth& outFpa, double outFullScale)
{
  const Frame amplitude = slmProject(slmSignal, slm);
  const Frame detected = intensity(ft2Centered(amplitude));
  if (!outFpa)
    return detected;
  return fpaCapture(detected, outFpa, outFullScale);
}

CorrelationResult replayBojtc(const CaptureSet& cap, const Devices& devices,
                              const RescaleParams& params, double baseline,
                              const Misalignment& mis, const PeakOptions& peaks)
{
  CorrelationResult result;
  result.architecture = Architecture::Bojtc;
  result.misalignment = mis;
  result.balanced = balance(cap, mis);
  result.slmSignal = rescaleForSlm(result.balanced, params, devices.slm);
  result.clippedPixels =
    devices.slm ? countClipped(result.balanced, params) : 0;
  result.output = outputStage(result.slmSignal, devices.slm, devices.outFpa,
                              devices.outFullScale);
  result.peaks = findPeaks(
    result.output,
    resolveDcRadius(peaks, cap.meta.geometry.defaultDcRadius()), baseline,
    peaks.maxPeaks, peaks.search);
  result.capture = misalign(cap, mis);
  return result;
}

CorrelationResult replayJtc(const CaptureSet& cap, const Devices& devices,
                            double jtcScale, double baseline,
                            const PeakOptions& peaks)
{
  CorrelationResult result;
  result.architecture = Architecture::Jtc;
  result.slmSignal = jtcSlmSignal(cap, devices.slm, jtcScale);
  if (devices.slm)
    result.clippedPixels = static_cast<std::size_t>(
      std::count_if(cap.jps.values().begin(), cap.jps.values().end(),
                    [jtcScale](double v) { return v > jtcScale; }));
  result.output = outputStage(result.slmSignal, devices.slm, devices.outFpa,
                              devices.outFullScale);
  result.peaks = findPeaks(
    result.output,
    resolveDcRadius(peaks, cap.meta.geometry.defaultDcRadius()), baseline,
    peaks.maxPeaks, peaks.search);
  result.capture = cap;
  return result;
}

double bojtcBaseline(const Frame& ref, const Geometry& geometry,
                     const Devices& devices, const RescaleParams& params,
                     const PeakOptions& peaks)
{
  const CaptureSet cap = captureSimultaneous(ref, ref, geometry, devices.fpa,
                                             devices.fpaFullScale);
  const CorrelationResult auto_ = replayBojtc(cap, devices, params, 1.0, {}, peaks);
  const double top = auto_.peaks.topValue();
  if (!(top > 0.0))
    throw std::domain_error(
      "BOJTC autocorrelation of the reference has no off-DC peak; the "
      "normalization baseline is undefined");
  return top;
}

CorrelationResult runBojtc(const Frame& ref, const Frame& query,
                           const Geometry& geometry, const Devices& devices,
                           const RescaleParams& params, const Misalignment& mis,
                           const PeakOptions& peaks,
                           std::optional<double> baseline)
{
  const double norm =
    baseline ? *baseline : bojtcBaseline(ref, geometry, devices, params, peaks);
  const CaptureSet cap = captureSimultaneous(ref, query, geometry, devices.fpa,
                                             devices.fpaFullScale);
  return replayBojtc(cap, devices, params, norm, mis, peaks);
}

CorrelationResult runJtc(const Frame& ref, const Frame& query,
                         const Geometry& geometry, const Devices& devices,
                         double jtcScale, double baseline,
                         const Misalignment& mis, const PeakOptions& peaks)
{
  const CaptureSet cap = captureSimultaneous(ref, query, geometry, devices.fpa,
                                             devices.fpaFullScale);
  CorrelationResult result =
    replayJtc(misalign(cap, mis), devices, jtcScale, baseline, peaks);
  result.misalignment = mis;
  return result;
}

std::pair<Offset, Offset> hocPositions(Offset offset)
{
  auto floorQuarter = [](int v) { return v >= 0 ? v / 4 : -((-v + 3) / 4); };
  const Offset ref{-floorQuarter(offset.x), -floorQuarter(offset.y)};
  return {ref, Offset{ref.x + offset.x, ref.y + offset.y}};
}

HocCaptureSet captureHoc(const Frame& ref, const Frame& query,
                         const Geometry& geometry, const PlaneWaves& waves,
                         const BitDepth& fpa, double fullScale)
{
  if (fpa && !(fullScale > 0.0))
    throw std::invalid_argument("FPA full scale must be positive");
  if (waves.ref == Complex{} || waves.query == Complex{})
    throw std::invalid_argument(
      "HOC plane-wave amplitudes must be nonzero; the combination "
      "degenerates otherwise");

  const auto [posRef, posQuery] = hocPositions(geometry.offset);
  const ComplexField refFt = ft2Centered(placedAlone(ref, posRef, geometry));
  const ComplexField queryFt =
    ft2Centered(placedAlone(query, posQuery, geometry));

  const int w = geometry.canvasWidth;
  const int h = geometry.canvasHeight;
  Frame refInterf(w, h);
  Frame queryInterf(w, h);
  for (std::size_t i = 0; i < refInterf.size(); ++i)
  {
    refInterf[i] = std::norm(refFt[i] + waves.ref);
    queryInterf[i] = std::norm(queryFt[i] + waves.query);
  }

  HocCaptureSet cap;
  cap.meta.geometry = geometry;
  cap.meta.fpa = fpa;
  cap.meta.fullScale = fullScale;
  cap.meta.saturatedJps = countSaturated(refInterf, fpa, fullScale) +
                          countSaturated(queryInterf, fpa, fullScale);
  const Frame refI = intensity(refFt);
  const Frame queryI = intensity(queryFt);
  cap.meta.saturatedRef = countSaturated(refI, fpa, fullScale);
  cap.meta.saturatedQuery = countSaturated(queryI, fpa, fullScale);

  cap.refInterference = fpaCapture(refInterf, fpa, fullScale);
  cap.queryInterference = fpaCapture(queryInterf, fpa, fullScale);
  cap.refIntensity = fpaCapture(refI, fpa, fullScale);
  cap.queryIntensity = fpaCapture(queryI, fpa, fullScale);
  cap.crIntensity = fpaCapture(Frame(w, h, std::norm(waves.ref)), fpa, fullScale);
  cap.cqIntensity =
    fpaCapture(Frame(w, h, std::norm(waves.query)), fpa, fullScale);
  return cap;
}

Frame hocCombine(const HocCaptureSet& cap)
{
  const Frame& base = cap.refInterference;
  for (const Frame* f : {&cap.queryInterference, &cap.refIntensity,
                         &cap.queryIntensity, &cap.crIntensity,
                         &cap.cqIntensity})
    if (!base.sameShape(*f))
      throw std::invalid_argument("HOC capture frames differ in shape");

  Frame s(base.width(), base.height());
  for (std::size_t i = 0; i < s.size(); ++i)
  {
    const double refTerm =
      cap.refInterference[i] - cap.refIntensity[i] - cap.crIntensity[i];
    const double queryTerm =
      cap.queryInterference[i] - cap.queryIntensity[i] - cap.cqIntensity[i];
    s[i] = refTerm * queryTerm;
  }
  return s;
}

namespace {

CorrelationResult replayHoc(const HocCaptureSet& cap, const Devices& devices,
                            const RescaleParams& params, double baseline,
                            const PeakOptions& peaks)
{
  CorrelationResult result;
  result.architecture = Architecture::Hoc;
  result.balanced = hocCombine(cap);
  result.slmSignal = rescaleForSlm(result.balanced, params, devices.slm);
  result.clippedPixels =
    devices.slm ? countClipped(result.balanced, params) : 0;
  result.output = outputStage(result.slmSignal, devices.slm, devices.outFpa,
                              devices.outFullScale);
  result.peaks = findPeaks(
    result.output,
    resolveDcRadius(peaks, cap.meta.geometry.defaultDcRadius() / 2.0),
    baseline, peaks.maxPeaks, peaks.search);
  result.hocCapture = cap;
  return result;
}

} // namespace

double hocBaseline(const Frame& ref, const Geometry& geometry,
                   const PlaneWaves& waves, const Devices& devices,
                   const RescaleParams& params, const PeakOptions& peaks)
{
  const HocCaptureSet cap = captureHoc(ref, ref, geometry, waves, devices.fpa,
                                       devices.fpaFullScale);
  const double top = replayHoc(cap, devices, params, 1.0, peaks).peaks.topValue();
  if (!(top > 0.0))
    throw std::domain_error(
      "HOC autocorrelation of the reference has no off-DC peak");
  return top;
}

CorrelationResult runHoc(const Frame& ref, const Frame& query,
                         const Geometry& geometry, const PlaneWaves& waves,
                         const Devices& devices, const RescaleParams& params,
                         const PeakOptions& peaks,
                         std::optional<double> baseline)
{
  const double norm = baseline ? *baseline
                               : hocBaseline(ref, geometry, waves, devices,
                                             params, peaks);
  const HocCaptureSet cap = captureHoc(ref, query, geometry, waves, devices.fpa,
                                       devices.fpaFullScale);
  return replayHoc(cap, devices, params, norm, peaks);
}

} // namespace bojtc
