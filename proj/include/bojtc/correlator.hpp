#pragma once

#include "bojtc/analysis.hpp"
#include "bojtc/grid.hpp"
#include "bojtc/optics.hpp"

#include <optional>
#include <string_view>

namespace bojtc {

/// Input-plane layout shared by every pipeline: canvas size plus the
/// displacement of the query relative to the reference.
struct Geometry
{
  Offset offset{64, 0};
  int canvasWidth = 256;
  int canvasHeight = 256;

  /// Default DC exclusion radius, |offset| / 2.
  double defaultDcRadius() const;
};

/// The device chain of one correlator. An unset BitDepth is an ideal device.
struct Devices
{
  BitDepth slm = QuantSpec{8};
  /// The input-stage FPAs (JPS, reference and query intensities).
  BitDepth fpa = QuantSpec{10};
  double fpaFullScale = 1.0;
  BitDepth outFpa;
  double outFullScale = 1.0;

  /// Every stage with infinite bit-depth.
  static Devices ideal();
};

enum class CaptureSchedule
{
  Simultaneous, ///< separate FPAs expose at once
  Multiplexed,  ///< one FPA, shutter cycles through the three states
};

std::string_view toString(CaptureSchedule schedule);

struct CaptureMeta
{
  Geometry geometry;
  BitDepth fpa;
  double fullScale = 1.0;
  CaptureSchedule schedule = CaptureSchedule::Simultaneous;
  std::size_t saturatedJps = 0;
  std::size_t saturatedRef = 0;
  std::size_t saturatedQuery = 0;
};

/// One correlation shot: the joint power spectrum and both self-intensities,
/// in FPA code units (or raw intensity for an ideal FPA).
struct CaptureSet
{
  Frame jps;
  Frame refIntensity;
  Frame queryIntensity;
  CaptureMeta meta;
};

/// Integer-pixel shifts of the separately measured self-intensities relative
/// to the JPS detector.
struct Misalignment
{
  Offset refShift;
  Offset queryShift;

  bool isZero() const { return refShift == Offset{} && queryShift == Offset{}; }
};

/// Fixed rescaling limits mapping the signed balanced signal onto SLM codes.
struct RescaleParams
{
  double lowerLimit = 0.0;
  double upperLimit = 1.0;

  void validate() const;
};

CaptureSet captureSimultaneous(const Frame& ref, const Frame& query,
                               const Geometry& geometry, const BitDepth& fpa,
                               double fullScale);

/// Same measurements as captureSimultaneous, taken by one FPA in three
/// sequential shutter states.
CaptureSet captureMultiplexed(const Frame& ref, const Frame& query,
                              const Geometry& geometry, const BitDepth& fpa,
                              double fullScale);

/// Shifts the self-intensity frames of a capture.
CaptureSet misalign(const CaptureSet& cap, const Misalignment& mis);

/// S = jps - shift(ref) - shift(query). Real, possibly negative.
Frame balance(const CaptureSet& cap, const Misalignment& mis = {});

/// Fixed rescale onto a finite SLM: (S - LL) * maxCode / (UL - LL), clamped
/// and rounded. An ideal SLM has no finite range, so S passes through.
Frame rescaleForSlm(const Frame& balanced, const RescaleParams& params,
                    const BitDepth& slm);

/// Pixels of S outside [LL, UL], i.e. clamped by rescaleForSlm.
std::size_t countClipped(const Frame& balanced, const RescaleParams& params);

/// Classical JTC path: jps * maxCode / jtcScale, clamped and rounded. An
/// ideal SLM passes the JPS through.
Frame jtcSlmSignal(const CaptureSet& cap, const BitDepth& slm, double jtcScale);

/// SLM projection, optical Fourier transform and output detection.
Frame outputStage(const Frame& slmSignal, const BitDepth& slm,
                  const BitDepth& outFpa, double outFullScale);

enum class Architecture
{
  Jtc,
  Bojtc,
  Hoc,
};

std::string_view toString(Architecture arch);

struct PeakOptions
{
  /// Negative selects the architecture default.
  double dcRadius = -1.0;
  int maxPeaks = 8;
  PeakSearch search;
};

struct PlaneWaves
{
  Complex ref{1.0, 0.0};
  Complex query{1.0, 0.0};
};

/// The six HOC measurements.
struct HocCaptureSet
{
  Frame refInterference;   ///< |R~ + Cr|^2
  Frame queryInterference; ///< |Q~ + Cq|^2
  Frame refIntensity;
  Frame queryIntensity;
  Frame crIntensity;
  Frame cqIntensity;
  CaptureMeta meta;
};

struct CorrelationResult
{
  Architecture architecture = Architecture::Bojtc;
  Frame output;
  PeakList peaks;
  /// Set for JTC and BOJTC runs.
  std::optional<CaptureSet> capture;
  /// Set for HOC runs.
  std::optional<HocCaptureSet> hocCapture;
  /// Balanced signal before rescaling; empty for JTC runs.
  Frame balanced;
  /// What the output SLM was driven with.
  Frame slmSignal;
  /// Pixels clamped while forming slmSignal.
  std::size_t clippedPixels = 0;
  Misalignment misalignment;
};

/// Balances and rescales an existing capture, then runs the output stage.
CorrelationResult replayBojtc(const CaptureSet& cap, const Devices& devices,
                              const RescaleParams& params, double baseline,
                              const Misalignment& mis = {},
                              const PeakOptions& peaks = {});

/// Sends the raw JPS of an existing capture through the output stage.
CorrelationResult replayJtc(const CaptureSet& cap, const Devices& devices,
                            double jtcScale, double baseline,
                            const PeakOptions& peaks = {});

/// Strongest off-DC output of the aligned BOJTC autocorrelation of ref: the
/// normalization baseline for every JTC and BOJTC peak.
double bojtcBaseline(const Frame& ref, const Geometry& geometry,
                     const Devices& devices, const RescaleParams& params,
                     const PeakOptions& peaks = {});

/// Capture, balance, rescale and output. The baseline is computed from ref
/// when not supplied.
CorrelationResult runBojtc(const Frame& ref, const Frame& query,
                           const Geometry& geometry, const Devices& devices,
                           const RescaleParams& params,
                           const Misalignment& mis = {},
                           const PeakOptions& peaks = {},
                           std::optional<double> baseline = {});

/// Capture and output with no balancing. The misalignment is applied to the
/// capture like in runBojtc; the JTC path never reads the shifted frames.
CorrelationResult runJtc(const Frame& ref, const Frame& query,
                         const Geometry& geometry, const Devices& devices,
                         double jtcScale, double baseline,
                         const Misalignment& mis = {},
                         const PeakOptions& peaks = {});

/// Input-plane positions of the HOC images: the reference at -offset/4 and
/// the query at reference + offset. Cross-correlation lobes then sit at
/// +-offset and convolution lobes near +-offset/2.
std::pair<Offset, Offset> hocPositions(Offset offset);

/// Each image interferes with its own spatially constant plane wave. The
/// images sit on separate SLMs, so only canvas bounds are checked.
HocCaptureSet captureHoc(const Frame& ref, const Frame& query,
                         const Geometry& geometry, const PlaneWaves& waves,
                         const BitDepth& fpa, double fullScale);

/// (|R~+Cr|^2 - |R~|^2 - |Cr|^2) * (|Q~+Cq|^2 - |Q~|^2 - |Cq|^2)
Frame hocCombine(const HocCaptureSet& cap);

/// Strongest off-DC output of the HOC autocorrelation of ref.
double hocBaseline(const Frame& ref, const Geometry& geometry,
                   const PlaneWaves& waves, const Devices& devices,
                   const RescaleParams& params, const PeakOptions& peaks = {});

CorrelationResult runHoc(const Frame& ref, const Frame& query,
                         const Geometry& geometry, const PlaneWaves& waves,
                         const Devices& devices, const RescaleParams& params,
                         const PeakOptions& peaks = {},
                         std::optional<double> baseline = {});

} // namespace bojtc
