#include "bojtc/cli/commands.hpp"

#include "bojtc/calibration.hpp"
#include "bojtc/charts.hpp"
#include "bojtc/cli/config.hpp"
#include "bojtc/cli/serialize.hpp"
#include "bojtc/field.hpp"
#include "bojtc/io/pgm.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <optional>

namespace bojtc::cli {

namespace fs = std::filesystem;

namespace {

// Raw option values as typed by the user; resolved into RunConfig.
struct PipelineFlags
{
  std::string ref;
  std::string query;
  std::string mode = "bojtc";
  std::string offset = "64,0";
  std::string canvas = "256x256";
  std::string slmBits = "8";
  std::string fpaBits = "10";
  std::string fpaFullScale = "auto";
  std::string outFpaBits = "ideal";
  double outFullScale = 1.0;
  std::optional<double> ul;
  std::optional<double> ll;
  std::string calibration;
  std::string corpus;
  std::string misalignRef = "0,0";
  std::string misalignQuery = "0,0";
  std::string jtcScale = "auto";
  std::string planeWaveRef = "1,0";
  std::string planeWaveQuery = "1,0";
  std::string schedule = "simultaneous";
  double dcRadius = -1.0;
  int maxPeaks = 8;
  std::string outDir = ".";
};

struct RunConfig
{
  Architecture mode = Architecture::Bojtc;
  fs::path refPath;
  fs::path queryPath;
  Geometry geometry;
  Devices devices;
  bool autoFullScale = true;
  std::optional<RescaleParams> limits;
  fs::path calibrationPath;
  fs::path corpusDir;
  Misalignment misalignment;
  std::optional<double> jtcScale;
  PlaneWaves waves;
  CaptureSchedule schedule = CaptureSchedule::Simultaneous;
  PeakOptions peaks;
  fs::path outDir;
};

double parseDouble(const std::string& text, const std::string& what)
{
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw UsageError(what + ": expected a number, got '" + text + "'");
  return v;
}

int parseInt(const std::string& text, const std::string& what)
{
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw UsageError(what + ": expected an integer, got '" + text + "'");
  return v;
}

std::pair<std::string, std::string> splitPair(const std::string& text,
                                              const std::string& seps,
                                              const std::string& what)
{
  const auto pos = text.find_first_of(seps);
  if (pos == std::string::npos)
    throw UsageError(what + ": expected two values separated by '" + seps +
                     "', got '" + text + "'");
  return {text.substr(0, pos), text.substr(pos + 1)};
}

Offset parseOffset(const std::string& text, const std::string& what)
{
  const auto [a, b] = splitPair(text, ",", what);
  return {parseInt(a, what), parseInt(b, what)};
}

BitDepth parseBits(const std::string& text, const std::string& what)
{
  if (text == "ideal" || text == "inf")
    return std::nullopt;
  const int bits = parseInt(text, what);
  if (bits < 1 || bits > 16)
    throw UsageError(what + ": bit-depth must lie in [1, 16] or be 'ideal'");
  return QuantSpec::withBits(bits);
}

Complex parseComplex(const std::string& text, const std::string& what)
{
  const auto [re, im] = splitPair(text, ",", what);
  return {parseDouble(re, what), parseDouble(im, what)};
}

Architecture parseArchitecture(const std::string& text)
{
  if (text == "jtc")
    return Architecture::Jtc;
  if (text == "bojtc")
    return Architecture::Bojtc;
  if (text == "hoc")
    return Architecture::Hoc;
  throw UsageError("--mode must be jtc, bojtc or hoc, got '" + text + "'");
}

Frame loadImage(const fs::path& path, const char* what)
{
  if (path.empty())
    throw UsageError(std::string(what) + " image is required");
  if (!fs::exists(path))
    throw UsageError(std::string(what) + " image " + path.string() +
                     " does not exist");
  try
  {
    return io::toFrame(io::readPgm(path));
  }
  catch (const std::exception& e)
  {
    throw UsageError(e.what());
  }
}

void addPipelineOptions(CLI::App& cmd, PipelineFlags& f, bool withQuery)
{
  cmd.add_option("--ref", f.ref, "reference image (P5 PGM)");
  if (withQuery)
    cmd.add_option("--query", f.query, "query image (P5 PGM)");
  cmd.add_option("--offset", f.offset, "query displacement x,y in pixels")
    ->capture_default_str();
  cmd.add_option("--canvas", f.canvas, "canvas WIDTHxHEIGHT, both even")
    ->capture_default_str();
  cmd.add_option("--bits,--slm-bits", f.slmBits, "SLM bit-depth or 'ideal'")
    ->capture_default_str();
  cmd.add_option("--fpa-bits", f.fpaBits, "input FPA bit-depth or 'ideal'")
    ->capture_default_str();
  cmd.add_option("--fpa-full-scale", f.fpaFullScale,
                 "intensity mapped to the top FPA code, or 'auto' for the "
                 "peak of the ideal reference autocorrelation JPS")
    ->capture_default_str();
  cmd.add_option("--out-fpa-bits", f.outFpaBits,
                 "output FPA bit-depth or 'ideal'")
    ->capture_default_str();
  cmd.add_option("--out-full-scale", f.outFullScale, "output FPA full scale")
    ->capture_default_str();
  cmd.add_option("--schedule", f.schedule, "simultaneous or multiplexed")
    ->capture_default_str();
  cmd.add_option("--plane-wave-ref", f.planeWaveRef, "HOC C_r as re,im")
    ->capture_default_str();
  cmd.add_option("--plane-wave-query", f.planeWaveQuery, "HOC C_q as re,im")
    ->capture_default_str();
  cmd.add_option("--config", "key=value file; flags override its entries");
}

void addCorrelationOptions(CLI::App& cmd, PipelineFlags& f)
{
  cmd.add_option("--ul", f.ul, "upper rescale limit");
  cmd.add_option("--ll", f.ll, "lower rescale limit");
  cmd.add_option("--calibration", f.calibration,
                 "calibration report JSON supplying UL/LL");
  cmd.add_option("--corpus", f.corpus,
                 "calibration corpus directory supplying UL/LL");
  cmd.add_option("--misalign,--misalign-ref", f.misalignRef,
                 "shift x,y of the reference self-intensity")
    ->capture_default_str();
  cmd.add_option("--misalign-query", f.misalignQuery,
                 "shift x,y of the query self-intensity")
    ->capture_default_str();
  cmd.add_option("--jtc-scale", f.jtcScale,
                 "JPS value mapped to the top SLM code, or 'auto'")
    ->capture_default_str();
  cmd.add_option("--dc-radius", f.dcRadius,
                 "DC exclusion radius; negative selects the default")
    ->capture_default_str();
  cmd.add_option("--max-peaks", f.maxPeaks, "peaks reported")
    ->capture_default_str();
  cmd.add_option("--out", f.outDir, "output directory")->capture_default_str();
}

void requireEmbeddable(const RunConfig& c, const Frame& ref, const Frame& query)
{
  try
  {
    if (c.mode == Architecture::Hoc)
    {
      const auto [pr, pq] = hocPositions(c.geometry.offset);
      Frame canvas(c.geometry.canvasWidth, c.geometry.canvasHeight);
      placeCentered(canvas, ref, pr);
      placeCentered(canvas, query, pq);
    }
    else
      (void)embedWithOffset(ref, query, c.geometry.offset,
                            c.geometry.canvasWidth, c.geometry.canvasHeight);
  }
  catch (const std::exception& e)
  {
    throw UsageError(std::string("offset/canvas do not fit the images: ") +
                     e.what());
  }
}

RunConfig resolve(const PipelineFlags& f)
{
  RunConfig c;
  c.mode = parseArchitecture(f.mode);
  c.refPath = f.ref;
  c.queryPath = f.query;
  c.geometry.offset = parseOffset(f.offset, "--offset");
  const auto [w, h] = splitPair(f.canvas, "x,", "--canvas");
  c.geometry.canvasWidth = parseInt(w, "--canvas");
  c.geometry.canvasHeight = parseInt(h, "--canvas");
  if (c.geometry.canvasWidth < 2 || c.geometry.canvasHeight < 2 ||
      c.geometry.canvasWidth % 2 || c.geometry.canvasHeight % 2)
    throw UsageError("--canvas dimensions must be even and >= 2");

  c.devices.slm = parseBits(f.slmBits, "--bits");
  c.devices.fpa = parseBits(f.fpaBits, "--fpa-bits");
  c.devices.outFpa = parseBits(f.outFpaBits, "--out-fpa-bits");
  c.autoFullScale = f.fpaFullScale == "auto";
  if (!c.autoFullScale)
  {
    c.devices.fpaFullScale = parseDouble(f.fpaFullScale, "--fpa-full-scale");
    if (!(c.devices.fpaFullScale > 0.0))
      throw UsageError("--fpa-full-scale must be positive");
  }
  c.devices.outFullScale = f.outFullScale;
  if (!(c.devices.outFullScale > 0.0))
    throw UsageError("--out-full-scale must be positive");

  if (f.ul.has_value() != f.ll.has_value())
    throw UsageError("--ul and --ll must be given together");
  if (f.ul)
  {
    c.limits = RescaleParams{*f.ll, *f.ul};
    if (!(*f.ul > *f.ll))
      throw UsageError("--ul must exceed --ll");
  }
  c.calibrationPath = f.calibration;
  c.corpusDir = f.corpus;
  if (!c.calibrationPath.empty() && !fs::exists(c.calibrationPath))
    throw UsageError("calibration file " + f.calibration + " does not exist");
  if (!c.corpusDir.empty() && !fs::is_directory(c.corpusDir))
    throw UsageError("corpus " + f.corpus + " is not a directory");

  c.misalignment.refShift = parseOffset(f.misalignRef, "--misalign");
  c.misalignment.queryShift = parseOffset(f.misalignQuery, "--misalign-query");
  if (f.jtcScale != "auto")
  {
    c.jtcScale = parseDouble(f.jtcScale, "--jtc-scale");
    if (!(*c.jtcScale > 0.0))
      throw UsageError("--jtc-scale must be positive");
  }
  c.waves.ref = parseComplex(f.planeWaveRef, "--plane-wave-ref");
  c.waves.query = parseComplex(f.planeWaveQuery, "--plane-wave-query");
  if (c.waves.ref == Complex{} || c.waves.query == Complex{})
    throw UsageError("plane-wave amplitudes must be nonzero");
  if (f.schedule == "simultaneous")
    c.schedule = CaptureSchedule::Simultaneous;
  else if (f.schedule == "multiplexed")
    c.schedule = CaptureSchedule::Multiplexed;
  else
    throw UsageError("--schedule must be simultaneous or multiplexed");
  c.peaks.dcRadius = f.dcRadius;
  c.peaks.maxPeaks = f.maxPeaks;
  if (f.maxPeaks < 1)
    throw UsageError("--max-peaks must be >= 1");
  c.outDir = f.outDir;
  return c;
}

Json configEcho(const RunConfig& c)
{
  return {{"mode", toString(c.mode)},
          {"ref", c.refPath.filename().string()},
          {"query", c.queryPath.filename().string()},
          {"geometry", toJson(c.geometry)},
          {"devices", toJson(c.devices)},
          {"fpa_full_scale_auto", c.autoFullScale},
          {"schedule", toString(c.schedule)},
          {"misalignment", toJson(c.misalignment)},
          {"plane_wave_ref", Json::array({c.waves.ref.real(), c.waves.ref.imag()})},
          {"plane_wave_query",
           Json::array({c.waves.query.real(), c.waves.query.imag()})},
          {"dc_radius", c.peaks.dcRadius},
          {"max_peaks", c.peaks.maxPeaks},
          {"nms_radius", c.peaks.search.suppressionRadius}};
}

// Peak of the ideal (unquantized) reference autocorrelation intensity that
// reaches the detector, used as the automatic FPA full scale.
double autoFullScale(const Frame& ref, const RunConfig& c)
{
  if (c.mode == Architecture::Hoc)
  {
    const HocCaptureSet cap =
      captureHoc(ref, ref, c.geometry, c.waves, std::nullopt, 1.0);
    return std::max(
      *std::max_element(cap.refInterference.values().begin(),
                        cap.refInterference.values().end()),
      *std::max_element(cap.queryInterference.values().begin(),
                        cap.queryInterference.values().end()));
  }
  return calibrateJtcScale(ref, c.geometry, Devices::ideal());
}

struct CorpusEntry
{
  std::string name;
  ImagePair pair;
};

// Every NAME.ref.pgm in dir, paired with NAME.query.pgm when present and with
// itself otherwise (an autocorrelation run). Sorted by name.
std::vector<CorpusEntry> loadCorpus(const fs::path& dir)
{
  std::vector<fs::path> refs;
  for (const auto& entry : fs::directory_iterator(dir))
  {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.ends_with(".ref.pgm"))
      refs.push_back(entry.path());
  }
  std::sort(refs.begin(), refs.end());
  if (refs.empty())
    throw UsageError("corpus " + dir.string() +
                     " contains no NAME.ref.pgm images");

  std::vector<CorpusEntry> corpus;
  for (const fs::path& refPath : refs)
  {
    const std::string file = refPath.filename().string();
    const std::string stem = file.substr(0, file.size() - 8);
    const fs::path queryPath = dir / (stem + ".query.pgm");
    Frame ref = loadImage(refPath, "corpus reference");
    Frame query =
      fs::exists(queryPath) ? loadImage(queryPath, "corpus query") : ref;
    corpus.push_back({stem, {std::move(ref), std::move(query)}});
  }
  return corpus;
}

CalibrationReport calibrateCorpus(const std::vector<CorpusEntry>& corpus,
                                  const RunConfig& c)
{
  std::vector<ImagePair> pairs;
  for (const auto& e : corpus)
    pairs.push_back(e.pair);
  return c.mode == Architecture::Hoc
           ? calibrateHoc(pairs, c.geometry, c.waves, c.devices)
           : calibrate(pairs, c.geometry, c.devices);
}

// Everything a correlation needs beyond the two images.
struct Prepared
{
  RunConfig config;
  Frame ref;
  Frame query;
  RescaleParams params;
  std::string paramsSource;
  double jtcScale = 0.0;
};

Prepared prepare(const PipelineFlags& flags)
{
  Prepared p;
  p.config = resolve(flags);
  RunConfig& c = p.config;
  p.ref = loadImage(c.refPath, "reference");
  p.query = loadImage(c.queryPath, "query");
  requireEmbeddable(c, p.ref, p.query);

  std::optional<Json> report;
  if (!c.calibrationPath.empty())
  {
    std::ifstream in(c.calibrationPath);
    try
    {
      report = Json::parse(in);
    }
    catch (const Json::exception& e)
    {
      throw UsageError(c.calibrationPath.string() + ": " + e.what());
    }
  }

  if (c.autoFullScale)
  {
    if (report && report->contains("devices") &&
        (*report)["devices"].contains("fpa_full_scale"))
      c.devices.fpaFullScale = (*report)["devices"]["fpa_full_scale"].get<double>();
    else
      c.devices.fpaFullScale = autoFullScale(p.ref, c);
  }

  if (c.limits)
  {
    p.params = *c.limits;
    p.paramsSource = "flags";
  }
  else if (report)
  {
    p.params = rescaleFromJson(*report);
    p.paramsSource = "calibration_file";
  }
  else if (!c.corpusDir.empty())
  {
    p.params = calibrateCorpus(loadCorpus(c.corpusDir), c).params();
    p.paramsSource = "corpus";
  }
  else
  {
    std::vector<CorpusEntry> self{{"ref", {p.ref, p.ref}}};
    p.params = calibrateCorpus(self, c).params();
    p.paramsSource = "reference_autocorrelation";
  }

  p.jtcScale = c.jtcScale ? *c.jtcScale
                          : calibrateJtcScale(p.ref, c.geometry, c.devices);
  return p;
}

Json writePlane(const fs::path& dir, const std::string& name, const Frame& f,
                const BitDepth& codes)
{
  const std::string file = name + ".pgm";
  if (codes)
  {
    io::writePgm(dir / file, io::fromCodes(f, codes->bits));
    return {{"file", file}, {"encoding", "codes"}, {"bits", codes->bits}};
  }
  const io::ScaledPgm scaled = io::fromRealFrame(f);
  io::writePgm(dir / file, scaled.image);
  return {{"file", file},
          {"encoding", "linear16"},
          {"offset", scaled.offset},
          {"scale", scaled.scale}};
}

void writeJson(const fs::path& path, const Json& doc)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

CaptureSet captureFor(const Prepared& p)
{
  const RunConfig& c = p.config;
  return c.schedule == CaptureSchedule::Multiplexed
           ? captureMultiplexed(p.ref, p.query, c.geometry, c.devices.fpa,
                                c.devices.fpaFullScale)
           : captureSimultaneous(p.ref, p.query, c.geometry, c.devices.fpa,
                                 c.devices.fpaFullScale);
}

int cmdCorrelate(const PipelineFlags& flags, std::ostream& out)
{
  const Prepared p = prepare(flags);
  const RunConfig& c = p.config;
  fs::create_directories(c.outDir);

  Json doc;
  doc["schema"] = kResultSchema;
  doc["command"] = "correlate";
  doc["config"] = configEcho(c);
  doc["rescale"] = toJson(p.params);
  doc["rescale"]["source"] = p.paramsSource;

  CorrelationResult result;
  Json planes;
  if (c.mode == Architecture::Hoc)
  {
    const double baseline =
      hocBaseline(p.ref, c.geometry, c.waves, c.devices, p.params, c.peaks);
    result = runHoc(p.ref, p.query, c.geometry, c.waves, c.devices, p.params,
                    c.peaks, baseline);
    doc["normalization"] = {{"baseline", baseline},
                            {"reference", "hoc_autocorrelation"}};
    doc["capture"] = toJson(result.hocCapture->meta);
    planes["balanced"] = writePlane(c.outDir, "balanced", result.balanced, {});
  }
  else
  {
    const double baseline =
      bojtcBaseline(p.ref, c.geometry, c.devices, p.params, c.peaks);
    const CaptureSet cap = captureFor(p);
    result = c.mode == Architecture::Jtc
               ? replayJtc(misalign(cap, c.misalignment), c.devices,
                           p.jtcScale, baseline, c.peaks)
               : replayBojtc(cap, c.devices, p.params, baseline,
                             c.misalignment, c.peaks);
    doc["normalization"] = {{"baseline", baseline},
                            {"reference", "bojtc_autocorrelation"}};
    doc["jtc_scale"] = p.jtcScale;
    doc["capture"] = toJson(cap.meta);
    planes["jps"] = writePlane(c.outDir, "jps", cap.jps, c.devices.fpa);
    if (c.mode == Architecture::Bojtc)
      planes["balanced"] =
        writePlane(c.outDir, "balanced", result.balanced, {});
  }
  planes["slm"] = writePlane(c.outDir, "slm", result.slmSignal, c.devices.slm);
  planes["output"] = writePlane(c.outDir, "output", result.output, {});

  doc["clipped_pixels"] = result.clippedPixels;
  if (c.devices.slm)
    doc["slm_histogram"] = toJson(histogram(result.slmSignal, c.devices.slm->bits));
  doc["peaks"] = toJson(result.peaks);
  doc["planes"] = planes;
  writeJson(c.outDir / "result.json", doc);

  out << toString(c.mode) << " top peak "
      << result.peaks.topNormalized() << " (normalized)";
  if (const Peak* top = result.peaks.top())
    out << " at displacement " << top->displacement.x << ","
        << top->displacement.y;
  out << "\n";
  return kSuccess;
}

struct ComparePoint
{
  BitDepth slm;
  double baseline = 0.0;
  CorrelationResult jtc;
  CorrelationResult bojtc;
};

ComparePoint comparePoint(const Prepared& p, const CaptureSet& cap,
                          const Devices& devices)
{
  const RunConfig& c = p.config;
  ComparePoint pt;
  pt.slm = devices.slm;
  pt.baseline = bojtcBaseline(p.ref, c.geometry, devices, p.params, c.peaks);
  pt.jtc = replayJtc(misalign(cap, c.misalignment), devices, p.jtcScale,
                     pt.baseline, c.peaks);
  pt.bojtc =
    replayBojtc(cap, devices, p.params, pt.baseline, c.misalignment, c.peaks);
  return pt;
}

double ratioOf(const ComparePoint& pt)
{
  const double j = pt.jtc.peaks.topNormalized();
  const double b = pt.bojtc.peaks.topNormalized();
  return j > 0.0 ? b / j : std::numeric_limits<double>::infinity();
}

Json comparePointJson(const ComparePoint& pt)
{
  const double ratio = ratioOf(pt);
  return {{"slm_bits", toJson(pt.slm)},
          {"baseline", pt.baseline},
          {"jtc_peak", pt.jtc.peaks.topNormalized()},
          {"bojtc_peak", pt.bojtc.peaks.topNormalized()},
          {"ratio", std::isfinite(ratio) ? Json(ratio) : Json("inf")},
          {"jtc_clipped_pixels", pt.jtc.clippedPixels},
          {"bojtc_clipped_pixels", pt.bojtc.clippedPixels}};
}

int cmdCompare(const PipelineFlags& flags, const std::string& sweep,
               bool idealOutput, std::ostream& out)
{
  if (parseArchitecture(flags.mode) == Architecture::Hoc)
    throw UsageError("compare replays one JTC capture; --mode hoc is not "
                     "applicable");
  const Prepared p = prepare(flags);
  const RunConfig& c = p.config;
  fs::create_directories(c.outDir);
  const CaptureSet cap = captureFor(p);

  const ComparePoint main = comparePoint(p, cap, c.devices);
  Json doc;
  doc["schema"] = kCompareSchema;
  doc["command"] = "compare";
  doc["config"] = configEcho(c);
  doc["rescale"] = toJson(p.params);
  doc["rescale"]["source"] = p.paramsSource;
  doc["jtc_scale"] = p.jtcScale;
  doc["capture"] = toJson(cap.meta);
  doc["result"] = comparePointJson(main);
  doc["jtc_peaks"] = toJson(main.jtc.peaks);
  doc["bojtc_peaks"] = toJson(main.bojtc.peaks);
  if (c.devices.slm)
  {
    const int bits = c.devices.slm->bits;
    doc["histograms"] = {
      {"jtc_slm", toJson(histogram(main.jtc.slmSignal, bits))},
      {"bojtc_slm", toJson(histogram(main.bojtc.slmSignal, bits))},
      {"conjugate_under_jtc_scale",
       toJson(conjugateHistogram(main.bojtc.balanced, p.jtcScale,
                                 *c.devices.slm))}};
  }

  if (idealOutput)
  {
    Devices ideal = c.devices;
    ideal.slm.reset();
    ideal.outFpa.reset();
    doc["ideal_output"] = comparePointJson(comparePoint(p, cap, ideal));
  }

  if (!sweep.empty())
  {
    const auto [lo, hi] = splitPair(sweep, ":", "--sweep-bits");
    const int first = parseInt(lo, "--sweep-bits");
    const int last = parseInt(hi, "--sweep-bits");
    if (first < 1 || last > 16 || first > last)
      throw UsageError("--sweep-bits needs 1 <= FIRST <= LAST <= 16");
    std::vector<std::future<ComparePoint>> jobs;
    for (int bits = first; bits <= last; ++bits)
    {
      Devices d = c.devices;
      d.slm = QuantSpec::withBits(bits);
      jobs.push_back(std::async(std::launch::async,
                                [&p, &cap, d] { return comparePoint(p, cap, d); }));
    }
    Json table = Json::array();
    for (auto& job : jobs)
      table.push_back(comparePointJson(job.get()));
    doc["sweep"] = std::move(table);
  }

  writePlane(c.outDir, "jtc_output", main.jtc.output, {});
  writePlane(c.outDir, "bojtc_output", main.bojtc.output, {});
  writeJson(c.outDir / "compare.json", doc);
  out << "jtc " << main.jtc.peaks.topNormalized() << " bojtc "
      << main.bojtc.peaks.topNormalized() << " ratio " << ratioOf(main) << "\n";
  return kSuccess;
}

int cmdCalibrate(const PipelineFlags& flags, const std::string& outFile,
                 std::ostream& out)
{
  RunConfig c = resolve(flags);
  if (c.corpusDir.empty())
    throw UsageError("calibrate needs --corpus");
  const std::vector<CorpusEntry> corpus = loadCorpus(c.corpusDir);
  for (const auto& e : corpus)
    requireEmbeddable(c, e.pair.ref, e.pair.query);
  if (c.autoFullScale)
  {
    double top = 0.0;
    for (const auto& e : corpus)
      top = std::max(top, autoFullScale(e.pair.ref, c));
    c.devices.fpaFullScale = top;
  }

  const CalibrationReport report = calibrateCorpus(corpus, c);
  Json doc = toJson(report);
  doc["mode"] = toString(c.mode);
  doc["geometry"] = toJson(c.geometry);
  doc["devices"] = toJson(c.devices);
  Json names = Json::array();
  for (const auto& e : corpus)
    names.push_back(e.name);
  doc["runs"] = std::move(names);

  const fs::path path = outFile.empty() ? c.outDir / "calibration.json"
                                        : fs::path(outFile);
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  writeJson(path, doc);
  out << "UL " << report.ul << " LL " << report.ll << " over "
      << report.runCount << " runs\n";
  return kSuccess;
}

int cmdHistogram(const std::string& planePath, std::optional<int> bits,
                 const std::string& outFile, std::ostream& out)
{
  if (planePath.empty())
    throw UsageError("histogram needs --plane");
  if (!fs::exists(planePath))
    throw UsageError("plane " + planePath + " does not exist");
  io::Pgm img;
  try
  {
    img = io::readPgm(fs::path(planePath));
  }
  catch (const std::exception& e)
  {
    throw UsageError(e.what());
  }

  int b = 0;
  if (bits)
    b = *bits;
  else
  {
    while (b < 16 && (1 << b) - 1 < img.maxval)
      ++b;
    if ((1 << b) - 1 != img.maxval)
      throw UsageError("maxval " + std::to_string(img.maxval) +
                       " is not 2^bits - 1; pass --bits");
  }
  if (b < 1 || b > 16)
    throw UsageError("--bits must lie in [1, 16]");

  Frame codes(img.width, img.height);
  for (std::size_t i = 0; i < codes.size(); ++i)
    codes[i] = img.samples[i];
  const HistogramReport report = histogram(codes, b);

  std::ofstream file;
  std::ostream* sink = &out;
  if (!outFile.empty())
  {
    file.open(outFile);
    if (!file)
      throw std::runtime_error("cannot write " + outFile);
    sink = &file;
  }
  *sink << "code,count\n";
  for (std::size_t code = 0; code < report.counts.size(); ++code)
    *sink << code << ',' << report.counts[code] << '\n';
  *sink << "# bits=" << report.bits << '\n'
        << "# max_used_code=" << report.maxUsedCode << '\n'
        << "# occupancy_fraction=" << report.occupancyFraction << '\n'
        << "# pixel_count=" << report.pixelCount << '\n';
  if (sink != &out)
    out << "occupancy_fraction " << report.occupancyFraction << "\n";
  return kSuccess;
}

struct ChartFlags
{
  std::string kind = "usaf";
  int size = 64;
  int width = 64;
  int height = 64;
  std::string text = "1945";
  int scale = 2;
  int barWidth = 2;
  bool vertical = false;
  std::uint64_t seed = 1;
  std::string cropRect;
  int bits = 8;
  std::string out;
};

int cmdGenchart(const ChartFlags& f, std::ostream& out)
{
  if (f.out.empty())
    throw UsageError("genchart needs --out");
  if (f.bits != 8 && f.bits != 16)
    throw UsageError("--bits must be 8 or 16");

  Frame chart;
  try
  {
    if (f.kind == "usaf")
      chart = charts::usafChart(f.size);
    else if (f.kind == "digits")
      chart = charts::digitString(f.text, f.scale);
    else if (f.kind == "bars")
      chart = charts::barTriplet(f.barWidth, f.vertical);
    else if (f.kind == "square")
      chart = charts::square(f.size);
    else if (f.kind == "random")
      chart = charts::random(f.width, f.height, f.seed);
    else if (f.kind == "reference")
      chart = charts::featureReference();
    else
      throw UsageError("--kind must be usaf, digits, bars, square, random or "
                       "reference");
    if (!f.cropRect.empty())
    {
      std::vector<int> r;
      std::string rest = f.cropRect;
      for (int i = 0; i < 3; ++i)
      {
        const auto [a, b] = splitPair(rest, ",", "--crop");
        r.push_back(parseInt(a, "--crop"));
        rest = b;
      }
      r.push_back(parseInt(rest, "--crop"));
      chart = charts::crop(chart, r[0], r[1], r[2], r[3]);
    }
  }
  catch (const UsageError&)
  {
    throw;
  }
  catch (const std::exception& e)
  {
    throw UsageError(e.what());
  }

  fs::path path(f.out);
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  io::writePgm(path, io::fromUnitFrame(chart, f.bits == 8 ? 255 : 65535));
  out << "wrote " << chart.width() << "x" << chart.height() << " "
      << f.kind << " chart to " << f.out << "\n";
  return kSuccess;
}

int cmdThroughput(const std::string& mode, double slmFps, double fpaFps,
                  const std::string& outFile, std::ostream& out)
{
  CaptureMode m;
  try
  {
    m = parseCaptureMode(mode);
  }
  catch (const std::invalid_argument& e)
  {
    throw UsageError(e.what());
  }
  if (!(slmFps > 0.0) || !(fpaFps > 0.0))
    throw UsageError("frame rates must be positive");
  const Json doc = toJson(throughput(m, slmFps, fpaFps));
  if (!outFile.empty())
    writeJson(outFile, doc);
  out << doc.dump(2) << "\n";
  return kSuccess;
}

} // namespace

int runCli(const std::vector<std::string>& rawArgs, std::ostream& out,
           std::ostream& err)
{
  CLI::App app{"Balanced opto-electronic joint transform correlator simulator"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  PipelineFlags correlateFlags;
  auto* correlate = app.add_subcommand(
    "correlate", "run one JTC, BOJTC or HOC correlation");
  addPipelineOptions(*correlate, correlateFlags, true);
  addCorrelationOptions(*correlate, correlateFlags);
  correlate->add_option("--mode", correlateFlags.mode, "jtc, bojtc or hoc")
    ->capture_default_str();

  PipelineFlags compareFlags;
  std::string sweep;
  bool idealOutput = false;
  auto* compare = app.add_subcommand(
    "compare", "replay one capture through the JTC and the BOJTC");
  addPipelineOptions(*compare, compareFlags, true);
  addCorrelationOptions(*compare, compareFlags);
  compare->add_option("--sweep-bits", sweep, "SLM bit-depth range FIRST:LAST");
  compare->add_flag("--ideal-output", idealOutput,
                    "also replay with an ideal output SLM and FPA");

  PipelineFlags calibrateFlags;
  std::string calibrationOut;
  auto* calibrateCmd = app.add_subcommand(
    "calibrate", "derive UL/LL from a corpus of NAME.ref.pgm/NAME.query.pgm");
  addPipelineOptions(*calibrateCmd, calibrateFlags, false);
  calibrateCmd->add_option("--corpus", calibrateFlags.corpus,
                           "corpus directory");
  calibrateCmd->add_option("--mode", calibrateFlags.mode, "bojtc or hoc")
    ->capture_default_str();
  calibrateCmd->add_option("--out", calibrationOut,
                           "report path (default calibration.json)");

  std::string planePath;
  std::optional<int> histBits;
  std::string histOut;
  auto* hist =
    app.add_subcommand("histogram", "bin counts of an integer-code PGM plane");
  hist->add_option("--plane", planePath, "code plane (P5 PGM)");
  hist->add_option("--bits", histBits, "code bit-depth (default from maxval)");
  hist->add_option("--out", histOut, "CSV path (default stdout)");
  hist->add_option("--config", "key=value file; flags override its entries");

  ChartFlags chartFlags;
  auto* chart = app.add_subcommand("genchart", "write a synthetic test chart");
  chart->add_option("--kind", chartFlags.kind,
                    "usaf, digits, bars, square, random or reference")
    ->capture_default_str();
  chart->add_option("--size", chartFlags.size, "usaf/square size")
    ->capture_default_str();
  chart->add_option("--width", chartFlags.width, "random width")
    ->capture_default_str();
  chart->add_option("--height", chartFlags.height, "random height")
    ->capture_default_str();
  chart->add_option("--text", chartFlags.text, "digits to render")
    ->capture_default_str();
  chart->add_option("--scale", chartFlags.scale, "digit glyph scale")
    ->capture_default_str();
  chart->add_option("--bar-width", chartFlags.barWidth, "bar width")
    ->capture_default_str();
  chart->add_flag("--vertical", chartFlags.vertical, "vertical bars");
  chart->add_option("--seed", chartFlags.seed, "random seed")
    ->capture_default_str();
  chart->add_option("--crop", chartFlags.cropRect, "x,y,width,height");
  chart->add_option("--bits", chartFlags.bits, "8 or 16")->capture_default_str();
  chart->add_option("--out", chartFlags.out, "output PGM");
  chart->add_option("--config", "key=value file; flags override its entries");

  std::string tpMode = "three_fpa";
  double slmFps = 720.0;
  double fpaFps = 720.0;
  std::string tpOut;
  auto* tp = app.add_subcommand("throughput", "correlation rate of a layout");
  tp->add_option("--mode", tpMode,
                 "three_fpa, multiplexed_1fpa or sequential_slm")
    ->capture_default_str();
  tp->add_option("--slm-fps", slmFps, "SLM frame rate")->capture_default_str();
  tp->add_option("--fpa-fps", fpaFps, "FPA frame rate")->capture_default_str();
  tp->add_option("--out", tpOut, "also write the JSON here");
  tp->add_option("--config", "key=value file; flags override its entries");

  try
  {
    std::vector<std::string> args = expandConfig(rawArgs);
    std::vector<const char*> argv;
    for (const auto& a : args)
      argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }
  catch (const UsageError& e)
  {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try
  {
    if (*correlate)
      return cmdCorrelate(correlateFlags, out);
    if (*compare)
      return cmdCompare(compareFlags, sweep, idealOutput, out);
    if (*calibrateCmd)
      return cmdCalibrate(calibrateFlags, calibrationOut, out);
    if (*hist)
      return cmdHistogram(planePath, histBits, histOut, out);
    if (*chart)
      return cmdGenchart(chartFlags, out);
    if (*tp)
      return cmdThroughput(tpMode, slmFps, fpaFps, tpOut, out);
  }
  catch (const UsageError& e)
  {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  catch (const std::exception& e)
  {
    err << "pipeline error: " << e.what() << "\n";
    return kPipelineError;
  }
  return kUsageError;
}

} // namespace bojtc::cli
