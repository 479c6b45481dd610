#include "bojtc/cli/serialize.hpp"

#include "bojtc/cli/config.hpp"

namespace bojtc::cli {

Json toJson(const BitDepth& depth)
{
  if (!depth)
    return "ideal";
  return depth->bits;
}

Json toJson(const Offset& o)
{
  return Json::array({o.x, o.y});
}

Json toJson(const Geometry& g)
{
  return {{"offset", toJson(g.offset)},
          {"canvas", Json::array({g.canvasWidth, g.canvasHeight})}};
}

Json toJson(const Devices& d)
{
  return {{"slm_bits", toJson(d.slm)},
          {"slm_model", "linear_amplitude"},
          {"fpa_bits", toJson(d.fpa)},
          {"fpa_full_scale", d.fpaFullScale},
          {"out_fpa_bits", toJson(d.outFpa)},
          {"out_full_scale", d.outFullScale},
          {"rounding", "half_away_from_zero"}};
}

Json toJson(const RescaleParams& p)
{
  return {{"ul", p.upperLimit}, {"ll", p.lowerLimit}};
}

Json toJson(const Misalignment& m)
{
  return {{"ref_shift", toJson(m.refShift)},
          {"query_shift", toJson(m.queryShift)}};
}

Json toJson(const PeakList& peaks)
{
  Json list = Json::array();
  for (const Peak& p : peaks.peaks)
    list.push_back({{"x", p.x},
                    {"y", p.y},
                    {"displacement", toJson(p.displacement)},
                    {"value", p.value},
                    {"normalized", p.normalized}});
  return {{"dc_exclusion_radius", peaks.dcExclusionRadius},
          {"baseline", peaks.baseline},
          {"peaks", std::move(list)}};
}

Json toJson(const HistogramReport& h)
{
  return {{"bits", h.bits},
          {"max_used_code", h.maxUsedCode},
          {"occupancy_fraction", h.occupancyFraction},
          {"pixel_count", h.pixelCount}};
}

Json toJson(const ThroughputEstimate& t)
{
  return {{"schema", kThroughputSchema},
          {"mode", toString(t.mode)},
          {"slm_fps", t.slmFps},
          {"fpa_fps", t.fpaFps},
          {"correlations_per_second", t.correlationsPerSecond},
          {"limiting_component", toString(t.limitingComponent)}};
}

Json toJson(const CalibrationReport& r)
{
  return {{"schema", kCalibrationSchema},
          {"ul", r.ul},
          {"ll", r.ll},
          {"run_count", r.runCount},
          {"per_run_max", r.perRunMax},
          {"per_run_min", r.perRunMin}};
}

Json toJson(const CaptureMeta& m)
{
  return {{"schedule", toString(m.schedule)},
          {"fpa_bits", toJson(m.fpa)},
          {"full_scale", m.fullScale},
          {"saturated_jps", m.saturatedJps},
          {"saturated_ref", m.saturatedRef},
          {"saturated_query", m.saturatedQuery}};
}

RescaleParams rescaleFromJson(const Json& doc)
{
  if (!doc.is_object() || doc.value("schema", "") != kCalibrationSchema)
    throw UsageError(std::string("calibration file lacks schema \"") +
                     kCalibrationSchema + "\"");
  if (!doc.contains("ul") || !doc.contains("ll") || !doc["ul"].is_number() ||
      !doc["ll"].is_number())
    throw UsageError("calibration file lacks numeric ul/ll");
  RescaleParams p{doc["ll"].get<double>(), doc["ul"].get<double>()};
  try
  {
    p.validate();
  }
  catch (const std::invalid_argument& e)
  {
    throw UsageError(e.what());
  }
  return p;
}

} // namespace bojtc::cli
