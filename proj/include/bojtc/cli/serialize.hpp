#pragma once

#include "bojtc/analysis.hpp"
#include "bojtc/calibration.hpp"
#include "bojtc/correlator.hpp"

#include <json.hpp>

namespace bojtc::cli {

inline constexpr const char* kResultSchema = "bojtc.result/1";
inline constexpr const char* kCalibrationSchema = "bojtc.calibration/1";
inline constexpr const char* kCompareSchema = "bojtc.compare/1";
inline constexpr const char* kThroughputSchema = "bojtc.throughput/1";

using Json = nlohmann::ordered_json;

/// "ideal" or the bit count.
Json toJson(const BitDepth& depth);
Json toJson(const Offset& o);
Json toJson(const Geometry& g);
Json toJson(const Devices& d);
Json toJson(const RescaleParams& p);
Json toJson(const Misalignment& m);
Json toJson(const PeakList& peaks);
/// Summary only; the bin counts go to CSV.
Json toJson(const HistogramReport& h);
Json toJson(const ThroughputEstimate& t);
Json toJson(const CalibrationReport& r);
Json toJson(const CaptureMeta& m);

/// Reads UL and LL back from a calibration report document.
RescaleParams rescaleFromJson(const Json& doc);

} // namespace bojtc::cli
