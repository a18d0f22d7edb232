#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "escapelab/audit.hpp"
#include "escapelab/classify.hpp"
#include "escapelab/construction.hpp"
#include "escapelab/geometry.hpp"
#include "escapelab/itinerary.hpp"
#include "escapelab/nested.hpp"

namespace escapelab {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Provenance block embedded in every output file. Wall time is kept out of the JSON so
/// identical runs produce identical bytes.
struct RunManifest {
  std::string command_line;
  std::uint64_t seed = 0;
  std::complex<double> lambda{1.0, 0.0};
  long precision_bits = 53;
  std::string version = kToolVersion;
  double wall_time_seconds = 0.0;
};

Json as_json(const RunManifest& m);
/// "# key: value" lines for CSV headers.
std::string as_comment_lines(const RunManifest& m);

Json as_json(std::complex<double> z);
Json as_json(const ItineraryReport& r);
Json as_json(const BranchChain& c);
Json as_json(const EscapeCertificate& c);
Json as_json(const DensityHypotheses& h);
Json as_json(const DensityVerification& v);
Json as_json(const DensitySweep& s);
Json as_json(const DistortionAudit& a);
Json as_json(const McMullenResult& r);
Json as_json(const UpperBoundAudit& a);
Json as_json(const MinModulusReport& r);
Json as_json(const InvarianceReport& r);
Json as_json(const NestingCheck& c);

/// {config, per_depth: [{n, delta, diam, bound_value}], verdicts} for a finite-depth
/// dimension bound; at most max_rows depths are listed, evenly spaced.
Json construction_audit(const ConstructionConfig& config, const McMullenResult& result, std::size_t max_rows = 200);

/// Flattens a JSON object into "key: value" lines; nested keys are joined with '.'.
std::string as_text(const Json& j);

}  // namespace escapelab
