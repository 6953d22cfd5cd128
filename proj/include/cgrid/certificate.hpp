#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cgrid/hsets.hpp"
#include "cgrid/poincare.hpp"
#include "cgrid/shark.hpp"

namespace cgrid {

inline constexpr const char* kCertificateSchema = "cgrid.certificate/1";
inline constexpr const char* kToolVersion = "0.3.0";

/// Permutation of cube positions along the outer exit axis.
Pattern grid_pattern(const ContractingGridSpec& g);

/// Segment h-sets for the intervals of a loop, in loop order.
/// @throws std::invalid_argument when an interval is outside 1..n.
std::vector<SegmentHSet> segments_from_loop(const ContractingGridSpec& g, const CoveringLoop& loop);

std::uint64_t fnv1a64(std::string_view bytes);
/// Hash of the canonical grid JSON, as 16 hex digits.
std::string dataset_hash(const ContractingGridSpec& g, const std::string& a);

// JSON pieces shared by certificates and failure reports.
nlohmann::json interval_json(const Interval& x);
nlohmann::json box_json(const Box& b);
Box box_from_json(const nlohmann::json& j);
nlohmann::json report_json(const InclusionReport& r);
nlohmann::json witness_json(const PeriodWitness& w);
PeriodWitness witness_from_json(const nlohmann::json& j);
nlohmann::json step_policy_json(const StepPolicy& p);

struct GridRun {
  std::string a;
  ContractingGridSpec grid;
  StepPolicy step;
  SubdivisionPolicy subdivision;
  GridReport report;
  int max_period = 20;
};

/// Certificate for a verified grid with the forced periods of its pattern.
/// @throws std::logic_error when the report did not verify.
nlohmann::json grid_certificate(const GridRun& run, const ForcedPeriods& periods);

struct OrbitRun {
  std::string a;
  int period = 0;
  StepPolicy step;
  OrbitEnclosure enclosure;
  std::optional<std::vector<Box>> printed;  ///< enclosures to compare against
};

/// @throws std::logic_error unless the enclosure is unique.
nlohmann::json orbit_certificate(const OrbitRun& run);

nlohmann::json forced_certificate(const Pattern& p, const ForcedPeriods& periods, int max_period);

/// Report written instead of a certificate when a check did not pass.
nlohmann::json failure_report(const std::string& kind, const std::string& reason, const nlohmann::json& detail = {});

/// Adds the non-reproducible "run" block (timestamp, wall time).
void stamp(nlohmann::json& cert, double wall_seconds);
/// The certificate without its "run" block; equal inputs give equal text.
std::string canonical_text(const nlohmann::json& cert);

/// Problems found when re-reading a certificate; empty means it checks out.
/// Every loop witness is re-validated against the recorded pattern.
std::vector<std::string> check_certificate(const nlohmann::json& cert);

}  // namespace cgrid
