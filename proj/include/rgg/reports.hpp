#pragma once

#include <json.hpp>

#include "rgg/analysis.hpp"
#include "rgg/invariance.hpp"
#include "rgg/reversibility.hpp"

namespace rgg {

using Json = nlohmann::json;

Json to_json(const MacrodimensionEstimate& est);
Json to_json(const ClusterTailFit& fit);
Json to_json(const PureGrowthReport& rep);
Json to_json(const GrowthTailReport& rep);
Json to_json(const DistortionReport& rep);
Json to_json(const CorrelationTable& table);
Json to_json(const FactorizationReport& rep);
Json to_json(const ReversibilityReport& rep);
Json to_json(const InvarianceReport& rep);
Json trajectory_summary(const Trajectory& traj);

// flat CSV tables, one row per observation, headers included
std::string dimension_csv(const MacrodimensionEstimate& est);
std::string cluster_csv(const ClusterTailFit& fit);
std::string correlation_csv(const CorrelationTable& table);
std::string event_log(const Trajectory& traj, const Grammar& grammar);

}  // namespace rgg
