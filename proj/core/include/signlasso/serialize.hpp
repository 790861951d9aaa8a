#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "signlasso/concentration.hpp"
#include "signlasso/conditions.hpp"
#include "signlasso/harness.hpp"
#include "signlasso/lasso.hpp"

namespace signlasso {

/// Library version string embedded in reports.
std::string version();

// nlohmann::json writes doubles in shortest round-trip form, so every value
// below is serialized at full precision. Non-finite values become null.

nlohmann::json to_json(const CoefVector& beta);
nlohmann::json to_json(const KktReport& report);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const PropositionDiagnostics& diag);
nlohmann::json to_json(const XiTailReport& report);

/// report.json of an experiment: config echo, version and one entry per n.
nlohmann::json experiment_report(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace signlasso
