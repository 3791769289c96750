#pragma once

#include <string>

#include "wallflux/config.hpp"
#include "wallflux/report.hpp"

namespace wallflux {

/// Runs the configured identity suite; all_pass reflects every verdict.
ReportDocument cmd_verify(const RunConfig& cfg);

/// Runs the configured sweep (scale, viscosity or filter convergence) with rate fits.
ReportDocument cmd_sweep(const RunConfig& cfg);

/// Evaluates a single configured pairing.
ReportDocument cmd_pair(const RunConfig& cfg, const std::string& pairing_id);

}  // namespace wallflux
