#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wallflux/budgets.hpp"

namespace wallflux {

inline constexpr const char* kToolVersion = "wallflux 1.0.0";

/// Fixed shortest round-trip formatting for all tabular output; identical
/// configs produce byte-identical tables.
std::string fmt_double(double v);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    std::string to_string() const;
    void write(const std::string& path) const;
};

CsvTable pairings_table(const std::vector<PairingValue>& pairings);
CsvTable identities_table(const std::vector<IdentityResidual>& identities);

/// Everything a command run produces. CSV tables carry only deterministic
/// content; wall-clock timing lives in the JSON report alone.
struct ReportDocument {
    nlohmann::json config_echo;
    std::string command;
    std::vector<PairingValue> pairings;
    std::vector<IdentityResidual> identities;
    /// Scale sweeps: primary = flux pairing, secondary = absolute gap,
    /// tertiary = relative gap. Viscosity sweeps: primary = shear pairing,
    /// secondary = pressure pairing, tertiary = |shear pairing|.
    CsvTable sweep_points{{"sweep_id", "abscissa", "primary", "secondary", "tertiary",
                           "quad_error", "status"},
                          {}};
    CsvTable rate_fits{{"fit_id", "exponent", "exponent_stderr", "fit_residual", "points_used",
                        "limit_estimate", "target", "limit_gap_rel", "verdict"},
                       {}};
    CsvTable curves{{"curve_id", "abscissa", "lower", "upper"}, {}};
    bool all_pass = true;
    double elapsed_seconds = 0.0;

    nlohmann::json to_json() const;
    /// Writes pairings.csv, identities.csv, sweeps.csv, ratefits.csv,
    /// curves.csv and report.json under out_dir.
    void write(const std::string& out_dir) const;
    int exit_code() const { return all_pass ? 0 : 1; }
};

}  // namespace wallflux
