// config.hpp — run configuration, key=value config parsing, and provenance-
// bearing tabular output.
//
// Config format: one `key = value` per line, `#` comments. Frequency-valued
// keys take either kappa units with a `k` suffix on the value (delta_c =
// 1.59k) or SI via the `_hz` key form (delta_c_hz = 1.59e6, requires
// kappa_hz); a file must use exactly one system. Unknown keys are hard
// errors. Couplings may be given bare (g, g0, lambda) or renormalized (G, G0,
// Lambda), not both.
#pragma once

#include <string>
#include <vector>

#include "upb/cooling.hpp"
#include "upb/harness.hpp"
#include "upb/model.hpp"

namespace upb::cli {

inline constexpr const char* kToolVersion = "upb 0.1.0";

struct RunConfig {
    model::SystemParams params;
    hilbert::HilbertSpec space;
    std::vector<harness::AxisSpec> axes;
    std::vector<std::string> outputs = {"g2_photon", "mean_photon"};
    harness::Tie tie = harness::Tie::none;

    // dynamics / delayed-correlation grids (units of 1/kappa)
    double tmax = 50.0;
    int points = 251;
    double tau_max = 30.0;
    int tau_points = 301;

    // cooling inputs
    cooling::CoolingSetup cool;
    double omega_m_si_hz = 1e8;    // ordinary frequency, Hz
    double temperature_mk = 10.0;  // millikelvin
    double q_m = 1e6;

    bool operator==(const RunConfig&) const = default;
};

/// Parse a config file; errors carry the offending line number.
RunConfig parse_config(const std::string& path);

/// Same grammar applied to header lines extracted from an output file;
/// round-trips the exact RunConfig that produced the file.
RunConfig parse_provenance(const std::string& path);

/// Provenance header lines (without the leading "# ") for a config: every
/// parameter in kappa units at full precision, truncation, tool version and
/// solver tolerances.
std::vector<std::string> provenance_lines(const RunConfig& cfg,
                                          const std::string& subcommand);

/// Write a comma-separated table atomically (temp file + rename): comment
/// header lines, then the column row, then data rows at 12 significant
/// digits.
void write_table(const std::string& path,
                 const std::vector<std::string>& header_lines,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows);

/// Format a double exactly as write_table does (12 significant digits).
std::string format_value(double v);

}  // namespace upb::cli
