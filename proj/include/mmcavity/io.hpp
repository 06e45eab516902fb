#pragma once

#include <iosfwd>
#include <string>

#include "mmcavity/config.hpp"
#include "mmcavity/couplings.hpp"
#include "mmcavity/normal_modes.hpp"
#include "mmcavity/spectrum.hpp"
#include "mmcavity/validation.hpp"

namespace mmcavity {

/// Rounds v to `digits` significant decimal digits (value-level, so emitted
/// numbers are reproducible at the declared precision).
double round_sig(double v, int digits);

/// Fixed-precision float formatting used by the CSV writer.
std::string format_double(double v, int digits);

/// CSV emission: a self-describing '#' header block (geometry, units, sweep,
/// tool version) followed by
///   <coordinate columns>,multiplet_n,branch_i,omega,continuity_flag
/// rows in fixed order (secondary, branch, primary).
void write_spectrum_csv(const SpectrumSurface& surface, const RunConfig& cfg,
                        std::ostream& os);

/// JSON documents with explicit unit annotations.
std::string couplings_json(const std::vector<CouplingCoefficients>& numeric,
                           const RunConfig& cfg);
std::string modes_json(const NormalModeBasis& basis_, const std::vector<double>& residuals,
                       const RunConfig& cfg);
std::string validation_json(const SuiteReport& report, const RunConfig& cfg);

}  // namespace mmcavity
