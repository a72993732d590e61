#pragma once

#include "filmhomog/moments.hpp"
#include "filmhomog/potential.hpp"
#include "filmhomog/study.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace filmhomog {

// Every file starts with "# scenario <hash>" followed by a header row.
// Numbers use %.17g so identical runs give identical bytes.

std::string format_number(double v);

void write_field_csv(std::ostream& os, const std::string& hash, const std::vector<FieldSample>& samples);
void write_moments_csv(std::ostream& os, const std::string& hash, const Scales& scales,
                       const std::vector<CellMoments>& rows);
void write_convergence_csv(std::ostream& os, const std::string& hash, const ConvergenceReport& rep);
void write_gauge_csv(std::ostream& os, const std::string& hash, const GaugeReport& rep);

/// Structured run summary: scenario echo, fitted order, pass/fail flags.
std::string convergence_summary_json(const std::string& hash, const std::string& canonical,
                                     const ConvergenceReport& rep, const Thresholds& th);
std::string gauge_summary_json(const std::string& hash, const std::string& canonical, const GaugeReport& rep,
                               const Thresholds& th);

}  // namespace filmhomog
