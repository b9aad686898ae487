#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "curvedwave/suite.hpp"

namespace curvedwave {

/// {"summary": {...}, "reports": [...]} with one object per check.
std::string reports_to_json(const std::vector<ResidualReport>& reports, int indent = 2);

/// name,pass,relative_residual,max_abs_residual,tolerance,fitted_re,fitted_im,params
void write_reports_csv(std::ostream& out, const std::vector<ResidualReport>& reports);

/// Single report as a JSON object.
std::string report_to_json(const ResidualReport& report, int indent = 2);

/// Chart atlas: axes, ranges, periodicity and singular loci.
std::string atlas_to_json(int indent = 2);

/// S3 quantized levels for one family.
std::string levels_to_json(const std::vector<QuantizedLevel>& levels, int indent = 2);

/// Classified solutions: family, orientation, branch, alpha, epsilon, quantum
/// numbers, verdict and reason.
std::string catalog_to_json(const std::vector<CatalogEntry>& entries, int indent = 2);

/// Shortest round-trip decimal form.
std::string format_number(double x);

}  // namespace curvedwave
