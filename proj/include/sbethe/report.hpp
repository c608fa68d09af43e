#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sbethe/degeneracy.hpp"

namespace sbethe {

using json = nlohmann::json;

/// Decimal-string serialization keeping precision beyond binary64.
json complex_to_json(const Complex& z, int digits = 0);
Complex complex_from_json(const json& j, const PrecisionContext& ctx);

/// Coefficient arrays of [re, im] decimal strings, lowest degree first.
json poly_to_json(const Polynomial& p, int digits = 0);
Polynomial poly_from_json(const json& j, const PrecisionContext& ctx);

json configuration_to_json(const Configuration& cfg, int digits = 0);

std::string points_to_csv(const std::vector<Complex>& pts, int digits = 0);
std::string moments_to_csv(const std::vector<Complex>& mu, int digits = 0);

/// Plain scatter plot: axes plus one dot per point.
std::string points_to_svg(const std::vector<Complex>& pts);

json degeneracy_report_to_json(const DegeneracyReport& rep);

/// One-line CSV mirroring the verification panel layout:
/// n, |lambda_min(H_{n,0})|, |lambda_min(H_{n+1,k})|..., s ratios.
std::string degeneracy_report_to_csv(const DegeneracyReport& rep,
                                     const std::vector<Complex>& s_normalized);

/// Polyline lists for plotting and debug overlays.
json contours_to_json(const WeightedContourSet& wcs, int per_seg = 48);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sbethe
