#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "ballsde/analysis.hpp"
#include "ballsde/model.hpp"
#include "ballsde/schemes.hpp"

namespace ballsde {

/// Keys: d, m (optional, must equal the number of A matrices), kappa, nu,
/// A0 (optional, default zero), A (optional list of matrices), x0, T.
/// Matrices are row-major nested arrays. nu may be given as the string
/// "sqrt(2)" to select kSqrt2 exactly. Throws Error{Config}.
ModelParams model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const ModelParams& params);
ModelParams load_model(const std::filesystem::path& file);

nlohmann::json regime_to_json(const RegimeReport& r);

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_backward_csv(std::ostream& out, const BackwardPath& path);
void write_projected_csv(std::ostream& out, const VectorPath& path);

nlohmann::json report_to_json(const ErrorReport& r);
void write_report_csv(std::ostream& out, const ErrorReport& r);

/// Opens `file` for writing or throws Error{Io}.
std::ofstream open_output(const std::filesystem::path& file);

}  // namespace ballsde
