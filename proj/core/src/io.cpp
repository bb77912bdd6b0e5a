#include "ballsde/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include "ballsde/error.hpp"

namespace ballsde {

namespace {

using nlohmann::json;

DenseMatrix matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::Config, name + " must be a non-empty nested array");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  std::vector<double> entries;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw Error(ErrorKind::Config, name + " has ragged rows");
    for (const auto& v : row) {
      if (!v.is_number()) throw Error(ErrorKind::Config, name + " entries must be numbers");
      entries.push_back(v.get<double>());
    }
  }
  return {rows, cols, std::move(entries)};
}

json matrix_to_json(const DenseMatrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(std::vector<double>(a.row(i).begin(), a.row(i).end()));
  return rows;
}

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::Config, std::string("missing key '") + key + "'");
  if (!j[key].is_number()) throw Error(ErrorKind::Config, std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

json optional_number(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

}  // namespace

ModelParams model_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "model must be a JSON object");
  ModelParams p;
  if (!j.contains("d") || !j["d"].is_number_integer() || j["d"].get<long long>() < 1) {
    throw Error(ErrorKind::Config, "'d' must be a positive integer");
  }
  p.d = j["d"].get<std::size_t>();
  p.kappa = number(j, "kappa");
  if (j.contains("nu") && j["nu"].is_string()) {
    const auto s = j["nu"].get<std::string>();
    if (s != "sqrt(2)" && s != "sqrt2") throw Error(ErrorKind::Config, "'nu' string must be \"sqrt(2)\"");
    p.nu = kSqrt2;
  } else {
    p.nu = number(j, "nu");
  }
  p.T = number(j, "T");
  if (!j.contains("x0") || !j["x0"].is_array()) throw Error(ErrorKind::Config, "'x0' must be an array");
  for (const auto& v : j["x0"]) {
    if (!v.is_number()) throw Error(ErrorKind::Config, "'x0' entries must be numbers");
    p.x0.push_back(v.get<double>());
  }
  p.A0 = j.contains("A0") ? matrix_from_json(j["A0"], "A0") : DenseMatrix::zeros(p.d, p.d);
  if (j.contains("A")) {
    if (!j["A"].is_array()) throw Error(ErrorKind::Config, "'A' must be an array of matrices");
    for (std::size_t i = 0; i < j["A"].size(); ++i) {
      p.A.push_back(matrix_from_json(j["A"][i], "A[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("m")) {
    if (!j["m"].is_number_integer() || j["m"].get<long long>() < 0 ||
        j["m"].get<std::size_t>() != p.A.size()) {
      throw Error(ErrorKind::Config, "'m' must equal the number of matrices in 'A'");
    }
  }
  return p;
}

json model_to_json(const ModelParams& p) {
  json j;
  j["d"] = p.d;
  j["m"] = p.m();
  j["kappa"] = p.kappa;
  j["nu"] = p.nu;
  j["A0"] = matrix_to_json(p.A0);
  j["A"] = json::array();
  for (const auto& a : p.A) j["A"].push_back(matrix_to_json(a));
  j["x0"] = p.x0;
  j["T"] = p.T;
  return j;
}

ModelParams load_model(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::Io, "cannot open model file " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, "model file " + file.string() + ": " + e.what());
  }
  return model_from_json(j);
}

json regime_to_json(const RegimeReport& r) {
  return {{"ratio", r.ratio},
          {"pathwise_unique", r.pathwise_unique},
          {"backward_solvable", r.backward_solvable},
          {"rate_theorem", r.rate_theorem},
          {"swart_monotone", r.swart_monotone}};
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

void write_backward_csv(std::ostream& out, const BackwardPath& path) {
  out << "t,y0";
  for (std::size_t i = 1; i <= path.d(); ++i) out << ",x" << i;
  out << '\n';
  for (std::size_t k = 0; k < path.size(); ++k) {
    out << format_double(path.grid().time(k));
    for (double v : path.row(k)) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_projected_csv(std::ostream& out, const VectorPath& path) {
  out << 't';
  for (std::size_t i = 1; i <= path.d(); ++i) out << ",x" << i;
  out << '\n';
  for (std::size_t k = 0; k < path.size(); ++k) {
    out << format_double(path.grid().time(k));
    for (double v : path.x(k)) out << ',' << format_double(v);
    out << '\n';
  }
}

json report_to_json(const ErrorReport& r) {
  json j;
  j["n"] = r.n_values;
  j["M"] = r.paths;
  j["ref_n"] = r.ref_n;
  j["err_max_of_mean"] = r.err_max_of_mean;
  j["err_mean_of_max"] = r.err_mean_of_max;
  j["slopes"] = {{"max_of_mean", optional_number(r.slope_max_of_mean)},
                 {"mean_of_max", optional_number(r.slope_mean_of_max)}};
  j["stderr"] = {{"err_max_of_mean", r.se_max_of_mean},
                 {"err_mean_of_max", r.se_mean_of_max},
                 {"slope_max_of_mean", optional_number(r.slope_stderr_max_of_mean)},
                 {"slope_mean_of_max", optional_number(r.slope_stderr_mean_of_max)}};
  j["regime_warning"] = r.regime_warning;
  return j;
}

void write_report_csv(std::ostream& out, const ErrorReport& r) {
  out << "n,err_max_of_mean,se_max_of_mean,err_mean_of_max,se_mean_of_max\n";
  for (std::size_t i = 0; i < r.n_values.size(); ++i) {
    out << r.n_values[i] << ',' << format_double(r.err_max_of_mean[i]) << ',' << format_double(r.se_max_of_mean[i])
        << ',' << format_double(r.err_mean_of_max[i]) << ',' << format_double(r.se_mean_of_max[i]) << '\n';
  }
}

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
  return out;
}

}  // namespace ballsde
