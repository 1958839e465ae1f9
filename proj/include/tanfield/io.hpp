#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tanfield/model.hpp"
#include "tanfield/sphere.hpp"
#include "tanfield/stochastic.hpp"

namespace tanfield::io {

using Json = nlohmann::json;

// fixed 17-significant-digit formatting so repeated runs are byte-identical
std::string format_double(double v);

// key/value lines echoed at the top of every artifact
using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_csv(const std::string& path, const Metadata& meta,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

void write_json(const std::string& path, const Json& body,
                const Metadata& meta);

// ---- domain types <-> JSON ------------------------------------------------

Json params_to_json(const model::ModelParams& params);
model::ModelParams params_from_json(const Json& j);

// spectra schema: {"family":"power","c":..,"nu":..} or explicit arrays
// {"A1":[...], "A2":[...]} / {"sig_hat2":[...], "sig_tilde2":[...]}
model::PowerSpectra spectra_from_json(const Json& noise, const Json& initial,
                                      int L);
Json spectra_to_json(const model::PowerSpectra& spectra);

Json coefficients_to_json(const sphere::SpectralCoefficients& coeffs);
sphere::SpectralCoefficients coefficients_from_json(const Json& j);

Json matrix_to_json(const sphere::CMat3& m);

// field/grid/path CSV layouts (theta, phi, re/im of the three components)
void write_field_csv(const std::string& path,
                     const std::vector<sphere::SpherePoint>& points,
                     const std::vector<sphere::CVec3>& values,
                     const Metadata& meta);
void write_grid_csv(const std::string& path, const sphere::SphereGrid& grid,
                    const Metadata& meta);
void write_path_csv(const std::string& path,
                    const stochastic::ComplexFbmPath& fbm_path,
                    const Metadata& meta);

// ---- run configuration -----------------------------------------------------

struct RunConfig {
  model::ModelParams params;
  model::PowerSpectra spectra;
  double t = 1.0;
  std::vector<double> times;  // optional evaluation grid (cauchy command)
  int grid_L = 12;
  std::uint64_t seed = 42;
  std::size_t replicates = 1000;
  std::size_t mesh_points = 512;
  std::string format = "csv";
  Json raw;  // parsed document, echoed into artifact metadata
};

// Throws DomainError on malformed or out-of-range configuration.
RunConfig config_from_json(const Json& j);
RunConfig load_config(const std::string& path);

Metadata config_metadata(const RunConfig& config);

}  // namespace tanfield::io
