#include "tanfield/io.hpp"

#include <cstdio>
#include <fstream>

#include "tanfield/errors.hpp"

namespace tanfield::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const Metadata& meta,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw DomainError("write_csv: cannot open " + path);
  for (const auto& [key, value] : meta) {
    out << "# " << key << " = " << value << "\n";
  }
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << (c ? "," : "") << columns[c];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_double(row[c]);
    }
    out << "\n";
  }
}

void write_json(const std::string& path, const Json& body,
                const Metadata& meta) {
  Json doc;
  for (const auto& [key, value] : meta) doc["meta"][key] = value;
  doc["body"] = body;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("write_json: cannot open " + path);
  out << doc.dump(2) << "\n";
}

Json params_to_json(const model::ModelParams& params) {
  return Json{{"alpha", params.alpha},
              {"gamma", params.gamma},
              {"beta", params.beta},
              {"hurst", params.hurst},
              {"t0", params.t0}};
}

namespace {

double require_number(const Json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw DomainError("config: missing or non-numeric key '" + key + "'");
  }
  return j.at(key).get<double>();
}

std::vector<double> number_array(const Json& j, const std::string& key,
                                 std::size_t n) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != n) {
    throw DomainError("config: '" + key + "' must be an array of length L");
  }
  std::vector<double> out;
  out.reserve(n);
  for (const auto& v : arr) {
    if (!v.is_number()) {
      throw DomainError("config: '" + key + "' must contain numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

model::ModelParams params_from_json(const Json& j) {
  model::ModelParams params;
  params.alpha = require_number(j, "alpha");
  params.gamma = require_number(j, "gamma");
  params.beta = require_number(j, "beta");
  params.hurst = require_number(j, "hurst");
  params.t0 = j.contains("t0") ? require_number(j, "t0") : 0.0;
  model::validate_params(params);
  return params;
}

model::PowerSpectra spectra_from_json(const Json& noise, const Json& initial,
                                      int L) {
  if (L < 1) throw DomainError("config: L must be >= 1");
  model::PowerSpectra spectra = model::PowerSpectra::zero(L);
  if (noise.is_object() && noise.contains("family")) {
    if (noise.at("family") != "power") {
      throw DomainError("config: unknown noise spectra family");
    }
    spectra = model::PowerSpectra::power_law_noise(
        L, require_number(noise, "c"), require_number(noise, "nu"));
  } else if (noise.is_object()) {
    spectra.A1 = number_array(noise, "A1", static_cast<std::size_t>(L));
    spectra.A2 = number_array(noise, "A2", static_cast<std::size_t>(L));
  } else if (!noise.is_null()) {
    throw DomainError("config: 'noise' must be an object");
  }
  if (initial.is_object() && initial.contains("family")) {
    if (initial.at("family") != "power") {
      throw DomainError("config: unknown initial spectra family");
    }
    spectra.with_power_law_initial(require_number(initial, "c"),
                                   require_number(initial, "nu"));
  } else if (initial.is_object()) {
    spectra.sig_hat2 =
        number_array(initial, "sig_hat2", static_cast<std::size_t>(L));
    spectra.sig_tilde2 =
        number_array(initial, "sig_tilde2", static_cast<std::size_t>(L));
  } else if (!initial.is_null()) {
    throw DomainError("config: 'initial' must be an object");
  }
  spectra.validate();
  return spectra;
}

Json spectra_to_json(const model::PowerSpectra& spectra) {
  Json j;
  j["L"] = spectra.L;
  if (spectra.noise_family) {
    j["noise"] = {{"family", "power"},
                  {"c", spectra.noise_family->c},
                  {"nu", spectra.noise_family->nu}};
  } else {
    j["noise"] = {{"A1", spectra.A1}, {"A2", spectra.A2}};
  }
  if (spectra.initial_family) {
    j["initial"] = {{"family", "power"},
                    {"c", spectra.initial_family->c},
                    {"nu", spectra.initial_family->nu}};
  } else {
    j["initial"] = {{"sig_hat2", spectra.sig_hat2},
                    {"sig_tilde2", spectra.sig_tilde2}};
  }
  return j;
}

Json coefficients_to_json(const sphere::SpectralCoefficients& coeffs) {
  Json modes = Json::array();
  for (int ell = 1; ell <= coeffs.L; ++ell) {
    for (int m = -ell; m <= ell; ++m) {
      const auto d = coeffs.div(ell, m);
      const auto c = coeffs.curl(ell, m);
      modes.push_back(Json{{"l", ell},
                           {"m", m},
                           {"div_free", {{"re", d.real()}, {"im", d.imag()}}},
                           {"curl_free", {{"re", c.real()}, {"im", c.imag()}}}});
    }
  }
  return Json{{"L", coeffs.L}, {"modes", modes}};
}

sphere::SpectralCoefficients coefficients_from_json(const Json& j) {
  const int L = j.at("L").get<int>();
  sphere::SpectralCoefficients coeffs(L);
  for (const auto& mode : j.at("modes")) {
    const int ell = mode.at("l").get<int>();
    const int m = mode.at("m").get<int>();
    coeffs.div(ell, m) = {mode.at("div_free").at("re").get<double>(),
                          mode.at("div_free").at("im").get<double>()};
    coeffs.curl(ell, m) = {mode.at("curl_free").at("re").get<double>(),
                           mode.at("curl_free").at("im").get<double>()};
  }
  return coeffs;
}

Json matrix_to_json(const sphere::CMat3& m) {
  Json re = Json::array(), im = Json::array();
  for (int i = 0; i < 3; ++i) {
    Json re_row = Json::array(), im_row = Json::array();
    for (int j = 0; j < 3; ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  return Json{{"re", re}, {"im", im}};
}

void write_field_csv(const std::string& path,
                     const std::vector<sphere::SpherePoint>& points,
                     const std::vector<sphere::CVec3>& values,
                     const Metadata& meta) {
  std::vector<std::vector<double>> rows;
  rows.reserve(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& v = values[k];
    rows.push_back({points[k].theta, points[k].phi, v.x().real(), v.x().imag(),
                    v.y().real(), v.y().imag(), v.z().real(), v.z().imag()});
  }
  write_csv(path, meta,
            {"theta", "phi", "re_x", "im_x", "re_y", "im_y", "re_z", "im_z"},
            rows);
}

void write_grid_csv(const std::string& path, const sphere::SphereGrid& grid,
                    const Metadata& meta) {
  std::vector<std::vector<double>> rows;
  rows.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    rows.push_back({grid.nodes[k].theta, grid.nodes[k].phi, grid.weights[k]});
  }
  write_csv(path, meta, {"theta", "phi", "weight"}, rows);
}

void write_path_csv(const std::string& path,
                    const stochastic::ComplexFbmPath& fbm_path,
                    const Metadata& meta) {
  std::vector<std::vector<double>> rows;
  rows.reserve(fbm_path.times.size());
  for (std::size_t k = 0; k < fbm_path.times.size(); ++k) {
    rows.push_back({fbm_path.times[k], fbm_path.values[k].real(),
                    fbm_path.values[k].imag()});
  }
  write_csv(path, meta, {"t", "re", "im"}, rows);
}

RunConfig config_from_json(const Json& j) {
  RunConfig config;
  config.raw = j;
  config.params = params_from_json(j);
  const int L = j.contains("L") ? j.at("L").get<int>() : 12;
  config.spectra = spectra_from_json(j.contains("noise") ? j.at("noise") : Json(),
                                     j.contains("initial") ? j.at("initial") : Json(),
                                     L);
  if (j.contains("t")) config.t = require_number(j, "t");
  if (config.t < 0.0) throw DomainError("config: t must be >= 0");
  if (j.contains("times")) {
    for (const auto& v : j.at("times")) {
      if (!v.is_number()) throw DomainError("config: times must be numeric");
      config.times.push_back(v.get<double>());
    }
  }
  if (j.contains("grid_L")) config.grid_L = j.at("grid_L").get<int>();
  if (config.grid_L < 1) throw DomainError("config: grid_L must be >= 1");
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("replicates")) {
    config.replicates = j.at("replicates").get<std::size_t>();
  }
  if (j.contains("mesh_points")) {
    config.mesh_points = j.at("mesh_points").get<std::size_t>();
    if (config.mesh_points < 2) {
      throw DomainError("config: mesh_points must be >= 2");
    }
  }
  if (j.contains("format")) {
    config.format = j.at("format").get<std::string>();
    if (config.format != "csv" && config.format != "json") {
      throw DomainError("config: format must be 'csv' or 'json'");
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DomainError(std::string("config: JSON parse error: ") + e.what());
  }
  return config_from_json(j);
}

Metadata config_metadata(const RunConfig& config) {
  Metadata meta;
  meta.emplace_back("config", config.raw.dump());
  meta.emplace_back("seed", std::to_string(config.seed));
  return meta;
}

}  // namespace tanfield::io
