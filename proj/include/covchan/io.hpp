// Copyright 2026 The covchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON and CSV formats.
//
//   matrix:        {"rows": n, "cols": m, "data": [[re, im], ...]}  row-major
//   channel:       {"dim_in": n, "dim_out": m, "kraus": [matrix, ...]}
//   spectrum:      {"energies": [...], "match_tol": x}
//   decomposition: {"spectrum": spectrum, "sectors": [{"sigma": s, "mask": matrix}, ...]}
//
// Partial shifts are rebuilt from sigma and the spectrum on load.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "covchan/capacity.hpp"
#include "covchan/covariant.hpp"
#include "covchan/fock.hpp"
#include "covchan/matcore.hpp"
#include "covchan/timing.hpp"
#include "json.hpp"

namespace covchan::io {

using Json = nlohmann::json;

namespace detail {

inline Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline double as_double(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline Index as_count(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw ParseError(std::string(what) + " must be a non-negative integer");
  return static_cast<Index>(j.get<long long>());
}

inline Json complex_pair(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

inline Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("complex entry must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline Json to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(detail::complex_pair(m(r, c)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMatrix matrix_from_json(const Json& j) {
  const Index rows = detail::as_count(detail::field(j, "rows"), "rows");
  const Index cols = detail::as_count(detail::field(j, "cols"), "cols");
  const Json& data = detail::field(j, "data");
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols)
    throw ParseError("matrix data must hold rows*cols = " +
                     std::to_string(rows * cols) + " entries");
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      m(r, c) = detail::parse_complex(data[static_cast<std::size_t>(r * cols + c)]);
  if (!all_finite(m)) throw ParseError("matrix has non-finite entries");
  return m;
}

inline Json to_json(const Channel& ch) {
  Json kraus = Json::array();
  for (const CMatrix& a : ch.kraus()) kraus.push_back(to_json(a));
  return {{"dim_in", ch.dim_in()}, {"dim_out", ch.dim_out()}, {"kraus", std::move(kraus)}};
}

inline Channel channel_from_json(const Json& j) {
  const Index dim_in = detail::as_count(detail::field(j, "dim_in"), "dim_in");
  const Index dim_out = detail::as_count(detail::field(j, "dim_out"), "dim_out");
  const Json& kraus = detail::field(j, "kraus");
  if (!kraus.is_array() || kraus.empty())
    throw ParseError("kraus must be a non-empty array");
  std::vector<CMatrix> ops;
  for (const Json& k : kraus) ops.push_back(matrix_from_json(k));
  return Channel(dim_in, dim_out, std::move(ops));
}

inline Json to_json(const Spectrum& s) {
  return {{"energies", s.energies()}, {"match_tol", s.match_tol()}};
}

inline Spectrum spectrum_from_json(const Json& j) {
  const Json& e = detail::field(j, "energies");
  if (!e.is_array()) throw ParseError("energies must be an array");
  std::vector<double> energies;
  for (const Json& w : e) energies.push_back(detail::as_double(w, "energy"));
  std::optional<double> tol;
  if (j.contains("match_tol") && !j.at("match_tol").is_null())
    tol = detail::as_double(j.at("match_tol"), "match_tol");
  return Spectrum(std::move(energies), tol);
}

inline Json to_json(const SectorDecomposition& d) {
  Json sectors = Json::array();
  for (const Sector& s : d.sectors())
    sectors.push_back({{"sigma", s.sigma()}, {"mask", to_json(s.mask)}});
  Json out = {{"spectrum", to_json(d.spectrum())}, {"sectors", std::move(sectors)}};
  out["projection_distance"] = detail::number(d.projection_distance());
  return out;
}

inline SectorDecomposition decomposition_from_json(const Json& j) {
  Spectrum spectrum = spectrum_from_json(detail::field(j, "spectrum"));
  const Json& sectors = detail::field(j, "sectors");
  if (!sectors.is_array()) throw ParseError("sectors must be an array");
  std::vector<std::pair<double, CMatrix>> masks;
  for (const Json& s : sectors)
    masks.emplace_back(detail::as_double(detail::field(s, "sigma"), "sigma"),
                       matrix_from_json(detail::field(s, "mask")));
  double distance = 0.0;
  if (j.contains("projection_distance") && j.at("projection_distance").is_number())
    distance = j.at("projection_distance").get<double>();
  return SectorDecomposition(std::move(spectrum), std::move(masks),
                             tolerance::kPsd, distance);
}

inline Json to_json(const CapacityReport& r) {
  Json out = {{"coherent_information_bits", detail::number(r.coherent_information)},
              {"hadamard_bound_bits", r.hadamard_bound ? detail::number(*r.hadamard_bound) : Json(nullptr)},
              {"dim", r.input_dim}};
  if (r.hqc_difference) out["hqc_difference"] = detail::number(*r.hqc_difference);
  return out;
}

inline Json to_json(const TimingChannelReport& r) {
  Json v = Json::array();
  for (Complex z : r.v) v.push_back(detail::complex_pair(z));
  Json q = Json::array();
  for (double x : r.q) q.push_back(detail::number(x));
  return {{"N", r.N},
          {"s", detail::number(r.s)},
          {"v", std::move(v)},
          {"q", std::move(q)},
          {"bound", detail::number(r.bound)},
          {"orthogonality_defect", detail::number(r.orthogonality_defect)}};
}

inline TimingChannelReport timing_report_from_json(const Json& j) {
  TimingChannelReport r;
  r.N = detail::as_count(detail::field(j, "N"), "N");
  r.s = detail::as_double(detail::field(j, "s"), "s");
  for (const Json& z : detail::field(j, "v")) r.v.push_back(detail::parse_complex(z));
  for (const Json& x : detail::field(j, "q")) r.q.push_back(detail::as_double(x, "q"));
  r.bound = detail::as_double(detail::field(j, "bound"), "bound");
  r.orthogonality_defect =
      detail::as_double(detail::field(j, "orthogonality_defect"), "orthogonality_defect");
  return r;
}

inline Json to_json(const FockParams& p) {
  return {{"dim", p.dim},           {"std_dev", detail::number(p.std_dev)},
          {"sigma_max", p.sigma_max}, {"quad_points", p.quad_points},
          {"mc_samples", p.mc_samples}, {"seed", p.seed}};
}

inline Json to_json(const GaussianDecomposition& g) {
  Json out = to_json(g.sectors);
  out["params"] = to_json(g.params);
  Json defect = Json::array();
  for (double d : g.truncation_defect) defect.push_back(detail::number(d));
  out["truncation_defect"] = std::move(defect);
  return out;
}

inline Json to_json(const McComparison& c) {
  Json se = Json::array();
  for (Index r = 0; r < c.monte_carlo.standard_error.rows(); ++r)
    for (Index col = 0; col < c.monte_carlo.standard_error.cols(); ++col)
      se.push_back(detail::number(c.monte_carlo.standard_error(r, col)));
  return {{"max_entry_deviation", detail::number(c.max_entry_deviation)},
          {"max_allowed", detail::number(c.max_allowed)},
          {"worst_ratio", detail::number(c.worst_ratio)},
          {"truncation_floor", detail::number(c.truncation_floor)},
          {"within_tolerance", c.within_tolerance},
          {"samples", c.monte_carlo.samples},
          {"decomposition_output", to_json(c.decomposition_output)},
          {"monte_carlo_mean", to_json(c.monte_carlo.mean)},
          {"standard_error", std::move(se)}};
}

/// Parses JSON text; syntax errors report the byte offset.
inline Json parse(const std::string& text, const std::string& source = "<input>") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source + ": syntax error at byte " + std::to_string(e.byte) +
                     ": " + e.what());
  }
}

inline Json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// %.17g, round-trip safe for doubles.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// CSV of all mask entries on each sector's domain:
/// sigma,row,col,re,im
inline std::string masks_csv(const SectorDecomposition& d) {
  std::string out = "sigma,row,col,re,im\n";
  for (const Sector& s : d.sectors())
    for (Index r : s.shift.domain)
      for (Index c : s.shift.domain)
        out += format_double(s.sigma()) + "," + std::to_string(r) + "," +
               std::to_string(c) + "," + format_double(s.mask(r, c).real()) + "," +
               format_double(s.mask(r, c).imag()) + "\n";
  return out;
}

/// CSV of the comparison: row,col,decomp_re,decomp_im,mc_re,mc_im,standard_error
inline std::string comparison_csv(const McComparison& c) {
  std::string out = "row,col,decomp_re,decomp_im,mc_re,mc_im,standard_error\n";
  for (Index r = 0; r < c.decomposition_output.rows(); ++r)
    for (Index col = 0; col < c.decomposition_output.cols(); ++col)
      out += std::to_string(r) + "," + std::to_string(col) + "," +
             format_double(c.decomposition_output(r, col).real()) + "," +
             format_double(c.decomposition_output(r, col).imag()) + "," +
             format_double(c.monte_carlo.mean(r, col).real()) + "," +
             format_double(c.monte_carlo.mean(r, col).imag()) + "," +
             format_double(c.monte_carlo.standard_error(r, col)) + "\n";
  return out;
}

}  // namespace covchan::io
