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

// covchan command-line front end.
//
// Exit codes: 0 success, 1 property violation, 2 usage or parse error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <regex>
#include <string>

#include "CLI11.hpp"
#include "covchan/covchan.hpp"
#include "covchan/io.hpp"

namespace {

using namespace covchan;
using io::Json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct Options {
  std::string format = "json";
  std::string out;
  std::string channel;
  std::string spectrum;
  std::string mask;
  std::string input;
  std::string phi0;
  std::string s = "pi";
  Index steps = 2;
  double tol = tolerance::kTp;
  double decompose_tol = 1e-12;
  double timing_tol = 1e-12;
  FockParams fock;
  std::optional<std::uint64_t> seed;
};

// Accepts a plain number or a multiple of pi: "0.5", "pi", "2pi", "2*pi/3", "pi/4".
double parse_scalar(const std::string& text) {
  static const std::regex pi_form(R"(^\s*([+-]?[0-9]*\.?[0-9]*(?:[eE][+-]?[0-9]+)?)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    std::string coef = m[1].str();
    double c = 1.0;
    if (coef == "-") c = -1.0;
    else if (!coef.empty() && coef != "+") c = std::stod(coef);
    double d = m[2].matched ? std::stod(m[2].str()) : 1.0;
    return c * std::numbers::pi / d;
  }
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse number \"" + text + "\"");
  }
  if (used != text.size()) throw InvalidArgument("cannot parse number \"" + text + "\"");
  return x;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  if (const char* env = std::getenv("COVCHAN_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw InvalidArgument(std::string("COVCHAN_SEED is not an integer: ") + env);
    return v;
  }
  return 0;
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(opt.out, std::ios::binary);
  if (!f) throw ParseError("cannot write " + opt.out);
  f << text;
}

std::string kv_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = "quantity,value\n";
  for (const auto& [k, v] : rows) out += k + "," + io::format_double(v) + "\n";
  return out;
}

DensityMatrix load_state(const std::string& path) {
  return DensityMatrix(io::matrix_from_json(io::read_file(path)));
}

int cmd_check(const Options& opt) {
  const Channel ch = io::channel_from_json(io::read_file(opt.channel));
  const Spectrum sp = io::spectrum_from_json(io::read_file(opt.spectrum));
  const CptpReport cptp = is_cptp(ch);
  const double cov = covariance_defect(ch, sp);
  const bool ok = cptp.within(opt.tol) && cov <= opt.tol;
  if (opt.format == "csv") {
    emit(opt, kv_csv({{"tp_defect", cptp.tp_defect},
                      {"cp_defect", cptp.cp_defect},
                      {"covariance_defect", cov},
                      {"tolerance", opt.tol}}));
  } else {
    emit(opt, io::dump({{"tp_defect", cptp.tp_defect},
                        {"cp_defect", cptp.cp_defect},
                        {"covariance_defect", cov},
                        {"tolerance", opt.tol},
                        {"ok", ok}}));
  }
  return ok ? kOk : kViolation;
}

int cmd_decompose(const Options& opt) {
  const Channel ch = io::channel_from_json(io::read_file(opt.channel));
  const Spectrum sp = io::spectrum_from_json(io::read_file(opt.spectrum));
  const SectorDecomposition d = decompose(ch, sp, opt.decompose_tol);
  const RVector sums = d.diagonal_sums();
  for (Index j = 0; j < sums.size(); ++j)
    std::fprintf(stderr, "diagonal_sum[omega=%s] = %s\n",
                 io::format_double(sp[j]).c_str(), io::format_double(sums(j)).c_str());
  std::fprintf(stderr, "reconstruction_distance = %s\n",
               io::format_double(choi_distance(ch, reconstruct(d))).c_str());
  emit(opt, opt.format == "csv" ? io::masks_csv(d) : io::dump(io::to_json(d)));
  return kOk;
}

int cmd_capacity(const Options& opt) {
  if (opt.channel.empty() == opt.mask.empty())
    throw InvalidArgument("capacity needs exactly one of --channel or --mask");
  std::optional<DensityMatrix> rho;
  if (!opt.input.empty() && opt.input != "maximally-mixed") rho = load_state(opt.input);
  CapacityReport r;
  if (!opt.mask.empty()) {
    r = capacity_report(io::matrix_from_json(io::read_file(opt.mask)), rho);
  } else {
    const Channel ch = io::channel_from_json(io::read_file(opt.channel));
    r = capacity_report(ch, rho ? *rho : DensityMatrix::maximally_mixed(ch.dim_in()));
  }
  if (opt.format == "csv") {
    std::vector<std::pair<std::string, double>> rows{
        {"coherent_information_bits", r.coherent_information}};
    if (r.hadamard_bound) rows.emplace_back("hadamard_bound_bits", *r.hadamard_bound);
    rows.emplace_back("dim", static_cast<double>(r.input_dim));
    if (r.hqc_difference) rows.emplace_back("hqc_difference", *r.hqc_difference);
    emit(opt, kv_csv(rows));
  } else {
    emit(opt, io::dump(io::to_json(r)));
  }
  return kOk;
}

int cmd_timing(const Options& opt) {
  const Channel ch = io::channel_from_json(io::read_file(opt.channel));
  const Spectrum sp = io::spectrum_from_json(io::read_file(opt.spectrum));
  const CMatrix phi = io::matrix_from_json(io::read_file(opt.phi0));
  if (phi.cols() != 1) throw DimensionMismatch("phi0 must be a column vector");
  const TimingChannelReport r =
      timing_channel(ch, sp, phi.col(0), parse_scalar(opt.s), opt.steps, opt.timing_tol);
  if (opt.format == "csv") {
    std::string out = "j,v_re,v_im,q\n";
    for (std::size_t j = 0; j < r.v.size(); ++j)
      out += std::to_string(j) + "," + io::format_double(r.v[j].real()) + "," +
             io::format_double(r.v[j].imag()) + "," + io::format_double(r.q[j]) + "\n";
    emit(opt, out);
  } else {
    emit(opt, io::dump(io::to_json(r)));
  }
  return kOk;
}

int cmd_gaussian(const Options& opt) {
  const GaussianDecomposition g = gaussian_decomposition(opt.fock);
  emit(opt, opt.format == "csv" ? io::masks_csv(g.sectors) : io::dump(io::to_json(g)));
  return kOk;
}

int cmd_mc_gaussian(const Options& opt) {
  FockParams p = opt.fock;
  p.seed = resolve_seed(opt.seed);
  const Index n = p.dim;
  CMatrix rho = CMatrix::Zero(n, n);
  if (opt.input.empty() || opt.input == "vacuum") {
    rho(0, 0) = 1.0;
  } else if (opt.input == "plus") {
    rho.topLeftCorner(2, 2).setConstant(0.5);
  } else {
    rho = load_state(opt.input).matrix();
  }
  const McComparison c = compare_decomposition_to_mc(p, DensityMatrix(rho));
  Json j = io::to_json(c);
  j["params"] = io::to_json(p);
  emit(opt, opt.format == "csv" ? io::comparison_csv(c) : io::dump(j));
  return c.within_tolerance ? kOk : kViolation;
}

void add_fock_options(CLI::App* app, Options& opt) {
  app->add_option("--std-dev", opt.fock.std_dev, "Gaussian standard deviation s")
      ->capture_default_str();
  app->add_option("--dim", opt.fock.dim, "Fock truncation")->capture_default_str();
  app->add_option("--sigma-max", opt.fock.sigma_max, "Largest |sigma| kept")
      ->capture_default_str();
  app->add_option("--quad-points", opt.fock.quad_points,
                  "Gauss-Laguerre nodes (default max(2*dim, 64))");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-covariant quantum channel toolkit"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", opt.out, "Write the report to this file");

  auto* check = app.add_subcommand("check", "CPTP and covariance defects");
  check->add_option("--channel", opt.channel)->required()->check(CLI::ExistingFile);
  check->add_option("--spectrum", opt.spectrum)->required()->check(CLI::ExistingFile);
  check->add_option("--tol", opt.tol)->capture_default_str();

  auto* dec = app.add_subcommand("decompose", "Sector decomposition");
  dec->add_option("--channel", opt.channel)->required()->check(CLI::ExistingFile);
  dec->add_option("--spectrum", opt.spectrum)->required()->check(CLI::ExistingFile);
  dec->add_option("--tol", opt.decompose_tol)->capture_default_str();

  auto* cap = app.add_subcommand("capacity", "Coherent information and Hadamard bound");
  cap->add_option("--channel", opt.channel)->check(CLI::ExistingFile);
  cap->add_option("--mask", opt.mask)->check(CLI::ExistingFile);
  cap->add_option("--input", opt.input, "maximally-mixed or a state file");

  auto* tim = app.add_subcommand("timing", "Circulant timing channel");
  tim->add_option("--channel", opt.channel)->required()->check(CLI::ExistingFile);
  tim->add_option("--spectrum", opt.spectrum)->required()->check(CLI::ExistingFile);
  tim->add_option("--phi0", opt.phi0)->required()->check(CLI::ExistingFile);
  tim->add_option("--s", opt.s, "Time step; accepts multiples of pi")->capture_default_str();
  tim->add_option("--N", opt.steps)->capture_default_str();
  tim->add_option("--tol", opt.timing_tol)->capture_default_str();

  auto* gau = app.add_subcommand("gaussian", "Gaussian channel masks");
  add_fock_options(gau, opt);

  auto* mc = app.add_subcommand("mc-gaussian", "Masks against Monte Carlo");
  add_fock_options(mc, opt);
  mc->add_option("--samples", opt.fock.mc_samples)->capture_default_str();
  mc->add_option("--seed", opt.seed, "Seed (falls back to COVCHAN_SEED)");
  mc->add_option("--input", opt.input, "vacuum, plus, or a state file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  const bool quad_given = (gau->parsed() && gau->count("--quad-points") > 0) ||
                          (mc->parsed() && mc->count("--quad-points") > 0);
  if (!quad_given) opt.fock.quad_points = FockParams::default_quad_points(opt.fock.dim);

  try {
    if (check->parsed()) return cmd_check(opt);
    if (dec->parsed()) return cmd_decompose(opt);
    if (cap->parsed()) return cmd_capacity(opt);
    if (tim->parsed()) return cmd_timing(opt);
    if (gau->parsed()) return cmd_gaussian(opt);
    if (mc->parsed()) return cmd_mc_gaussian(opt);
  } catch (const NotCovariant& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kViolation;
  } catch (const NotReliableTiming& e) {
    std::fprintf(stderr, "%s\northogonality_defect = %s\n", e.what(),
                 io::format_double(e.defect()).c_str());
    return kViolation;
  } catch (const NotPeriodic& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kViolation;
  } catch (const NotCP& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kViolation;
  } catch (const MaskNotPSD& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kViolation;
  } catch (const DiagonalNotUnit& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kViolation;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kUsage;
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "ParseError: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
