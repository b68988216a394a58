#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "telenoise/bounds.hpp"
#include "telenoise/chain.hpp"
#include "telenoise/channel_spec.hpp"
#include "telenoise/densesim.hpp"
#include "telenoise/threshold.hpp"

namespace {

using telenoise::Json;

constexpr int kExitOk = 0;
constexpr int kExitComputational = 1;
constexpr int kExitUsage = 2;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json load_input(const std::string& input) {
  std::string text;
  if (!input.empty() && input.front() == '{') {
    text = input;  // inline JSON
  } else {
    std::ifstream file(input);
    if (!file) {
      throw telenoise::ParseError("cannot open input file \"" + input + "\"");
    }
    std::stringstream buffer;
    buffer << file.rdbuf();
    text = buffer.str();
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw telenoise::ParseError(std::string("input is not valid JSON: ") +
                                e.what());
  }
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw telenoise::Error("cannot open output file \"" + path + "\"");
  }
  file << content;
}

struct CommonOptions {
  std::string input;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_input) {
  auto* in = cmd->add_option("--input,-i", opts.input,
                             "input JSON file (or inline JSON object)");
  if (needs_input) in->required();
  cmd->add_option("--output,-o", opts.output,
                  "output path; stdout when omitted");
  cmd->add_option("--seed", opts.seed, "seed for sampling operations");
  cmd->add_option("--tol", opts.tolerance, "tolerance override");
}

// ---------------------------------------------------------------- chain ----

int run_chain(const CommonOptions& opts) {
  const Json config = load_input(opts.input);
  const telenoise::ChainSpec spec = telenoise::chain_spec_from_json(config);

  std::int64_t mc_samples = 0;
  if (config.contains("mc_samples")) {
    mc_samples = config.at("mc_samples").get<std::int64_t>();
  }
  std::optional<std::uint64_t> seed = opts.seed;
  if (!seed && config.contains("seed")) {
    seed = config.at("seed").get<std::uint64_t>();
  }
  if (mc_samples > 0 && !seed) {
    throw telenoise::ParseError(
        "monte carlo sampling requested (\"mc_samples\") without a seed");
  }

  const std::vector<telenoise::Ptm> series =
      telenoise::exact_average_series(spec);

  std::ostringstream csv;
  csv << "t,r_exact,r_free,r_rc,r_mc,mc_stderr\n";
  for (int t = 1; t <= spec.length(); ++t) {
    const double r_exact =
        telenoise::average_infidelity(series[static_cast<std::size_t>(t - 1)]);
    const double r_free = telenoise::average_infidelity(
        telenoise::free_accumulation_channel(spec, t));
    const double r_rc = telenoise::average_infidelity(
        telenoise::randomized_compiling_channel(spec, t));
    double r_mc = std::nan("");
    double mc_err = std::nan("");
    if (mc_samples > 0) {
      const telenoise::MonteCarloEstimate est =
          telenoise::monte_carlo_average_channel(spec, t, mc_samples, *seed);
      r_mc = telenoise::average_infidelity(est.mean);
      // propagated standard error of the infidelity estimate
      const auto& se = est.std_error;
      mc_err = std::sqrt(se(1, 1) * se(1, 1) + se(2, 2) * se(2, 2) +
                         se(3, 3) * se(3, 3)) /
               6.0;
    }
    csv << t << ',' << format_double(r_exact) << ',' << format_double(r_free)
        << ',' << format_double(r_rc) << ',' << format_double(r_mc) << ','
        << format_double(mc_err) << '\n';
  }
  write_output(opts.output, csv.str());
  return kExitOk;
}

// --------------------------------------------------------------- bounds ----

int run_bounds(const CommonOptions& opts) {
  const Json config = load_input(opts.input);
  const telenoise::ChainSpec spec = telenoise::chain_spec_from_json(config);
  const int t_max = spec.length();

  const std::vector<telenoise::Ptm> series =
      telenoise::exact_average_series(spec);
  const telenoise::InfidelityBand band2 =
      telenoise::infidelity_band(spec, t_max, 2);
  const telenoise::InfidelityBand band3 =
      telenoise::infidelity_band(spec, t_max, 3);

  // the simple estimator needs per-step rotation vectors; available only
  // for rotation-type error specs
  std::vector<double> simple(static_cast<std::size_t>(t_max), std::nan(""));
  {
    telenoise::RotationSchedule sched;
    bool have_angles = false;
    const auto angle_of = [](const Json& e) -> std::optional<telenoise::Vec3> {
      if (!e.is_object() || !e.contains("type")) return std::nullopt;
      const std::string type = e.at("type").get<std::string>();
      if (type == "rot_z") {
        return telenoise::Vec3(0, 0, e.at("theta").get<double>());
      }
      if (type == "rot_axis") {
        const auto& ax = e.at("axis");
        telenoise::Vec3 axis(ax[0].get<double>(), ax[1].get<double>(),
                             ax[2].get<double>());
        return axis.normalized() * e.at("theta").get<double>();
      }
      return std::nullopt;
    };
    if (config.contains("error")) {
      if (const auto v = angle_of(config.at("error"))) {
        sched.theta.assign(static_cast<std::size_t>(t_max), *v);
        have_angles = true;
      }
    } else if (config.contains("errors")) {
      have_angles = true;
      for (const Json& e : config.at("errors")) {
        const auto v = angle_of(e);
        if (!v) {
          have_angles = false;
          break;
        }
        sched.theta.push_back(*v);
      }
    }
    if (have_angles) {
      const telenoise::SimpleEstimate est =
          telenoise::simple_proof_estimate(sched);
      simple = est.r;
      if (est.small_angle_warning) {
        std::cerr << "warning: max|theta| * T exceeds 0.3; the small-angle "
                     "estimate may be inaccurate\n";
      }
    }
  }

  // corollary column applies when every per-step infidelity is within 1/100
  double r0 = 0.0;
  for (int t = 1; t <= t_max; ++t) {
    r0 = std::max(r0, telenoise::average_infidelity(spec.error_at(t)));
  }
  const bool corollary_ok = r0 <= 0.01;

  std::ostringstream csv;
  csv << "t,r_exact,r_lo2,r_hi2,r_lo3,r_hi3,r_simple,r_corollary\n";
  for (int t = 1; t <= t_max; ++t) {
    const std::size_t i = static_cast<std::size_t>(t - 1);
    const double r_cor =
        corollary_ok ? telenoise::corollary_linear_bound(r0, t) : std::nan("");
    csv << t << ',' << format_double(telenoise::average_infidelity(series[i]))
        << ',' << format_double(band2.r_lo[i]) << ','
        << format_double(band2.r_hi[i]) << ',' << format_double(band3.r_lo[i])
        << ',' << format_double(band3.r_hi[i]) << ','
        << format_double(simple[i]) << ',' << format_double(r_cor) << '\n';
  }
  write_output(opts.output, csv.str());
  return kExitOk;
}

// -------------------------------------------------------------- foliate ----

int run_foliate(const CommonOptions& opts, const std::string& csv_path) {
  const Json config = load_input(opts.input);
  const telenoise::FoliationNoiseModel model =
      telenoise::noise_model_from_json(config);
  telenoise::ConvertOptions convert_opts;
  if (opts.tolerance) convert_opts.purity_tol = *opts.tolerance;
  const telenoise::PauliReplacement replacement =
      telenoise::convert_noise_model(model, convert_opts);

  Json out;
  out["replacements"] = Json::array();
  std::ostringstream csv;
  csv << "gamma,t,w,axis,p\n";
  for (const auto& [loc, entry] : replacement.probs) {
    Json row;
    row["gamma"] = loc.gamma;
    row["t"] = loc.t;
    row["w"] = loc.w;
    row["axis"] = telenoise::to_string(entry.axis);
    row["p"] = entry.p;
    out["replacements"].push_back(row);
    csv << loc.gamma << ',' << loc.t << ',' << loc.w << ','
        << telenoise::to_string(entry.axis) << ',' << format_double(entry.p)
        << '\n';
  }
  write_output(opts.output, out.dump(2) + "\n");
  if (!csv_path.empty()) {
    write_output(csv_path, csv.str());
  }
  return kExitOk;
}

// --------------------------------------------------------------- verify ----

int run_verify(const CommonOptions& opts) {
  const Json config = load_input(opts.input);
  const telenoise::FoliationNoiseModel model =
      telenoise::noise_model_from_json(config);
  telenoise::ConvertOptions convert_opts;
  if (opts.tolerance) convert_opts.purity_tol = *opts.tolerance;
  const telenoise::Theorem2Report report =
      telenoise::verify_theorem2(model, convert_opts);

  Json out;
  out["groups"] = Json::array();
  for (const auto& g : report.groups) {
    Json row;
    std::string key;
    for (auto bit : g.syndrome) key.push_back(bit ? '1' : '0');
    row["syndrome"] = key;
    row["prob_coherent"] = g.prob_coherent;
    row["prob_pauli"] = g.prob_pauli;
    row["max_ptm_delta"] = g.max_ptm_delta;
    out["groups"].push_back(row);
  }
  out["max_prob_deviation"] = report.max_prob_deviation;
  out["max_ptm_deviation"] = report.max_ptm_deviation;
  out["max_deviation"] =
      std::max(report.max_prob_deviation, report.max_ptm_deviation);
  out["raw_granularity"] = {
      {"max_prob_deviation", report.raw_max_prob_deviation},
      {"max_ptm_deviation", report.raw_max_ptm_deviation},
  };
  write_output(opts.output, out.dump(2) + "\n");
  return kExitOk;
}

// ------------------------------------------------------------ threshold ----

int run_threshold(const CommonOptions& opts, int b, std::optional<double> p_th,
                  int n_locations) {
  const double p_bound = p_th ? *p_th : telenoise::threshold_lower_bound(b);
  const double theta = telenoise::theta_threshold(p_bound, n_locations);
  Json out;
  out["p_th_bound"] = p_bound;
  out["theta_bound"] = theta;
  write_output(opts.output, out.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "telenoise: coherent-noise analysis for teleportation chains and "
      "foliated CSS codes"};
  app.require_subcommand(1);

  CommonOptions chain_opts, bounds_opts, foliate_opts, verify_opts,
      threshold_opts;
  std::string foliate_csv;

  CLI::App* chain = app.add_subcommand(
      "chain", "average-channel infidelity series of a teleportation chain");
  add_common(chain, chain_opts, true);

  CLI::App* bounds = app.add_subcommand(
      "bounds", "analytical error-growth bounds for a teleportation chain");
  add_common(bounds, bounds_opts, true);

  CLI::App* foliate = app.add_subcommand(
      "foliate", "convert pure Z-coherent circuit noise to Pauli channels");
  add_common(foliate, foliate_opts, true);
  foliate->add_option("--csv", foliate_csv,
                      "also write the flat (gamma,t,w,axis,p) table here");

  CLI::App* verify = app.add_subcommand(
      "verify",
      "dense-simulation check that the Pauli replacement model reproduces "
      "the coherent logical channels");
  add_common(verify, verify_opts, true);

  CLI::App* threshold = app.add_subcommand(
      "threshold",
      "closed-form threshold arithmetic for the teleported surface code");
  add_common(threshold, threshold_opts, false);
  int b = 6;
  std::optional<double> p_th;
  int n_locations = 5;
  threshold->add_option("--B", b, "maximum decoding-graph neighbour count");
  threshold->add_option("--p-th", p_th,
                        "externally supplied numeric threshold probability");
  threshold->add_option("--n-locations", n_locations,
                        "spacetime locations combined per qubit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (chain->parsed()) return run_chain(chain_opts);
    if (bounds->parsed()) return run_bounds(bounds_opts);
    if (foliate->parsed()) return run_foliate(foliate_opts, foliate_csv);
    if (verify->parsed()) return run_verify(verify_opts);
    if (threshold->parsed()) {
      return run_threshold(threshold_opts, b, p_th, n_locations);
    }
  } catch (const telenoise::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const telenoise::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputational;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputational;
  }
  return kExitUsage;
}
