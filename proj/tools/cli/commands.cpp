// Copyright 2026 The qlab Authors
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

#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <boost/rational.hpp>

#include "cli/file_format.hpp"
#include "qlab/composite.hpp"
#include "qlab/optimization.hpp"
#include "qlab/structured_states.hpp"

namespace qlab::cli {

using nlohmann::json;

namespace {

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(16) << x;
  return s.str();
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& out) {
  if (seed) return *seed;
  std::random_device device;
  const std::uint64_t generated = (static_cast<std::uint64_t>(device()) << 32) | device();
  out << "seed: " << generated << " (generated; pass --seed " << generated << " to reproduce)\n";
  return generated;
}

// 2-design ensembles make the Monte Carlo integrand constant, so the
// standard error collapses to rounding noise; allow that much slack.
bool within_three_sigma(double deviation, double standard_error) {
  return deviation <= 3.0 * standard_error + 1e-12;
}

json record(const std::string& name, json fields) {
  json r = {{"name", name}};
  r.update(fields);
  return r;
}

std::string rational_string(long long num, long long den) {
  const boost::rational<long long> r(num, den);
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Ensemble used for --verify: MUBs for prime d, otherwise a searched SIC.
Ensemble verification_ensemble(int d, std::uint64_t seed, std::string& kind) {
  if (d == 1) {
    kind = "single-state";
    return Ensemble({PureState::basis(1, 0)}, {1.0});
  }
  if (is_prime(d)) {
    kind = "mub";
    return mub_ensemble(mub_construct(d));
  }
  kind = "sic";
  FiducialSearchConfig cfg;
  cfg.seed = seed;
  return sic_ensemble_for(d, cfg);
}

}  // namespace

json RunReport::to_json() const {
  json doc;
  doc["command"] = command;
  doc["config"] = config;
  doc["seed"] = seed ? json(*seed) : json(nullptr);
  doc["results"] = results;
  doc["wall_time"] = wall_time;
  return doc;
}

json to_json(const std::string& name, const FidelityReport& report) {
  json r = {{"name", name}, {"value", report.value()}, {"method", qlab::to_string(report.method())}};
  if (report.standard_error()) r["stderr"] = *report.standard_error();
  r["meta"] = report.meta();
  return r;
}

CommandResult cmd_quantumness(const QuantumnessOptions& opts, std::ostream& out) {
  if (opts.d < 1) throw std::invalid_argument("quantumness: d must be >= 1");
  RunReport report;
  report.command = "quantumness";
  report.config = {{"d", opts.d}, {"verify", opts.verify}, {"samples", opts.samples}};
  const int d = opts.d;
  const double q = haar_integral_closed_form(d);
  out << "Q_" << d << " = 2/(d+1) = " << num(q) << "\n";
  report.results.push_back(record("quantumness", {{"d", d}, {"value", q}, {"exact", rational_string(2, d + 1)}}));

  bool passed = true;
  if (d <= 20) {
    const ExactRational exact = haar_integral_factorial_form(d);
    const bool exact_match = exact == ExactRational(2, d + 1);
    out << "factorial form d (d-1)! 2! / (d+1)! = " << exact.numerator() << "/" << exact.denominator()
        << (exact_match ? " (matches)" : " (MISMATCH)") << "\n";
    report.results.push_back(record("factorial_form", {{"matches", exact_match}}));
    passed = passed && exact_match;
  }
  if (!opts.verify) return {passed ? kExitSuccess : kExitVerification, std::move(report)};

  const std::uint64_t seed = resolve_seed(opts.seed, out);
  report.seed = seed;
  std::string kind;
  const Ensemble ensemble = verification_ensemble(d, seed, kind);

  MonteCarloConfig mc{opts.samples, seed};
  const FidelityReport haar = haar_average_fidelity(ensemble, mc);
  const double deviation = std::abs(haar.value() - q);
  const double se = *haar.standard_error();
  const bool mc_ok = within_three_sigma(deviation, se);
  out << "Haar average over " << opts.samples << " random von Neumann measurements (" << kind
      << " ensemble): " << num(haar.value()) << " +/- " << num(se) << " -> " << (mc_ok ? "within" : "OUTSIDE")
      << " 3 standard errors of Q_d\n";
  json mc_record = to_json("haar_average_fidelity", haar);
  mc_record["ensemble"] = kind;
  mc_record["within_3_sigma"] = mc_ok;
  mc_record["seed"] = seed;
  report.results.push_back(std::move(mc_record));

  Rng rng = make_stream(seed, 1);
  const auto povm = random_rank_one_povm(d, d * d, rng);
  const double achieved = achievable_fidelity(ensemble, Povm::from_rank_one(povm)).value();
  const bool achieved_ok = std::abs(achieved - q) < 1e-9;
  out << "achievable fidelity under a random rank-1 POVM: " << num(achieved) << (achieved_ok ? " (= Q_d)" : " (!= Q_d)")
      << "\n";
  report.results.push_back(
      record("achievable_fidelity_random_povm", {{"value", achieved}, {"equals_quantumness", achieved_ok}, {"seed", seed}}));

  passed = passed && mc_ok && achieved_ok;
  out << (passed ? "verification passed\n" : "verification FAILED\n");
  return {passed ? kExitSuccess : kExitVerification, std::move(report)};
}

CommandResult cmd_sic(const SicOptions& opts, std::ostream& out) {
  if (opts.d < 2) throw std::invalid_argument("sic: d must be >= 2");
  RunReport report;
  report.command = "sic";
  report.config = {{"d", opts.d}, {"restarts", opts.restarts}, {"max_iters", opts.max_iters}};
  const std::uint64_t seed = resolve_seed(opts.seed, out);
  report.seed = seed;

  FiducialSearchConfig cfg;
  cfg.dim = opts.d;
  cfg.n_restarts = opts.restarts;
  cfg.max_iters = opts.max_iters;
  cfg.seed = seed;
  const FiducialSearchResult found = find_fiducial(cfg);
  report.results.push_back(record("fiducial_search", {{"success", found.success},
                                                      {"potential", found.potential},
                                                      {"restarts_used", found.restarts_used},
                                                      {"seed", seed}}));
  if (!found.success) {
    out << "fiducial search FAILED in d = " << opts.d << ": " << found.message << "\n"
        << "best frame potential: " << num(found.potential) << "\n";
    return {kExitSearch, std::move(report)};
  }

  const SicEnsemble& sic = *found.sic;
  const SicCertificate cert = verify_sic(sic);
  const int d = opts.d;
  out << "SIC ensemble in d = " << d << " (" << d * d << " states, restart " << found.restarts_used - 1 << ")\n"
      << "frame potential:        " << num(found.potential) << "\n"
      << "overlap residual:       " << num(cert.overlap_residual) << " (target 1/(d+1) = " << num(1.0 / (d + 1)) << ")\n"
      << "Gram rank:              " << cert.gram_rank << " / " << cert.expected_rank << "\n"
      << "Phi-map residual:       " << num(cert.phi_map_residual) << "\n";

  Rng rng = make_stream(seed, 1);
  const auto povm = random_rank_one_povm(d, d * d, rng);
  const double achieved = achievable_fidelity(sic.base(), Povm::from_rank_one(povm)).value();
  out << "achievable fidelity under a random rank-1 POVM: " << num(achieved) << " (2/(d+1) = "
      << num(haar_integral_closed_form(d)) << ")\n";
  report.results.push_back(record("certificate", {{"overlap_residual", cert.overlap_residual},
                                                  {"gram_rank", cert.gram_rank},
                                                  {"phi_map_residual", cert.phi_map_residual},
                                                  {"passed", cert.passed},
                                                  {"achievable_fidelity", achieved}}));
  report.results.push_back(record("fiducial", {{"amplitudes", vector_to_json(sic.fiducial().amplitudes())}}));

  if (opts.out) {
    write_ensemble_file(*opts.out, sic.base(), sic.fiducial());
    out << "wrote " << opts.out->string() << "\n";
  }
  const bool ok = cert.passed && cert.map_equals_phi && std::abs(achieved - haar_integral_closed_form(d)) < 1e-9;
  return {ok ? kExitSuccess : kExitVerification, std::move(report)};
}

CommandResult cmd_mub(const MubOptions& opts, std::ostream& out) {
  if (!is_prime(opts.d))
    throw std::invalid_argument("mub: d = " + std::to_string(opts.d) +
                                " is not prime. Only prime dimensions are supported; complete sets are known for "
                                "prime powers, and none is known for composite d such as 6.");
  RunReport report;
  report.command = "mub";
  report.config = {{"d", opts.d}};
  const int d = opts.d;
  const MubCollection mubs = mub_construct(d);
  const MubResiduals residuals = mub_residuals(mubs);
  const Ensemble ensemble = mub_ensemble(mubs);

  Rng rng = make_stream(0, 0);
  const EnsembleMap map = ensemble_map_of(ensemble);
  const MapComparison cmp = maps_equal(
      d, [&](const Matrix& x) { return map.apply(x); }, [d](const Matrix& x) { return phi_closed_form(d, x); }, 16,
      rng);

  out << d + 1 << " mutually unbiased bases in d = " << d << " (" << ensemble.size() << " states, weight 1/"
      << d * (d + 1) << ")\n"
      << "intra-basis residual:   " << num(residuals.intra) << "\n"
      << "inter-basis residual:   " << num(residuals.inter) << " (target 1/d = " << num(1.0 / d) << ")\n"
      << "Phi-map residual:       " << num(cmp.residual) << "\n";
  report.results.push_back(record("mub", {{"n_states", ensemble.size()},
                                          {"intra_residual", residuals.intra},
                                          {"inter_residual", residuals.inter},
                                          {"phi_map_residual", cmp.residual}}));
  if (opts.out) {
    write_ensemble_file(*opts.out, ensemble);
    out << "wrote " << opts.out->string() << "\n";
  }
  const bool ok = residuals.intra < 1e-10 && residuals.inter < 1e-10 && cmp.equal;
  return {ok ? kExitSuccess : kExitVerification, std::move(report)};
}

CommandResult cmd_fidelity(const FidelityOptions& opts, std::ostream& out) {
  const int modes = static_cast<int>(opts.povm.has_value()) + static_cast<int>(opts.optimize) + static_cast<int>(opts.haar);
  if (modes != 1) throw std::invalid_argument("fidelity: choose exactly one of --povm, --optimize, --haar");
  RunReport report;
  report.command = "fidelity";
  report.config = {{"ensemble", opts.ensemble.string()}};

  const Ensemble ensemble = read_ensemble_file(opts.ensemble);
  const int d = ensemble.dim();
  const double q = haar_integral_closed_form(d);
  out << "ensemble: " << ensemble.size() << " states in d = " << d << "\n";

  if (opts.povm) {
    report.config["povm"] = opts.povm->string();
    const Povm povm = read_povm_file(*opts.povm);
    if (povm.dim() != d) throw FormatError(opts.povm->string() + ": dim does not match the ensemble");
    const FidelityReport achievable = achievable_fidelity(ensemble, povm);
    const FidelityReport optimal = average_fidelity(ensemble, povm, optimal_reconstruction(ensemble, povm));
    out << "achievable fidelity:    " << num(achievable.value()) << "\n"
        << "optimal resend average: " << num(optimal.value()) << "\n";
    report.results.push_back(to_json("achievable_fidelity", achievable));
    report.results.push_back(to_json("average_fidelity_optimal_reconstruction", optimal));
    return {kExitSuccess, std::move(report)};
  }

  const std::uint64_t seed = resolve_seed(opts.seed, out);
  report.seed = seed;

  if (opts.haar) {
    report.config["samples"] = opts.samples;
    const FidelityReport haar = haar_average_fidelity(ensemble, {opts.samples, seed});
    const double se = *haar.standard_error();
    const bool consistent = within_three_sigma(std::abs(haar.value() - q), se);
    out << "Haar average fidelity:  " << num(haar.value()) << " +/- " << num(se) << " (2/(d+1) = " << num(q) << ", "
        << (consistent ? "within" : "outside") << " 3 standard errors)\n";
    json r = to_json("haar_average_fidelity", haar);
    r["within_3_sigma"] = consistent;
    report.results.push_back(std::move(r));
    return {kExitSuccess, std::move(report)};
  }

  PovmSearchConfig cfg = PovmSearchConfig::defaults_for(d, seed);
  if (opts.outcomes > 0) cfg.n_outcomes = opts.outcomes;
  cfg.n_restarts = opts.restarts;
  report.config["outcomes"] = cfg.n_outcomes;
  report.config["restarts"] = cfg.n_restarts;
  const PovmSearchResult result = accessible_fidelity_search(ensemble, cfg);
  out << "accessible fidelity >=  " << num(result.report.value()) << " (" << cfg.n_outcomes << " outcomes, "
      << cfg.n_restarts << " restarts; 2/(d+1) = " << num(q) << ")\n";
  report.results.push_back(to_json("accessible_fidelity", result.report));

  if (opts.trace) {
    std::ofstream csv(*opts.trace);
    if (!csv) throw std::runtime_error(opts.trace->string() + ": cannot open for writing");
    csv << "restart,iter,value\n" << std::setprecision(17);
    for (const auto& p : result.trace) csv << p.restart << ',' << p.iter << ',' << p.value << '\n';
    out << "wrote " << opts.trace->string() << "\n";
  }
  if (result.report.value() < q - 1e-6) {
    out << "optimizer value is below 2/(d+1): lower bound violated, this indicates a bug\n";
    return {kExitVerification, std::move(report)};
  }
  return {kExitSuccess, std::move(report)};
}

CommandResult cmd_gap(const GapOptions& opts, std::ostream& out) {
  if (opts.d1 < 1 || opts.d2 < 1) throw std::invalid_argument("gap: dimensions must be >= 1");
  RunReport report;
  report.command = "gap";
  report.config = {{"d1", opts.d1}, {"d2", opts.d2}};
  const std::uint64_t seed = resolve_seed(opts.seed, out);
  report.seed = seed;

  const long long d1 = opts.d1;
  const long long d2 = opts.d2;
  const std::string product_exact = rational_string(4, (d1 + 1) * (d2 + 1));
  const std::string comp_exact = rational_string(2, d1 * d2 + 1);
  const std::string gap_exact = rational_string(2 * (d1 - 1) * (d2 - 1), (d1 + 1) * (d2 + 1) * (d1 * d2 + 1));

  FiducialSearchConfig fiducial;
  fiducial.seed = seed;
  const QuantumnessGapReport gap =
      entanglement_gap_experiment(opts.d1, opts.d2, PovmSearchConfig::defaults_for(opts.d1 * opts.d2, seed), fiducial);

  out << "composite space " << d1 << " x " << d2 << "\n"
      << "  product-signal fidelity (2/(d1+1))(2/(d2+1)) = " << product_exact << " = " << num(gap.product_value) << "\n"
      << "  composite quantumness 2/(d1 d2 + 1)          = " << comp_exact << " = " << num(gap.composite_quantumness)
      << "\n"
      << "  gap                                          = " << gap_exact << " = " << num(gap.gap)
      << (gap.degenerate ? " (degenerate: a factor has dimension 1)" : "") << "\n"
      << "  optimizer on product-SIC ensemble            = " << num(gap.optimizer_value) << "\n"
      << "  product-SIC under a product rank-1 POVM      = " << num(gap.product_povm_fidelity) << "\n"
      << "  composite SIC under a rank-1 POVM            = " << num(gap.composite_sic_fidelity) << "\n"
      << "  entangled composite SIC states               = " << gap.witness.entangled_states << " (max Schmidt rank "
      << gap.witness.max_schmidt_rank << ")\n";

  report.results.push_back(record("gap", {{"d1", d1},
                                          {"d2", d2},
                                          {"product_value", gap.product_value},
                                          {"product_exact", product_exact},
                                          {"composite_quantumness", gap.composite_quantumness},
                                          {"composite_exact", comp_exact},
                                          {"gap", gap.gap},
                                          {"gap_exact", gap_exact},
                                          {"degenerate", gap.degenerate},
                                          {"optimizer_value", gap.optimizer_value},
                                          {"product_povm_fidelity", gap.product_povm_fidelity},
                                          {"composite_sic_fidelity", gap.composite_sic_fidelity},
                                          {"entangled_states", gap.witness.entangled_states},
                                          {"max_schmidt_rank", gap.witness.max_schmidt_rank},
                                          {"seed", seed}}));

  bool ok = std::abs(gap.composite_sic_fidelity - gap.composite_quantumness) < 1e-9 &&
            gap.optimizer_value >= gap.composite_quantumness - 1e-6;
  if (!gap.degenerate) ok = ok && gap.gap > 0.0 && gap.witness.entangled_states > 0;
  return {ok ? kExitSuccess : kExitVerification, std::move(report)};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qlab: eavesdropping fidelities and the quantumness of a Hilbert space"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string report_path;
  app.add_option("--report", report_path, "Write the run report as JSON to FILE");

  std::uint64_t seed_value = 0;
  auto add_seed = [&](CLI::App* sub) { return sub->add_option("--seed", seed_value, "64-bit random seed"); };

  QuantumnessOptions q;
  auto* quant = app.add_subcommand("quantumness", "Q_d = 2/(d+1), optionally verified by Monte Carlo");
  quant->add_option("d", q.d, "Hilbert-space dimension")->required();
  quant->add_flag("--verify", q.verify, "Run the Haar Monte Carlo and rank-1 POVM checks");
  quant->add_option("--samples", q.samples, "Monte Carlo samples");
  auto* quant_seed = add_seed(quant);

  SicOptions s;
  std::string sic_out;
  auto* sic = app.add_subcommand("sic", "Search for a SIC fiducial and certify the ensemble");
  sic->add_option("d", s.d, "Hilbert-space dimension")->required();
  auto* sic_seed = add_seed(sic);
  sic->add_option("--restarts", s.restarts, "Search restarts");
  sic->add_option("--max-iters", s.max_iters, "Residual evaluations per restart");
  sic->add_option("--out", sic_out, "Write the ensemble file");

  MubOptions m;
  std::string mub_out;
  auto* mub = app.add_subcommand("mub", "Construct a complete set of MUBs (prime d)");
  mub->add_option("d", m.d, "Hilbert-space dimension")->required();
  mub->add_option("--out", mub_out, "Write the ensemble file");

  FidelityOptions f;
  std::string ensemble_path, povm_path, trace_path;
  auto* fid = app.add_subcommand("fidelity", "Fidelities of an ensemble file");
  fid->add_option("ensemble", ensemble_path, "Ensemble JSON file")->required();
  fid->add_option("--povm", povm_path, "Achievable fidelity for this POVM file");
  fid->add_flag("--optimize", f.optimize, "Search for the accessible fidelity");
  fid->add_flag("--haar", f.haar, "Haar Monte Carlo of random von Neumann measurements");
  fid->add_option("--outcomes", f.outcomes, "POVM outcomes for --optimize (default d^2)");
  fid->add_option("--restarts", f.restarts, "Restarts for --optimize");
  fid->add_option("--samples", f.samples, "Samples for --haar");
  auto* fid_seed = add_seed(fid);
  fid->add_option("--trace", trace_path, "CSV of optimizer iterates (restart,iter,value)");

  GapOptions g;
  auto* gap = app.add_subcommand("gap", "Product-signal fidelity vs composite quantumness");
  gap->add_option("d1", g.d1, "First factor dimension")->required();
  gap->add_option("d2", g.d2, "Second factor dimension")->required();
  auto* gap_seed = add_seed(gap);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  CommandResult result{kExitUsage, {}};
  try {
    if (quant->parsed()) {
      if (quant_seed->count() > 0) q.seed = seed_value;
      result = cmd_quantumness(q, out);
    } else if (sic->parsed()) {
      if (sic_seed->count() > 0) s.seed = seed_value;
      if (!sic_out.empty()) s.out = sic_out;
      result = cmd_sic(s, out);
    } else if (mub->parsed()) {
      if (!mub_out.empty()) m.out = mub_out;
      result = cmd_mub(m, out);
    } else if (fid->parsed()) {
      f.ensemble = ensemble_path;
      if (!povm_path.empty()) f.povm = povm_path;
      if (!trace_path.empty()) f.trace = trace_path;
      if (fid_seed->count() > 0) f.seed = seed_value;
      result = cmd_fidelity(f, out);
    } else if (gap->parsed()) {
      if (gap_seed->count() > 0) g.seed = seed_value;
      result = cmd_gap(g, out);
    }
  } catch (const SearchFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitSearch;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  result.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (!report_path.empty()) {
    try {
      write_json_file(report_path, result.report.to_json());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  return result.exit_code;
}

}  // namespace qlab::cli
