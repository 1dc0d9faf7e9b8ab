#include "madasub/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include "madasub/diagnostics.hpp"
#include "madasub/enumerate.hpp"
#include "madasub/errors.hpp"
#include "madasub/kernel.hpp"
#include "madasub/parallel.hpp"
#include "madasub/sampler.hpp"
#include "madasub/simulate.hpp"

namespace madasub {

namespace {

namespace fs = std::filesystem;

const std::set<std::string> kFlagOptions = {"no-header", "demo", "randomized", "share-cache"};

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ConfigError("invalid number '" + cell + "' in " + what);
    }
  }
  return out;
}

// Built-in p = 10 example used by --demo.
SimDesign demo_design() {
  SimDesign d;
  d.n = 50;
  d.p = 10;
  d.rho = 0.5;
  d.beta = {1.5, 0.0, -1.0, 0.0, 0.0, 0.8, 0.0, 0.0, 0.0, 0.0};
  d.seed = 2024;
  return d;
}

Dataset load_data(const RunSpec& spec) {
  const Family family = parse_family(spec.family);
  if (!spec.data_path.empty()) {
    std::vector<std::string> warnings;
    Dataset d = load_csv(spec.data_path, spec.response, !spec.no_header, family, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return d;
  }
  if (spec.demo) {
    SimDesign design = demo_design();
    design.family = family;
    return generate_dataset(design).data;
  }
  throw ConfigError("no data: pass --data <csv> or --demo");
}

std::shared_ptr<const LogKernel> build_kernel(const RunSpec& spec,
                                              std::shared_ptr<const Dataset> data) {
  const bool ebic_prior = spec.model_prior == "ebic-gamma";
  if (spec.gamma_set && spec.kernel != "ebic" && !ebic_prior) {
    throw ConfigError("--gamma only applies to the ebic kernel or the ebic-gamma model prior");
  }
  if (spec.kernel == "ebic") {
    if (spec.model_prior != "uniform") {
      throw ConfigError("the ebic kernel carries its own model prior; drop --model-prior");
    }
    return std::make_shared<EbicKernel>(std::move(data), spec.gamma);
  }
  CoefficientPriorSpec coef;
  if (spec.kernel == "g-prior") {
    coef.kind = CoefficientPriorSpec::Kind::kGPrior;
  } else if (spec.kernel == "ridge") {
    coef.kind = CoefficientPriorSpec::Kind::kRidge;
  } else {
    throw ConfigError("unknown kernel '" + spec.kernel + "' (g-prior, ridge or ebic)");
  }
  coef.g = spec.g > 0.0 ? spec.g : static_cast<double>(data->n());
  ModelPriorSpec prior;
  prior.kind = parse_model_prior_kind(spec.model_prior);
  prior.omega = spec.omega;
  prior.a = spec.a;
  prior.b = spec.b;
  prior.gamma = spec.gamma;
  prior.validate();
  if (data->family != Family::kGaussian) {
    throw ConfigError("conjugate kernels need --family gaussian; use --kernel ebic for binomial data");
  }
  return std::make_shared<ConjugateLinearKernel>(std::move(data), coef, prior);
}

std::optional<ModelIndex> parse_start(const std::string& text, std::size_t p) {
  if (text.empty()) return std::nullopt;
  if (text == "empty") return ModelIndex(p);
  std::vector<ModelIndex::Index> members;
  for (double v : parse_list(text, "--start")) {
    if (v < 1 || v != std::floor(v)) throw ConfigError("--start takes 1-based variable indices");
    members.push_back(static_cast<ModelIndex::Index>(v - 1));
  }
  return ModelIndex(p, std::move(members));
}

double effective_q(const RunSpec& spec, std::size_t p) {
  const double dim = static_cast<double>(p);
  return !spec.q_set && spec.q >= dim ? 0.5 * dim : spec.q;
}

std::vector<double> initial_r0(const RunSpec& spec, PosteriorKernel& kernel) {
  const std::size_t p = kernel.p();
  if (!spec.r0.empty()) {
    auto r0 = parse_list(spec.r0, "--r0");
    if (r0.size() != p) throw ConfigError("--r0 needs " + std::to_string(p) + " values");
    return r0;
  }
  if (spec.init == "marginal-odds") return marginal_odds_init(kernel);
  if (spec.init != "constant") throw ConfigError("--init must be constant or marginal-odds");
  const double q = effective_q(spec, p);
  if (!(q > 0.0 && q < static_cast<double>(p))) throw ConfigError("--q must lie in (0, p)");
  return std::vector<double>(p, q / static_cast<double>(p));
}

// Replayable echo of the effective configuration.
KeyValues echo(const RunSpec& spec, const Dataset* data) {
  KeyValues kv;
  kv.emplace_back("command", spec.command);
  auto arg = [&kv](const std::string& name, const std::string& value) {
    kv.emplace_back("arg." + name, value);
  };
  auto num = [](double v) { return format_double(v); };
  const std::size_t p = data ? data->p() : 0;
  if (spec.command == "diagnose") {
    arg("trace", spec.trace_path);
    arg("burn-in", std::to_string(spec.burn_in));
    return kv;
  }
  if (spec.command == "simulate") {
    arg("n", std::to_string(spec.sim_n));
    arg("p", std::to_string(spec.sim_p));
    arg("rho", num(spec.sim_rho));
    if (!spec.sim_beta.empty()) arg("beta", spec.sim_beta);
    if (spec.sim_randomized) arg("randomized", "true");
    arg("sigma2", num(spec.sim_sigma2));
    arg("intercept", num(spec.sim_intercept));
    arg("family", spec.family);
    arg("seed", std::to_string(spec.seed));
    if (spec.demo) arg("demo", "true");
    return kv;
  }
  if (!spec.data_path.empty()) {
    arg("data", spec.data_path);
    arg("response", spec.response);
    if (spec.no_header) arg("no-header", "true");
  }
  if (spec.demo) arg("demo", "true");
  arg("family", spec.family);
  arg("kernel", spec.kernel);
  if (spec.kernel == "ebic") {
    arg("gamma", num(spec.gamma));
  } else {
    arg("g", num(spec.g > 0.0 ? spec.g : static_cast<double>(data ? data->n() : 0)));
    arg("model-prior", spec.model_prior);
    if (spec.model_prior == "bernoulli") arg("omega", num(spec.omega));
    if (spec.model_prior == "beta-binomial") {
      arg("a", num(spec.a));
      arg("b", num(spec.b));
    }
    if (spec.model_prior == "ebic-gamma") arg("gamma", num(spec.gamma));
  }
  if (spec.command == "enumerate") return kv;

  arg("iterations", std::to_string(spec.iterations));
  arg("burn-in", std::to_string(spec.burn_in));
  arg("L", num(spec.weight > 0.0 ? spec.weight : static_cast<double>(p)));
  arg("epsilon", num(spec.epsilon > 0.0 ? spec.epsilon : default_epsilon(p)));
  if (!spec.r0.empty()) {
    arg("r0", spec.r0);
  } else {
    arg("init", spec.init);
    if (spec.init == "constant") arg("q", num(effective_q(spec, p)));
  }
  arg("seed", std::to_string(spec.seed));
  if (!spec.start.empty()) arg("start", spec.start);
  if (spec.command == "run" && spec.delta) arg("delta", num(*spec.delta));
  if (spec.command == "parallel") {
    arg("workers", std::to_string(spec.workers));
    arg("rounds", std::to_string(spec.rounds));
    if (spec.share_cache) arg("share-cache", "true");
  }
  return kv;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::string median_ess(const ChainTrace& trace, std::size_t burn_in) {
  if (trace.length() - burn_in < 100) return "NA";
  return format_double(median(ess_per_variable(trace, burn_in)));
}

void execute_simulate(const RunSpec& spec, const fs::path& out) {
  SimDesign design = spec.demo ? demo_design() : SimDesign{};
  if (!spec.demo) {
    design.n = spec.sim_n;
    design.p = spec.sim_p;
    design.rho = spec.sim_rho;
    design.randomized = spec.sim_randomized;
    design.sigma2 = spec.sim_sigma2;
    design.intercept = spec.sim_intercept;
    design.seed = spec.seed;
    if (!spec.sim_randomized) {
      design.beta = spec.sim_beta.empty() ? std::vector<double>(design.p, 0.0)
                                          : parse_list(spec.sim_beta, "--beta");
    }
  }
  design.family = parse_family(spec.family);
  const SimulatedData sim = generate_dataset(design);
  write_dataset(out / "dataset.csv", sim.data);
  KeyValues kv = echo(spec, &sim.data);
  kv.emplace_back("result.active_set", sim.active.to_string());
  kv.emplace_back("result.beta", join(sim.beta));
  write_summary(out / "summary.txt", kv);
}

void execute_diagnose(const RunSpec& spec, const fs::path& out) {
  const ChainTrace trace = read_trace(spec.trace_path);
  if (spec.burn_in >= trace.length()) throw ConfigError("burn-in must be shorter than the trace");
  const auto f = inclusion_frequencies(trace, spec.burn_in);
  std::vector<std::string> names;
  write_pips(out / "pips.csv", names, f, {});
  KeyValues kv = echo(spec, nullptr);
  kv.emplace_back("result.iterations", std::to_string(trace.length()));
  kv.emplace_back("result.acceptance_rate", format_double(acceptance_rate(trace, spec.burn_in)));
  kv.emplace_back("result.ess_median", median_ess(trace, spec.burn_in));
  kv.emplace_back("result.median_probability_model", median_probability_model(f).to_string());
  write_summary(out / "summary.txt", kv);
}

}  // namespace

void execute(const RunSpec& spec) {
  const fs::path out(spec.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory '" + out.string() + "'");

  if (spec.command == "simulate") return execute_simulate(spec, out);
  if (spec.command == "diagnose") return execute_diagnose(spec, out);

  auto data = std::make_shared<const Dataset>(load_data(spec));
  const std::size_t p = data->p();
  PosteriorKernel kernel(build_kernel(spec, data));
  KeyValues kv = echo(spec, data.get());
  kv.emplace_back("result.kernel", kernel.describe());
  kv.emplace_back("result.n", std::to_string(data->n()));
  kv.emplace_back("result.p", std::to_string(p));

  if (spec.command == "enumerate") {
    const ExactPosterior post = enumerate_posterior(kernel.base());
    write_pips(out / "pips.csv", data->names, post.pips, {});
    write_model_table(out / "models.csv", post);
    kv.emplace_back("result.log_normalizer", format_double(post.log_normalizer));
    kv.emplace_back("result.median_probability_model",
                    median_probability_model(post.pips).to_string());
    write_summary(out / "summary.txt", kv);
    return;
  }

  const double weight = spec.weight > 0.0 ? spec.weight : static_cast<double>(p);
  const double epsilon = spec.epsilon > 0.0 ? spec.epsilon : default_epsilon(p);
  const std::vector<double> r0 = initial_r0(spec, kernel);
  const std::optional<ModelIndex> start = parse_start(spec.start, p);

  if (spec.command == "run") {
    SamplerConfig cfg;
    cfg.iterations = spec.iterations;
    cfg.burn_in = spec.burn_in;
    cfg.r0 = r0;
    cfg.weights.assign(p, weight);
    cfg.epsilon = epsilon;
    cfg.seed = spec.seed;
    cfg.start = start;
    cfg.delta = spec.delta;
    const ChainTrace trace = run_madasub(kernel, cfg);
    write_trace(out / "trace.csv", trace, epsilon);
    const std::size_t burn = std::min(spec.burn_in, trace.length() - 1);
    const auto f = inclusion_frequencies(trace, burn);
    write_pips(out / "pips.csv", data->names, f, trace.final_proposal);
    kv.emplace_back("result.iterations", std::to_string(trace.length()));
    kv.emplace_back("result.stopping_iteration",
                    trace.stop_iteration ? std::to_string(*trace.stop_iteration) : "NA");
    kv.emplace_back("result.acceptance_rate", format_double(acceptance_rate(trace)));
    kv.emplace_back("result.ess_median", median_ess(trace, burn));
    kv.emplace_back("result.kernel_evaluations", std::to_string(kernel.evaluations()));
    kv.emplace_back("result.median_probability_model", median_probability_model(f).to_string());
    write_summary(out / "summary.txt", kv);
    return;
  }

  if (spec.command == "parallel") {
    ParallelConfig cfg;
    cfg.workers = spec.workers;
    cfg.rounds = spec.rounds;
    cfg.iterations_per_round = spec.iterations;
    cfg.r0.assign(spec.workers, r0);
    cfg.weights.assign(spec.workers, std::vector<double>(p, weight));
    cfg.epsilon = epsilon;
    for (std::size_t k = 0; k < spec.workers; ++k) cfg.seeds.push_back(spec.seed + k);
    cfg.starts.assign(spec.workers, start);
    cfg.share_cache = spec.share_cache;
    const ParallelResult result = run_parallel(kernel, cfg, Execution::kOpenMP, spec.threads);

    std::vector<std::uint64_t> pooled(p, 0);
    std::size_t pooled_n = 0;
    std::size_t accepted = 0;
    std::vector<double> ess;
    for (std::size_t k = 0; k < result.traces.size(); ++k) {
      ChainTrace trace = result.traces[k];
      trace.burn_in = spec.burn_in;
      write_trace(out / ("trace_w" + std::to_string(k + 1) + ".csv"), trace, epsilon);
      const std::size_t burn = std::min(spec.burn_in, trace.length() - 1);
      for (std::size_t t = burn; t < trace.length(); ++t) {
        for (auto j : trace.records[t].accepted.members()) ++pooled[j];
      }
      pooled_n += trace.length() - burn;
      accepted += trace.accepted_count();
      if (trace.length() - burn >= 100) {
        const auto e = ess_per_variable(trace, burn);
        ess.insert(ess.end(), e.begin(), e.end());
      }
    }
    for (const auto& cp : result.checkpoints) {
      write_checkpoint(out / ("checkpoint_r" + std::to_string(cp.round) + ".csv"), cp,
                       spec.iterations);
    }
    std::vector<double> f(p);
    for (std::size_t j = 0; j < p; ++j) f[j] = static_cast<double>(pooled[j]) / static_cast<double>(pooled_n);
    write_pips(out / "pips.csv", data->names, f, result.checkpoints.back().joint.front());
    const double total = static_cast<double>(spec.workers * spec.rounds * spec.iterations);
    kv.emplace_back("result.iterations", std::to_string(spec.rounds * spec.iterations));
    kv.emplace_back("result.acceptance_rate", format_double(static_cast<double>(accepted) / total));
    kv.emplace_back("result.ess_median", ess.empty() ? "NA" : format_double(median(ess)));
    kv.emplace_back("result.median_probability_model", median_probability_model(f).to_string());
    write_summary(out / "summary.txt", kv);
    return;
  }
  throw ConfigError("unknown command '" + spec.command + "'");
}

namespace {

void add_data_options(CLI::App& app, RunSpec& spec) {
  app.add_option("--data", spec.data_path, "CSV file with covariates and response");
  app.add_option("--response", spec.response, "response column name or 1-based index");
  app.add_flag("--no-header", spec.no_header, "CSV has no header row");
  app.add_flag("--demo", spec.demo, "use the built-in p = 10 demo dataset");
  app.add_option("--family", spec.family, "gaussian or binomial");
}

void add_kernel_options(CLI::App& app, RunSpec& spec) {
  app.add_option("--kernel", spec.kernel, "g-prior, ridge or ebic");
  app.add_option("--g", spec.g, "coefficient prior scale (default n)");
  app.add_option("--model-prior", spec.model_prior,
                 "uniform, bernoulli, beta-binomial or ebic-gamma");
  app.add_option("--omega", spec.omega, "Bernoulli prior inclusion probability");
  app.add_option("--a", spec.a, "beta-binomial a");
  app.add_option("--b", spec.b, "beta-binomial b");
  app.add_option("--gamma", spec.gamma, "EBIC gamma in [0,1]");
}

void add_sampler_options(CLI::App& app, RunSpec& spec) {
  app.add_option("-T,--iterations", spec.iterations, "iterations (per round for parallel)");
  app.add_option("--burn-in", spec.burn_in, "burn-in iterations dropped from summaries");
  app.add_option("--L", spec.weight, "adaptation weight L_j (default p)");
  app.add_option("--epsilon", spec.epsilon, "truncation bound (default 1/p)");
  app.add_option("--q", spec.q, "prior expected model size; r0_j = q/p");
  app.add_option("--r0", spec.r0, "explicit comma-separated initial proposal vector");
  app.add_option("--init", spec.init, "constant or marginal-odds");
  app.add_option("--seed", spec.seed, "random seed");
  app.add_option("--start", spec.start, "start model: 1-based indices or 'empty'");
}

const char* kExitCodes =
    "Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O failure.";

std::vector<std::string> replay_args(const fs::path& summary) {
  const KeyValues kv = read_summary(summary);
  std::vector<std::string> args;
  for (const auto& [key, value] : kv) {
    if (key == "command") args.insert(args.begin(), value);
  }
  if (args.empty()) throw ConfigError("summary has no command entry");
  for (const auto& [key, value] : kv) {
    if (key.rfind("arg.", 0) != 0) continue;
    const std::string name = key.substr(4);
    if (kFlagOptions.count(name)) {
      if (value == "true") args.push_back("--" + name);
      continue;
    }
    args.push_back("--" + name);
    args.push_back(value);
  }
  return args;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  RunSpec spec;
  std::optional<double> delta;
  std::string replay_summary;
  std::string replay_out = ".";

  CLI::App app{"Adaptive independence Metropolis-Hastings for Bayesian variable selection"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "serial adaptive sampler");
  add_data_options(*run, spec);
  add_kernel_options(*run, spec);
  add_sampler_options(*run, spec);
  run->add_option("--delta", delta, "stop once max_j |f_j - r_j| <= delta");
  run->add_option("--out", spec.out_dir, "output directory");

  auto* par = app.add_subcommand("parallel", "multi-chain sampler with joint updates");
  add_data_options(*par, spec);
  add_kernel_options(*par, spec);
  add_sampler_options(*par, spec);
  par->add_option("-K,--workers", spec.workers, "number of chains");
  par->add_option("-R,--rounds", spec.rounds, "number of rounds");
  par->add_flag("--share-cache", spec.share_cache, "share one kernel cache across chains");
  par->add_option("--threads", spec.threads, "OpenMP threads (default: runtime setting)");
  par->add_option("--out", spec.out_dir, "output directory");

  auto* en = app.add_subcommand("enumerate", "exact posterior by full enumeration (p <= 25)");
  add_data_options(*en, spec);
  add_kernel_options(*en, spec);
  en->add_option("--out", spec.out_dir, "output directory");

  auto* sim = app.add_subcommand("simulate", "write a synthetic Toeplitz-design dataset");
  sim->add_option("--n", spec.sim_n, "observations");
  sim->add_option("--p", spec.sim_p, "covariates");
  sim->add_option("--rho", spec.sim_rho, "Toeplitz correlation");
  sim->add_option("--beta", spec.sim_beta, "comma-separated coefficients");
  sim->add_flag("--randomized", spec.sim_randomized, "draw the active set and coefficients");
  sim->add_option("--sigma2", spec.sim_sigma2, "noise variance");
  sim->add_option("--intercept", spec.sim_intercept, "binomial intercept");
  sim->add_option("--family", spec.family, "gaussian or binomial");
  sim->add_option("--seed", spec.seed, "random seed");
  sim->add_flag("--demo", spec.demo, "write the built-in p = 10 demo design");
  sim->add_option("--out", spec.out_dir, "output directory");

  auto* diag = app.add_subcommand("diagnose", "summaries of an existing trace file");
  diag->add_option("--trace", spec.trace_path, "trace CSV")->required();
  diag->add_option("--burn-in", spec.burn_in, "burn-in iterations");
  diag->add_option("--out", spec.out_dir, "output directory");

  auto* rep = app.add_subcommand("replay", "re-run the configuration recorded in a summary file");
  rep->add_option("--summary", replay_summary, "summary.txt of an earlier run")->required();
  rep->add_option("--out", replay_out, "output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitConfig;
  }

  try {
    if (rep->parsed()) {
      auto replayed = replay_args(replay_summary);
      replayed.push_back("--out");
      replayed.push_back(replay_out);
      return run_cli(replayed);
    }
    for (auto* sub : {run, par, en, sim, diag}) {
      if (sub->parsed()) spec.command = sub->get_name();
    }
    spec.delta = delta;
    for (auto* sub : {run, par, en}) {
      if (sub->parsed()) spec.gamma_set = sub->count("--gamma") > 0;
    }
    for (auto* sub : {run, par}) {
      if (sub->parsed()) spec.q_set = sub->count("--q") > 0;
    }
    execute(spec);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitSuccess;
}

}  // namespace madasub
