// Command-line front end: generate signals and graphs, synthesize
// measurements, run the recovery chain, and compare results. Every randomized
// command takes an explicit --seed; nothing reads the wall clock for
// randomness.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spikerec/errors.hpp"
#include "spikerec/expander.hpp"
#include "spikerec/io.hpp"
#include "spikerec/pipeline.hpp"
#include "spikerec/prony.hpp"
#include "spikerec/propagate.hpp"
#include "spikerec/resample.hpp"
#include "spikerec/rng.hpp"
#include "spikerec/spikes.hpp"

namespace {

using nlohmann::json;
using namespace spikerec;

json complex_array(const std::vector<Complex>& v) {
  json arr = json::array();
  for (const Complex& z : v) arr.push_back(json::array({z.real(), z.imag()}));
  return arr;
}

struct GenOptions {
  std::size_t s = 0;
  double lambda = 1.0;
  double sep = -1.0;
  std::uint64_t seed = 0;
  std::string out;
};

void run_gen(const GenOptions& opt) {
  const double sep =
      opt.sep >= 0.0 ? opt.sep : opt.lambda / static_cast<double>(opt.s + 1);
  const SpikeSignal signal = random_signal(opt.s, opt.lambda, sep, 0.5, 2.0, opt.seed);
  io::write_file(opt.out, io::to_json(signal));
}

struct GraphOptions {
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  bool require_ramanujan = false;
  std::string out;
};

void run_graph(const GraphOptions& opt) {
  const RegularGraph g = opt.require_ramanujan ? ramanujan_graph(opt.n, opt.d, opt.seed)
                                               : random_regular(opt.n, opt.d, opt.seed);
  const SpectralReport report = normalized_laplacian_spectrum(g);
  json j = json::parse(io::to_json(g));
  j["lambda1"] = report.lambda1;
  j["ramanujan"] = report.ramanujan;
  io::write_file(opt.out, j.dump());
}

struct MeasureOptions {
  std::string signal_path;
  std::string config_path;
  std::string out;
};

void run_measure(const MeasureOptions& opt) {
  const SpikeSignal signal = io::signal_from_json(io::read_file(opt.signal_path));
  const ExperimentConfig config = io::config_from_json(io::read_file(opt.config_path));
  const MeasurementSetup setup = synthesize_measurement(signal, config);
  io::write_file(opt.out, io::to_json(setup, config));
}

struct RecoverOptions {
  std::string data_path;
  std::string out;
  bool dump_phases = false;
  bool dump_resample = false;
  bool dump_prony = false;
};

void run_recover(const RecoverOptions& opt) {
  const io::MeasurementBundle bundle =
      io::measurement_from_json(io::read_file(opt.data_path));
  const RecoveryOutput output =
      end_to_end_recover(bundle.setup.graph, bundle.setup.embedding, bundle.setup.data,
                         bundle.config);
  json j = json::parse(io::to_json(output));

  if (opt.dump_phases || opt.dump_resample || opt.dump_prony) {
    const PhaseAssignment assignment = propagate_phases(
        bundle.setup.graph, bundle.setup.data, bundle.config.tau_rel);
    if (opt.dump_phases) {
      j["phases"] = {{"component", assignment.component},
                     {"anchor", assignment.anchor},
                     {"values", complex_array(assignment.values)}};
    }
    if (opt.dump_resample || opt.dump_prony) {
      const DerivedSizes sizes = bundle.setup.sizes;
      const GridObservations obs = component_grid_observations(assignment, sizes.n);
      if (obs.indices.size() < sizes.m) {
        const char* why = "component smaller than the sample count";
        if (opt.dump_resample) j["resample"] = {{"skipped", why}};
        if (opt.dump_prony) j["prony"] = {{"skipped", why}};
      } else {
        const ResampleSolution sol =
            invert_resampling(obs.indices, obs.values, sizes.n, sizes.m);
        if (opt.dump_resample) {
          j["resample"] = {{"indices", obs.indices},
                           {"samples", complex_array(sol.samples)},
                           {"residual", sol.residual},
                           {"condition", sol.condition}};
        }
        if (opt.dump_prony) {
          const double h = bundle.config.omega / static_cast<double>(sizes.m);
          const std::size_t stride =
              decimation_stride(sizes.m, bundle.config.s, h, bundle.config.lambda);
          UniformSamples decimated;
          decimated.step = static_cast<double>(stride) * h;
          decimated.values.resize(sizes.m / stride);
          for (std::size_t k = 0; k < decimated.values.size(); ++k) {
            decimated.values[k] = sol.samples[stride * (k + 1) - 1];
          }
          const std::size_t order = output.diagnostics.model_order;
          json prony = {{"stride", stride}};
          if (order > 0) {
            const LinearFit fit = annihilating_polynomial(decimated, order);
            prony["monic_tail"] = complex_array(fit.coeffs);
            prony["residual"] = fit.residual;
            prony["roots"] = complex_array(polynomial_roots(fit.coeffs));
          }
          j["prony"] = std::move(prony);
        }
      }
    }
  }
  io::write_file(opt.out, j.dump());
}

struct VerifyOptions {
  std::string a_path;
  std::string b_path;
  double tol = 1e-6;
};

int run_verify(const VerifyOptions& opt) {
  const SpikeSignal a = io::any_signal_from_json(io::read_file(opt.a_path));
  const SpikeSignal b = io::any_signal_from_json(io::read_file(opt.b_path));
  const RecoveryReport report = verify_recovery(a, b, opt.tol);
  json j = {{"class_distance", report.class_distance},
            {"matched", report.matched},
            {"aligned_phase",
             json::array({report.aligned_phase.real(), report.aligned_phase.imag()})}};
  std::cout << j.dump() << "\n";
  return report.matched ? 0 : 1;
}

struct BenchOptions {
  std::size_t trials = 0;
  std::size_t s = 0;
  std::size_t d = 3;
  double lambda = 1.0;
  double omega = 0.25;
  std::uint64_t seed = 0;
};

void run_bench(const BenchOptions& opt) {
  using clock = std::chrono::steady_clock;
  std::size_t matched = 0;
  double worst_distance = 0.0;
  double min_component = 1.0;
  double max_resample_residual = 0.0;
  double max_fit_residual = 0.0;
  double recover_seconds = 0.0;

  const auto wall_start = clock::now();
  for (std::size_t i = 0; i < opt.trials; ++i) {
    const std::uint64_t trial = derive_seed(opt.seed, i);
    const SpikeSignal signal =
        random_signal(opt.s, opt.lambda, opt.lambda / static_cast<double>(opt.s + 1),
                      0.5, 2.0, derive_seed(trial, 1));
    ExperimentConfig config;
    config.s = opt.s;
    config.lambda = opt.lambda;
    config.omega = opt.omega;
    config.d = opt.d;
    config.seed = derive_seed(trial, 2);
    const MeasurementSetup setup = synthesize_measurement(signal, config);

    const auto t0 = clock::now();
    const RecoveryOutput output =
        end_to_end_recover(setup.graph, setup.embedding, setup.data, config);
    recover_seconds += std::chrono::duration<double>(clock::now() - t0).count();

    const RecoveryReport report = verify_recovery(signal, output.signal, 1e-6);
    if (report.matched) ++matched;
    worst_distance = std::max(worst_distance, report.class_distance);
    min_component = std::min(min_component, output.diagnostics.component_fraction);
    max_resample_residual =
        std::max(max_resample_residual, output.diagnostics.resample_residual);
    max_fit_residual = std::max(max_fit_residual, output.diagnostics.fit_residual);
  }
  const double wall = std::chrono::duration<double>(clock::now() - wall_start).count();

  std::printf("trials                  %zu  (s=%zu d=%zu lambda=%g omega=%g)\n",
              opt.trials, opt.s, opt.d, opt.lambda, opt.omega);
  std::printf("matched at 1e-6         %zu / %zu\n", matched, opt.trials);
  std::printf("worst class distance    %.3e\n", worst_distance);
  std::printf("min component fraction  %.4f\n", min_component);
  std::printf("max resample residual   %.3e\n", max_resample_residual);
  std::printf("max intensity misfit    %.3e\n", max_fit_residual);
  std::printf("mean recover time       %.3f s\n",
              opt.trials ? recover_seconds / static_cast<double>(opt.trials) : 0.0);
  std::printf("total wall time         %.3f s\n", wall);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spike-train recovery from graph intensity measurements"};
  app.require_subcommand(1);

  GenOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "generate a random spike signal");
  gen->add_option("--s", gen_opt.s, "spike count")->required();
  gen->add_option("--lambda", gen_opt.lambda, "support interval length")
      ->capture_default_str();
  gen->add_option("--sep", gen_opt.sep, "minimum separation (default lambda/(s+1))");
  gen->add_option("--seed", gen_opt.seed, "RNG seed")->required();
  gen->add_option("-o,--output", gen_opt.out, "output file")->required();

  GraphOptions graph_opt;
  auto* graph = app.add_subcommand("graph", "generate a random regular graph");
  graph->add_option("--n", graph_opt.n, "vertex count")->required();
  graph->add_option("--d", graph_opt.d, "degree")->required();
  graph->add_option("--seed", graph_opt.seed, "RNG seed")->required();
  graph->add_flag("--require-ramanujan", graph_opt.require_ramanujan,
                  "reject candidates until the spectral gap is certified");
  graph->add_option("-o,--output", graph_opt.out, "output file")->required();

  MeasureOptions measure_opt;
  auto* measure = app.add_subcommand("measure", "synthesize intensity measurements");
  measure->add_option("--signal", measure_opt.signal_path, "signal file")->required();
  measure->add_option("--config", measure_opt.config_path, "experiment config file")
      ->required();
  measure->add_option("-o,--output", measure_opt.out, "output file")->required();

  RecoverOptions recover_opt;
  auto* recover = app.add_subcommand("recover", "run the recovery chain");
  recover->add_option("--data", recover_opt.data_path, "measurement file")->required();
  recover->add_option("-o,--output", recover_opt.out, "output file")->required();
  recover->add_flag("--dump-phases", recover_opt.dump_phases,
                    "embed the propagated phase assignment");
  recover->add_flag("--dump-resample", recover_opt.dump_resample,
                    "embed the recovered frequency samples");
  recover->add_flag("--dump-prony", recover_opt.dump_prony,
                    "embed the annihilating polynomial and its roots");

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand("verify", "compare two signals up to global phase");
  verify->add_option("--a", verify_opt.a_path, "first signal file")->required();
  verify->add_option("--b", verify_opt.b_path, "second signal file")->required();
  verify->add_option("--tol", verify_opt.tol, "match tolerance")->capture_default_str();

  BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench", "run seeded end-to-end trials");
  bench->add_option("--trials", bench_opt.trials, "trial count")->required();
  bench->add_option("--s", bench_opt.s, "spike count")->required();
  bench->add_option("--d", bench_opt.d, "graph degree")->capture_default_str();
  bench->add_option("--lambda", bench_opt.lambda, "support interval length")
      ->capture_default_str();
  bench->add_option("--omega", bench_opt.omega, "frequency band edge")
      ->capture_default_str();
  bench->add_option("--seed", bench_opt.seed, "master seed")->required();

  try {
    app.parse(argc, argv);
    if (gen->parsed()) run_gen(gen_opt);
    if (graph->parsed()) run_graph(graph_opt);
    if (measure->parsed()) run_measure(measure_opt);
    if (recover->parsed()) run_recover(recover_opt);
    if (verify->parsed()) return run_verify(verify_opt);
    if (bench->parsed()) run_bench(bench_opt);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
