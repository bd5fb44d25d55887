// Copyright 2026 The schemagrain Authors.
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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <sstream>

#include "schemagrain/errors.hpp"
#include "schemagrain/experiments.hpp"

namespace schemagrain::cli {

namespace {

std::vector<double> parse_values(const std::string& flag, const std::string& text) {
  ExperimentConfig scratch;
  apply_setting(scratch, "fvalues", text);  // reuse the list parser
  if (scratch.fvalues.empty()) throw UsageError(flag + " needs at least one value");
  return scratch.fvalues;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and finite-population SGA schema dynamics experiments", "sgcoarse"};

  std::optional<int> preset_id;
  std::optional<std::string> config_file, out_dir, fvalues, frange;
  std::optional<unsigned> order;
  std::optional<std::size_t> population, replicates, generations, threads;
  std::optional<double> sigma;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> sweep_n, sweep_sigma;

  app.add_option("--preset", preset_id, "Experiment preset 1..12");
  app.add_option("--config", config_file, "Config or manifest file (key = value lines)");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--o", order, "Schema order (genome length of the reduced model)");
  app.add_option("--n", population, "Population size");
  app.add_option("--r", replicates, "Number of replicate runs");
  app.add_option("--generations", generations, "Number of generations");
  app.add_option("--sigma", sigma, "Fitness noise standard deviation");
  app.add_option("--fvalues", fvalues, "Comma-separated f-values in genome-index order");
  app.add_option("--frange", frange, "lo,hi interval for random f-values");
  app.add_option("--threads", threads, "Worker threads for replicate runs (0 = all cores)");
  auto* n_sweep = app.add_option("--sweep-n", sweep_n,
                                 "Comma-separated population sizes; writes sweep.csv");
  auto* s_sweep = app.add_option("--sweep-sigma", sweep_sigma,
                                 "Comma-separated sigma values; writes sweep.csv");
  n_sweep->excludes(s_sweep);

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    ExperimentConfig config = preset_id ? preset(*preset_id) : ExperimentConfig{};
    if (config_file) apply_config_file(config, *config_file);
    if (order) config.order = *order;
    if (population) config.population = *population;
    if (replicates) config.replicates = *replicates;
    if (generations) config.generations = *generations;
    if (sigma) config.sigma = *sigma;
    if (fvalues) apply_setting(config, "fvalues", *fvalues);
    if (frange) apply_setting(config, "frange", *frange);
    if (seed) config.seed = *seed;
    if (out_dir) config.output_dir = *out_dir;
    if (threads) config.threads = *threads;
    config.validate();

    if (sweep_n || sweep_sigma) {
      const SweepAxis axis = sweep_n ? SweepAxis::kPopulation : SweepAxis::kSigma;
      const auto values = sweep_n ? parse_values("--sweep-n", *sweep_n)
                                  : parse_values("--sweep-sigma", *sweep_sigma);
      const auto rows = run_convergence_sweep(config, axis, values);
      const std::filesystem::path dir = config.output_dir;
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
      write_sweep_csv(axis, rows, dir / "sweep.csv");
      for (const auto& row : rows)
        out << (axis == SweepAxis::kPopulation ? "n=" : "sigma=") << format_double(row.setting)
            << " max_deviation=" << format_double(row.max_deviation) << '\n';
      return kSuccess;
    }

    const ExperimentResult result = run_experiment(config);
    out << "wrote " << config.output_dir << " (o=" << config.order
        << ", n=" << config.population << ", r=" << config.replicates
        << ", generations=" << config.generations << ")\n";
    out << "max |sfsga_mean - ipsga2| = " << format_double(result.max_deviation()) << '\n';
    if (result.rescue) {
      out << "winner " << to_bits(result.rescue->winner, config.order)
          << " f=" << format_double(result.rescue->winner_fvalue)
          << " mean f=" << format_double(result.rescue->mean_fvalue)
          << (result.rescue->above_average ? " (above average)" : " (not above average)") << '\n';
    }
    return kSuccess;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const DegenerateSelectionError& e) {
    err << e.what() << '\n';
    return kDegenerateSelection;
  } catch (const ArgumentError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace schemagrain::cli
