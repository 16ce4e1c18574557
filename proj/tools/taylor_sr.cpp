#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "taylor_sr/dataset.hpp"
#include "taylor_sr/features.hpp"
#include "taylor_sr/metrics.hpp"
#include "taylor_sr/pipeline.hpp"
#include "taylor_sr/report.hpp"
#include "taylor_sr/rng.hpp"

namespace {

using nlohmann::json;
using namespace tsr;

struct CommonOpts {
  std::string bench;
  std::string input;
  std::uint64_t seed = 0;
  bool no_timestamp = false;
  std::string preset;
  PipelineConfig cfg;
};

void add_data_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--bench", o.bench, "Built-in benchmark id (F1..F71)");
  cmd->add_option("--input", o.input, "CSV dataset (last column = target)");
  cmd->add_option("--seed", o.seed, "Master seed");
}

void add_config_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--pop", o.cfg.evo.pop_size, "Population size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gens", o.cfg.evo.max_gen, "Generation budget")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--threshold", o.cfg.evo.threshold, "Stopping threshold");
  cmd->add_option("--alpha", o.cfg.evo.alpha, "Recombination probability")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--beta", o.cfg.evo.beta, "Re-initialization probability")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--max-len", o.cfg.evo.max_len, "Expression length limit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--k-max", o.cfg.fit.k_max_override,
                  "Taylor order override (0 = schedule)");
  cmd->add_option("--coef-eps", o.cfg.fit.coef_eps,
                  "Coefficient significance threshold");
  cmd->add_option("--beam", o.cfg.beam, "Assembly candidates per subproblem")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--preset", o.preset, "Named preset: desk (pop 500, gens 2000)");
  cmd->add_flag("--no-timestamp", o.no_timestamp,
                "Suppress timing fields for byte-identical reports");
}

int apply_preset(CommonOpts& o) {
  if (o.preset.empty()) return 0;
  if (o.preset == "desk") {
    o.cfg.evo.pop_size = 500;
    o.cfg.evo.max_gen = 2000;
    return 0;
  }
  std::cerr << "unknown preset: " << o.preset << "\n";
  return 2;
}

Dataset load_input(const CommonOpts& o) {
  if (!o.bench.empty() && !o.input.empty())
    throw DataError("use either --bench or --input, not both");
  if (!o.bench.empty()) {
    const auto& def = builtin(parse_benchmark_id(o.bench));
    auto rng = make_rng(o.seed, 0xda7a);
    return sample_uniform(def, rng);
  }
  if (o.input.empty()) throw DataError("no input: pass --bench or --input");
  if (!std::filesystem::exists(o.input))
    throw DataError("file not found: " + o.input);
  return load_csv(o.input);
}

void write_or_print(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw DataError("cannot write " + out);
  f << text;
}

int cmd_analyze(const CommonOpts& o, const std::string& out) {
  Dataset data = load_input(o);
  const auto t0 = std::chrono::steady_clock::now();
  const auto ext = extract_features(data, o.cfg.fit, o.cfg.evo.threshold);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();

  json poly;
  poly["order"] = ext.poly.order;
  poly["terms"] = ext.poly.coeffs.size();
  std::vector<std::pair<double, std::string>> tops;
  for (const auto& [m, c] : ext.poly.coeffs) {
    std::string key;
    for (std::size_t t = 0; t < m.size(); ++t)
      if (m[t] > 0)
        key += (key.empty() ? "" : "*") + ("x" + std::to_string(t)) +
               (m[t] > 1 ? "^" + std::to_string(m[t]) : "");
    tops.push_back({std::abs(c), (key.empty() ? "1" : key) + ": " +
                                     std::to_string(c)});
  }
  std::sort(tops.rbegin(), tops.rend());
  json top = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(tops.size(), 10); ++i)
    top.push_back(tops[i].second);
  poly["top_coefficients"] = top;

  json j;
  j["version"] = kReportVersion;
  j["command"] = "analyze";
  j["seed"] = o.seed;
  j["config"] = config_json(o.cfg);
  j["taylor"] = poly;
  j["features"] = features_json(ext.features);
  if (!o.no_timestamp) j["wall_ms"] = ms;
  write_or_print(j, out);
  return 0;
}

int cmd_fit(CommonOpts o, const std::string& out) {
  Dataset data = load_input(o);
  o.cfg.seed = o.seed;
  RunResult r = taylorgp(data, o.cfg);
  write_or_print(run_report(r, "fit", o.cfg, !o.no_timestamp), out);
  std::cerr << r.expression << "\n"
            << "rmse=" << r.rmse_value << " r2=" << r.r2_value
            << " generations=" << r.generations << "\n";
  return r.rmse_value < o.cfg.evo.threshold ? 0 : 1;
}

std::vector<int> parse_suite(const std::string& suite) {
  std::vector<int> ids;
  if (suite == "srb") {
    for (int i = 1; i <= 23; ++i) ids.push_back(i);
  } else if (suite == "fsrb") {
    for (int i = 24; i <= 71; ++i) ids.push_back(i);
  } else {
    std::string cur;
    std::stringstream ss(suite);
    while (std::getline(ss, cur, ','))
      if (!cur.empty()) ids.push_back(parse_benchmark_id(cur));
  }
  if (ids.empty()) throw DataError("empty suite");
  return ids;
}

int cmd_bench(CommonOpts o, const std::string& suite, int runs,
              const std::string& out_dir) {
  if (runs <= 0) throw DataError("--runs must be positive");
  const auto ids = parse_suite(suite);
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  std::string csv =
      "benchmark,runs,cr,mean_rmse,median_rmse,mean_r2,mean_generations,"
      "mean_seconds\n";
  for (std::size_t bi = 0; bi < ids.size(); ++bi) {
    const auto& def = builtin(ids[bi]);
    std::vector<double> rmses, r2s, gens, secs;
    for (int run = 0; run < runs; ++run) {
      const std::uint64_t run_seed =
          split_seed(o.seed, bi * 1000 + static_cast<std::uint64_t>(run));
      PipelineConfig cfg = o.cfg;
      cfg.seed = run_seed;
      try {
        auto rng = make_rng(run_seed, 0xda7a);
        Dataset data = sample_uniform(def, rng);
        RunResult r = taylorgp(data, cfg);
        rmses.push_back(r.rmse_value);
        r2s.push_back(r.r2_value);
        gens.push_back(static_cast<double>(r.generations));
        secs.push_back(r.wall_ms / 1000.0);
        if (!out_dir.empty()) {
          const std::string path = out_dir + "/" + def.file_number() +
                                   "_run" + std::to_string(run) + ".json";
          write_or_print(run_report(r, "bench", cfg, !o.no_timestamp), path);
        }
      } catch (const std::exception& e) {
        std::cerr << def.file_number() << " run " << run << ": " << e.what()
                  << "\n";
        rmses.push_back(std::numeric_limits<double>::infinity());
        r2s.push_back(-std::numeric_limits<double>::infinity());
        gens.push_back(0);
        secs.push_back(0);
      }
    }
    auto mean = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    std::vector<double> sorted = rmses;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double cr =
        recovery_rate(Eigen::Map<const Eigen::ArrayXd>(
            rmses.data(), static_cast<Eigen::Index>(rmses.size())));
    char line[256];
    std::snprintf(line, sizeof line, "%s,%d,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                  def.file_number().c_str(), runs, cr, mean(rmses), median,
                  mean(r2s), mean(gens), mean(secs));
    csv += line;
    std::cerr << line;
  }
  if (!out_dir.empty()) {
    std::ofstream f(out_dir + "/summary.csv", std::ios::binary);
    f << csv;
  } else {
    std::cout << csv;
  }
  return 0;
}

int cmd_gen(const CommonOpts& o, const std::string& out) {
  if (o.bench.empty()) throw DataError("gen requires --bench");
  const auto& def = builtin(parse_benchmark_id(o.bench));
  auto rng = make_rng(o.seed, 0xda7a);
  Dataset data = sample_uniform(def, rng);
  if (data.names.empty()) {
    for (Eigen::Index t = 0; t < data.dims(); ++t)
      data.names.push_back("x" + std::to_string(t));
    data.names.push_back("y");
  }
  save_csv(data, out);
  std::cerr << "wrote " << out << " (" << data.n() << " rows, " << data.dims()
            << " features)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TaylorGP symbolic regression"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string out, out_dir, suite;
  int runs = 1;

  auto* analyze = app.add_subcommand("analyze", "Extract Taylor features");
  add_data_flags(analyze, o);
  add_config_flags(analyze, o);
  analyze->add_option("--out", out, "Output JSON path (default stdout)");

  auto* fit = app.add_subcommand("fit", "Run the TaylorGP pipeline");
  add_data_flags(fit, o);
  add_config_flags(fit, o);
  fit->add_option("--out", out, "Output JSON path (default stdout)");

  auto* bench = app.add_subcommand("bench", "Benchmark sweep");
  add_data_flags(bench, o);
  add_config_flags(bench, o);
  bench->add_option("--suite", suite, "srb, fsrb, or a comma list of ids")
      ->required();
  bench->add_option("--runs", runs, "Independent runs per benchmark");
  bench->add_option("--out-dir", out_dir, "Directory for JSON/CSV reports");

  auto* gen = app.add_subcommand("gen", "Write a sampled benchmark dataset");
  add_data_flags(gen, o);
  gen->add_option("--out", out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors are exit 2
  }

  if (const int rc = apply_preset(o)) return rc;

  try {
    if (analyze->parsed()) return cmd_analyze(o, out);
    if (fit->parsed()) return cmd_fit(o, out);
    if (bench->parsed()) return cmd_bench(o, suite, runs, out_dir);
    if (gen->parsed()) return cmd_gen(o, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
