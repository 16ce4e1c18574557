#pragma once

#include <Eigen/Dense>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "taylor_sr/expr.hpp"
#include "taylor_sr/interval.hpp"

namespace tsr {

struct Dataset {
  Eigen::MatrixXd X;  // n samples x d variables
  Eigen::VectorXd Y;
  std::vector<std::string> names;  // optional, d entries when present

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index dims() const { return X.cols(); }

  // Per-variable [min, max] of the sampled inputs.
  std::vector<Interval> domains() const;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Headered CSV, last column is the target. Rejects non-numeric cells and
// non-finite values with a row/column diagnostic.
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& data, const std::string& path);

struct BenchmarkDef {
  int id = 0;  // 1..71
  std::string name;
  std::string formula;            // ground truth, extended infix grammar
  std::vector<Interval> ranges;   // per-variable sampling range
  int samples = 0;

  Expr truth() const { return parse(formula); }
  std::string file_number() const { return "F" + std::to_string(id); }
};

// SRB F1-F23 and FSRB F24-F71. Unknown ids (including the PMLB rows
// F72-F81, which are data files rather than formulas) raise DataError.
const BenchmarkDef& builtin(int id);
const std::vector<BenchmarkDef>& all_benchmarks();
// Accepts "F8" or "8".
int parse_benchmark_id(const std::string& text);

// Uniform sampling over the declared ranges; rows where the ground truth is
// non-finite are redrawn.
Dataset sample_uniform(const BenchmarkDef& bench, std::mt19937_64& rng);

}  // namespace tsr
