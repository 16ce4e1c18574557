#include "taylor_sr/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tsr {

std::vector<Interval> Dataset::domains() const {
  std::vector<Interval> out;
  out.reserve(static_cast<std::size_t>(dims()));
  for (Eigen::Index t = 0; t < dims(); ++t)
    out.push_back({X.col(t).minCoeff(), X.col(t).maxCoeff()});
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, int row, int col) {
  const char* b = cell.data();
  const char* e = b + cell.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
  double v = 0.0;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || !std::isfinite(v))
    throw DataError("row " + std::to_string(row) + ", column " +
                    std::to_string(col + 1) + ": not a finite number: '" +
                    cell + "'");
  return v;
}

}  // namespace

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("file not found: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  auto header = split_csv_line(line);
  if (header.size() < 2)
    throw DataError("need at least one feature column and a target column");
  const std::size_t cols = header.size();

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != cols)
      throw DataError("row " + std::to_string(lineno) + ": expected " +
                      std::to_string(cols) + " cells, got " +
                      std::to_string(cells.size()));
    std::vector<double> vals(cols);
    for (std::size_t c = 0; c < cols; ++c)
      vals[c] = parse_cell(cells[c], lineno, static_cast<int>(c));
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw DataError("no data rows in " + path);

  Dataset data;
  data.X.resize(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(cols - 1));
  data.Y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c + 1 < cols; ++c)
      data.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          rows[i][c];
    data.Y(static_cast<Eigen::Index>(i)) = rows[i][cols - 1];
  }
  data.names.assign(header.begin(), header.end() - 1);
  for (auto& n : data.names)
    while (!n.empty() && (n.back() == '\r' || n.back() == ' ')) n.pop_back();
  return data;
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write: " + path);
  for (Eigen::Index t = 0; t < data.dims(); ++t) {
    if (t < static_cast<Eigen::Index>(data.names.size()) &&
        !data.names[static_cast<std::size_t>(t)].empty())
      out << data.names[static_cast<std::size_t>(t)];
    else
      out << 'x' << t;
    out << ',';
  }
  out << "y\n";
  char buf[40];
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index t = 0; t < data.dims(); ++t) {
      std::snprintf(buf, sizeof buf, "%.17g", data.X(i, t));
      out << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", data.Y(i));
    out << buf << '\n';
  }
}

Dataset sample_uniform(const BenchmarkDef& bench, std::mt19937_64& rng) {
  const int d = static_cast<int>(bench.ranges.size());
  const Expr truth = bench.truth();
  Dataset data;
  data.X.resize(bench.samples, d);
  data.Y.resize(bench.samples);
  Eigen::VectorXd x(d);
  for (int i = 0; i < bench.samples; ++i) {
    for (int attempt = 0;; ++attempt) {
      for (int t = 0; t < d; ++t) {
        std::uniform_real_distribution<double> u(bench.ranges[t].lo,
                                                 bench.ranges[t].hi);
        x(t) = u(rng);
      }
      const double y = truth.eval(x);
      if (std::isfinite(y)) {
        data.X.row(i) = x;
        data.Y(i) = y;
        break;
      }
      if (attempt > 10000)
        throw DataError(bench.file_number() +
                        ": ground truth non-finite over its declared range");
    }
  }
  return data;
}

}  // namespace tsr
