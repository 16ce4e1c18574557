#include <cctype>

#include "taylor_sr/dataset.hpp"

namespace tsr {

namespace {

BenchmarkDef bench(int id, std::string name, std::string formula,
                   std::vector<Interval> ranges, int samples) {
  return {id, std::move(name), std::move(formula), std::move(ranges), samples};
}

std::vector<Interval> uni(Interval r, int d) {
  return std::vector<Interval>(static_cast<std::size_t>(d), r);
}

std::vector<BenchmarkDef> build_table() {
  std::vector<BenchmarkDef> t;
  // --- classical SRB ---
  t.push_back(bench(1, "Keijzer-5", "log(x0)", uni({0, 2}, 1), 20));
  t.push_back(bench(2, "Nguyen-8", "sqrt(x0)", uni({0, 2}, 1), 20));
  t.push_back(bench(3, "Korns-1", "1.57 + 24.3*x0", uni({-1, 1}, 1), 20));
  t.push_back(bench(4, "Korns-6", "6.87 + 11*cos(7.23*x0*x0*x0)",
                    uni({-0.5, 0.5}, 1), 20));
  t.push_back(bench(5, "Nguyen-4",
                    "x0*x0*x0*x0*x0*x0 + x0*x0*x0*x0*x0 + x0*x0*x0*x0 + "
                    "x0*x0*x0 + x0*x0 + x0",
                    uni({-1, 1}, 1), 20));
  t.push_back(bench(6, "Nguyen-3",
                    "x0*x0*x0*x0*x0 + x0*x0*x0*x0 + x0*x0*x0 + x0*x0 + x0",
                    uni({-1, 1}, 1), 20));
  t.push_back(bench(7, "Koza-1,Nguyen-2",
                    "x0*x0*x0*x0 + x0*x0*x0 + x0*x0 + x0", uni({-1, 1}, 1),
                    20));
  t.push_back(bench(8, "Nguyen-1", "x0*x0*x0 + x0*x0 + x0", uni({-1, 1}, 1),
                    20));
  t.push_back(bench(9, "Koza-3",
                    "x0*x0*x0*x0*x0*x0 - 2*x0*x0*x0*x0 + x0*x0",
                    uni({-1, 1}, 1), 20));
  t.push_back(bench(10, "Koza-2", "x0*x0*x0*x0*x0 - 2*x0*x0*x0 + x0",
                    uni({-1, 1}, 1), 20));
  t.push_back(bench(11, "Nguyen-5", "cos(x0)*sin(x0*x0) - 1",
                    uni({-1.6, 1.6}, 1), 20));
  t.push_back(bench(12, "Nguyen-6", "sin(x0) + sin(x0 + x0*x0)",
                    uni({-1, 1}, 1), 20));
  t.push_back(bench(13, "Nguyen-11", "pow(x0, x1)", uni({2, 4}, 2), 400));
  t.push_back(bench(14, "Keijzer-11", "x0*x1 + sin((x0 - 1)*(x1 - 1))",
                    uni({-1, 1}, 2), 400));
  t.push_back(bench(15, "Nguyen-12",
                    "x0*x0*x0*x0 - x0*x0*x0 + x1*x1/2 - x1", uni({-1, 1}, 2),
                    400));
  t.push_back(bench(16, "Keijzer-13", "6*sin(x0)*cos(x1)", uni({-1, 1}, 2),
                    400));
  t.push_back(bench(17, "Keijzer-15",
                    "x0*x0*x0/5 + x1*x1*x1/2 - x1 - x0", uni({-1, 1}, 2),
                    400));
  t.push_back(bench(18, "Nguyen-9", "sin(x0) + sin(x1*x1)", uni({-1, 1}, 2),
                    400));
  t.push_back(bench(19, "Nguyen-10", "2*sin(x0)*cos(x1)", uni({-1, 1}, 2),
                    400));
  t.push_back(bench(20, "Vladislavleva-1",
                    "pow(exp(0 - (x0 - 1)), 2) / (1.2 + (x1 - 2.5)*(x1 - 2.5))",
                    uni({-1, 1}, 2), 400));
  // x, y, z -> x0, x1, x2
  t.push_back(bench(21, "Keijzer-3",
                    "30*x0*x2 / ((x0 - 10)*pow(x1, x1))",
                    {{-1, 1}, {1, 3}, {-1, 1}}, 1000));
  t.push_back(bench(22, "Korns-2", "0.23 + 14.2*(x0 + x1)/(3*x2)",
                    {{-1, 1}, {-1, 1}, {1, 3}}, 1000));
  t.push_back(bench(23, "Vladislavleva-5",
                    "30*((x0 - 1)*(x2 - 1)) / (x1*x1*(x0 - 10))",
                    uni({0, 2}, 3), 1000));
  // --- Feynman FSRB; variables numbered in order of appearance ---
  t.push_back(bench(24, "I.6.2a", "exp(0 - x0*x0/2)/sqrt(2*pi)",
                    uni({1, 3}, 1), 20));
  t.push_back(bench(25, "I.6.2",
                    "exp(0 - (x0/x1)*(x0/x1)/2)/(sqrt(2*pi)*x1)",
                    uni({1, 3}, 2), 400));
  t.push_back(bench(26, "I.12.1", "x0*x1", uni({2, 4}, 2), 400));
  t.push_back(bench(27, "I.12.5", "x0*x1", uni({2, 4}, 2), 400));
  t.push_back(bench(28, "I.14.4", "x0*x1*x1/2", uni({2, 4}, 2), 400));
  t.push_back(bench(29, "I.25.13", "x0/x1", uni({2, 4}, 2), 400));
  t.push_back(bench(30, "I.26.2", "asin(x0*sin(x1))", {{0, 1}, {2, 4}}, 400));
  t.push_back(bench(31, "I.29.4", "x0/x1", uni({2, 4}, 2), 400));
  t.push_back(bench(32, "I.34.27", "x0/(2*pi)*x1", uni({2, 4}, 2), 400));
  t.push_back(bench(33, "I.39.1", "3*x0*x1/2", uni({2, 4}, 2), 400));
  t.push_back(bench(34, "II.3.24", "x0/(4*pi*x1*x1)", uni({2, 4}, 2), 400));
  t.push_back(bench(35, "II.8.31", "x0*x1*x1/2", uni({2, 4}, 2), 400));
  t.push_back(bench(36, "II.11.28", "1 + x0*x1/(1 - x0*x1/3)", uni({0, 1}, 2),
                    400));
  t.push_back(bench(37, "II.27.18", "x0*x1*x1", uni({2, 4}, 2), 400));
  t.push_back(bench(38, "II.38.14", "x0/(2*(1 + x1))", uni({2, 4}, 2), 400));
  t.push_back(bench(39, "III.12.43", "x0*x1/(2*pi)", uni({2, 4}, 2), 400));
  t.push_back(bench(40, "II.37.1", "x0*(1 + x1)*x2", uni({2, 4}, 3), 1000));
  t.push_back(bench(41, "I.18.12", "x0*x1*sin(x2)", uni({2, 4}, 3), 1000));
  t.push_back(bench(42, "I.6.2b",
                    "exp(0 - ((x0 - x1)/x2)*((x0 - x1)/x2)/2)/(sqrt(2*pi)*x2)",
                    uni({1, 3}, 3), 1000));
  // m0 -> x0, v -> x1, c -> x2
  t.push_back(bench(43, "I.10.7", "x0/sqrt(1 - x1*x1/(x2*x2))",
                    {{3, 5}, {1, 2}, {3, 5}}, 1000));
  t.push_back(bench(44, "I.12.4", "x0*x1/(4*pi*x2*x1*x1*x1)",
                    uni({2, 4}, 3), 1000));
  t.push_back(bench(45, "I.14.3", "x0*x1*x2", uni({2, 4}, 3), 1000));
  t.push_back(bench(46, "I.15.1", "x0*x1/sqrt(1 - x1*x1/(x2*x2))",
                    {{3, 5}, {1, 2}, {3, 5}}, 1000));
  t.push_back(bench(47, "I.16.6", "(x0 + x1)/(1 + x0*x1/(x2*x2))",
                    uni({2, 4}, 3), 1000));
  t.push_back(bench(48, "I.27.6", "1/(1/x0 + x1/x2)", uni({2, 4}, 3), 1000));
  t.push_back(bench(49, "I.30.3",
                    "x0*sin(x1*x2/2)*sin(x1*x2/2)/(sin(x2/2)*sin(x2/2))",
                    uni({2, 4}, 3), 1000));
  // lambda -> x0, n -> x1, d -> x2
  t.push_back(bench(50, "I.30.5", "asin(x0/(x1*x2))",
                    {{1, 2}, {2, 4}, {2, 4}}, 1000));
  // omega0 -> x0, v -> x1, c -> x2
  t.push_back(bench(51, "I.34.1", "x0/(1 - x1/x2)", {{3, 5}, {1, 2}, {3, 5}},
                    1000));
  // v -> x0, c -> x1, omega0 -> x2
  t.push_back(bench(52, "I.34.14", "(1 + x0/x1)/sqrt(1 - x0*x0/(x1*x1))*x2",
                    {{1, 2}, {3, 5}, {3, 5}}, 1000));
  t.push_back(bench(53, "I.37.4", "x0 + x1 + 2*sqrt(x0*x1)*cos(x2)",
                    uni({2, 4}, 3), 1000));
  t.push_back(bench(54, "I.39.11", "1/(x0 - 1)*x1*x2", uni({2, 4}, 3), 1000));
  t.push_back(bench(55, "I.43.31", "x0*x1*x2", uni({2, 4}, 3), 1000));
  t.push_back(bench(56, "I.47.23", "sqrt(x0*x1/x2)", uni({2, 4}, 3), 1000));
  t.push_back(bench(57, "II.4.23", "x0/(4*pi*x1*x2)", uni({2, 4}, 3), 1000));
  t.push_back(bench(58, "II.8.7", "3*x0*x0/(5*4*pi*x1*x2)", uni({2, 4}, 3),
                    1000));
  t.push_back(bench(59, "II.10.9", "x0/x1*1/(1 + x2)", uni({2, 4}, 3), 1000));
  // rho_c0 -> x0, v -> x1, c -> x2
  t.push_back(bench(60, "II.13.23", "x0/sqrt(1 - x1*x1/(x2*x2))",
                    {{3, 5}, {1, 2}, {3, 5}}, 1000));
  t.push_back(bench(61, "II.13.34", "x0*x1/sqrt(1 - x1*x1/(x2*x2))",
                    {{3, 5}, {1, 2}, {3, 5}}, 1000));
  t.push_back(bench(62, "II.27.16", "x0*x1*x2*x2", uni({2, 4}, 3), 1000));
  t.push_back(bench(63, "II.34.2a", "x0*x1/(2*pi*x2)", uni({2, 4}, 3), 1000));
  t.push_back(bench(64, "II.34.2", "x0*x1*x2/2", uni({2, 4}, 3), 1000));
  t.push_back(bench(65, "II.34.29a", "x0*x1/(4*pi*x2)", uni({2, 4}, 3), 1000));
  t.push_back(bench(66, "III.7.38", "2*x0*x1/(x2/(2*pi))", uni({2, 4}, 3),
                    1000));
  t.push_back(bench(67, "III.8.54",
                    "sin(x0*x1/(x2/(2*pi)))*sin(x0*x1/(x2/(2*pi)))",
                    uni({1, 2}, 3), 1000));
  t.push_back(bench(68, "III.15.12", "2*x0*(1 - cos(x1*x2))", uni({2, 4}, 3),
                    1000));
  t.push_back(bench(69, "II.15.4", "0 - x0*x1*cos(x2)", uni({2, 4}, 3), 1000));
  t.push_back(bench(70, "II.15.5", "0 - x0*x1*cos(x2)", uni({2, 4}, 3), 1000));
  t.push_back(bench(71, "I.18.14", "x0*x1*x2*sin(x3)", uni({2, 4}, 4), 4000));
  return t;
}

}  // namespace

const std::vector<BenchmarkDef>& all_benchmarks() {
  static const std::vector<BenchmarkDef> table = build_table();
  return table;
}

const BenchmarkDef& builtin(int id) {
  const auto& table = all_benchmarks();
  if (id < 1 || id > static_cast<int>(table.size()))
    throw DataError("unknown benchmark id F" + std::to_string(id) +
                    " (built-in formulas cover F1-F71)");
  return table[static_cast<std::size_t>(id - 1)];
}

int parse_benchmark_id(const std::string& text) {
  std::string digits = text;
  if (!digits.empty() && (digits[0] == 'F' || digits[0] == 'f'))
    digits.erase(0, 1);
  if (digits.empty()) throw DataError("bad benchmark id: " + text);
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw DataError("bad benchmark id: " + text);
  return std::stoi(digits);
}

}  // namespace tsr
