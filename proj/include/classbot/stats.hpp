#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace classbot {

struct Sample {
  std::string label;
  std::vector<double> values;  // finite, length >= 1
};

enum class TestMethod { exact, normal_approx };

struct StatTestResult {
  std::string metric_name;
  std::string label_a;
  std::string label_b;
  double mean_a = 0, median_a = 0;
  double mean_b = 0, median_b = 0;
  size_t n_a = 0, n_b = 0;
  double u_statistic = 0;  // min(U_a, U_b), midrank ties
  double p_value = 1.0;
  TestMethod method = TestMethod::exact;
  double alpha = 0.05;
  bool significant = false;  // p_value < alpha, set once at construction
};

class StatsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arithmetic mean and median (average of the two middles for even n).
std::pair<double, double> summarize(const Sample& s);

// Two-sided Mann-Whitney-Wilcoxon with midrank ties. Exact enumeration of
// all C(n_a+n_b, n_a) group assignments when n_a + n_b <= 20, otherwise a
// normal approximation with tie-corrected variance and 0.5 continuity
// correction. Exact p = fraction of assignments with min-U <= observed.
StatTestResult mann_whitney(const Sample& a, const Sample& b,
                            double alpha = 0.05);

struct MetricRows {
  std::string metric_name;
  Sample control;
  Sample treatment;
};

std::vector<StatTestResult> compare_metrics(const std::vector<MetricRows>& rows,
                                            double alpha = 0.05);

// One block per metric: control row with p "-", treatment row with p.
// "***" marks the metric name and p when p < alpha. Means/medians use two
// decimals, p four decimals, "< 0.0001" below 0.00005.
std::string format_report_text(const std::vector<StatTestResult>& results);
std::string format_report_csv(const std::vector<StatTestResult>& results);

// Formatting helper shared by both emitters.
std::string format_p_value(double p, bool significant);

struct IngestResult {
  std::vector<MetricRows> rows;
  int skipped_cells = 0;
  int skipped_rows = 0;
};

// Splits the named metric columns by the group column. Exactly two distinct
// group labels are required; the control group is the lexicographically
// smaller label unless a control label is given.
IngestResult ingest_csv(const std::string& csv_text,
                        const std::vector<std::string>& metric_columns,
                        const std::string& group_column,
                        const std::string& control_label = {});

}  // namespace classbot
