#include "classbot/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace classbot {

namespace {

void check_sample(const Sample& s) {
  if (s.values.empty()) throw StatsError("empty sample: " + s.label);
  for (double v : s.values)
    if (!std::isfinite(v))
      throw StatsError("non-finite value in sample: " + s.label);
}

// Midranks of the pooled sequence: tied values share the average rank.
std::vector<double> midranks(const std::vector<double>& pooled) {
  size_t n = pooled.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t i, size_t j) { return pooled[i] < pooled[j]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double min_u_from_rank_sum(double rank_sum_a, size_t n_a, size_t n_b) {
  double u_a = rank_sum_a - static_cast<double>(n_a) * (n_a + 1) / 2.0;
  double u_b = static_cast<double>(n_a) * n_b - u_a;
  return std::min(u_a, u_b);
}

// Proportion of the C(N, n_a) group assignments whose min-U is at or below
// the observed value.
double exact_p(const std::vector<double>& ranks, size_t n_a, double observed) {
  size_t n = ranks.size();
  std::vector<size_t> idx(n_a);
  std::iota(idx.begin(), idx.end(), 0);
  size_t n_b = n - n_a;
  long long total = 0, at_or_below = 0;
  const double eps = 1e-9;
  for (;;) {
    double rank_sum = 0;
    for (size_t i : idx) rank_sum += ranks[i];
    ++total;
    if (min_u_from_rank_sum(rank_sum, n_a, n_b) <= observed + eps)
      ++at_or_below;
    // next combination
    size_t k = n_a;
    while (k > 0 && idx[k - 1] == n - n_a + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (size_t j = k; j < n_a; ++j) idx[j] = idx[j - 1] + 1;
  }
  return static_cast<double>(at_or_below) / static_cast<double>(total);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double approx_p(const std::vector<double>& pooled, size_t n_a, size_t n_b,
                double min_u) {
  double n = static_cast<double>(pooled.size());
  double mu = static_cast<double>(n_a) * n_b / 2.0;
  // tie correction over groups of equal pooled values
  std::map<double, long long> tie_counts;
  for (double v : pooled) ++tie_counts[v];
  double tie_sum = 0;
  for (const auto& [_, t] : tie_counts)
    tie_sum += static_cast<double>(t) * t * t - t;
  double var = (static_cast<double>(n_a) * n_b / 12.0) *
               ((n + 1.0) - tie_sum / (n * (n - 1.0)));
  if (var <= 0) return 1.0;
  double z = (min_u + 0.5 - mu) / std::sqrt(var);
  return std::clamp(2.0 * normal_cdf(z), 0.0, 1.0);
}

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::pair<double, double> summarize(const Sample& s) {
  check_sample(s);
  double mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) /
                static_cast<double>(s.values.size());
  std::vector<double> sorted = s.values;
  std::sort(sorted.begin(), sorted.end());
  size_t n = sorted.size();
  double median = n % 2 ? sorted[n / 2]
                        : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  return {mean, median};
}

StatTestResult mann_whitney(const Sample& a, const Sample& b, double alpha) {
  check_sample(a);
  check_sample(b);
  if (!(alpha > 0.0 && alpha < 1.0))
    throw StatsError("alpha must lie in (0, 1)");

  StatTestResult result;
  result.label_a = a.label;
  result.label_b = b.label;
  std::tie(result.mean_a, result.median_a) = summarize(a);
  std::tie(result.mean_b, result.median_b) = summarize(b);
  result.n_a = a.values.size();
  result.n_b = b.values.size();
  result.alpha = alpha;

  std::vector<double> pooled = a.values;
  pooled.insert(pooled.end(), b.values.begin(), b.values.end());
  std::vector<double> ranks = midranks(pooled);
  double rank_sum_a = 0;
  for (size_t i = 0; i < result.n_a; ++i) rank_sum_a += ranks[i];
  result.u_statistic = min_u_from_rank_sum(rank_sum_a, result.n_a, result.n_b);

  if (result.n_a + result.n_b <= 20) {
    result.method = TestMethod::exact;
    result.p_value = exact_p(ranks, result.n_a, result.u_statistic);
  } else {
    result.method = TestMethod::normal_approx;
    result.p_value = approx_p(pooled, result.n_a, result.n_b, result.u_statistic);
  }
  result.significant = result.p_value < alpha;
  return result;
}

std::vector<StatTestResult> compare_metrics(const std::vector<MetricRows>& rows,
                                            double alpha) {
  std::vector<StatTestResult> results;
  for (const MetricRows& row : rows) {
    StatTestResult r = mann_whitney(row.control, row.treatment, alpha);
    r.metric_name = row.metric_name;
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_p_value(double p, bool significant) {
  std::string out;
  if (p < 0.00005) {
    out = "< 0.0001";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", p);
    out = buf;
  }
  if (significant) out += "***";
  return out;
}

std::string format_report_text(const std::vector<StatTestResult>& results) {
  std::vector<std::array<std::string, 5>> rows;
  rows.push_back({"Metric", "Group", "Mean", "Median", "p-value"});
  for (const StatTestResult& r : results) {
    std::string name = r.metric_name + (r.significant ? "***" : "");
    rows.push_back({name, r.label_a, fmt2(r.mean_a), fmt2(r.median_a), "-"});
    rows.push_back({"", r.label_b, fmt2(r.mean_b), fmt2(r.median_b),
                    format_p_value(r.p_value, r.significant)});
  }
  std::array<size_t, 5> width{};
  for (const auto& row : rows)
    for (size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (const auto& row : rows) {
    for (size_t c = 0; c < 5; ++c) {
      std::string cell = row[c];
      bool right = c >= 2;
      if (cell.size() < width[c]) {
        std::string pad(width[c] - cell.size(), ' ');
        cell = right ? pad + cell : cell + pad;
      }
      out += cell;
      if (c + 1 < 5) out += "  ";
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  }
  return out;
}

std::string format_report_csv(const std::vector<StatTestResult>& results) {
  std::string out = "metric,group,mean,median,p_value,significant\n";
  for (const StatTestResult& r : results) {
    out += r.metric_name + "," + r.label_a + "," + fmt2(r.mean_a) + "," +
           fmt2(r.median_a) + ",,\n";
    out += r.metric_name + "," + r.label_b + "," + fmt2(r.mean_b) + "," +
           fmt2(r.median_b) + "," + format_p_value(r.p_value, false) + "," +
           (r.significant ? "true" : "false") + "\n";
  }
  return out;
}

IngestResult ingest_csv(const std::string& csv_text,
                        const std::vector<std::string>& metric_columns,
                        const std::string& group_column,
                        const std::string& control_label) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw StatsError("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream fs(s);
    while (std::getline(fs, field, ',')) fields.push_back(field);
    if (!s.empty() && s.back() == ',') fields.push_back("");
    return fields;
  };

  std::vector<std::string> header = split(line);
  auto column_index = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw StatsError("missing CSV column: " + name);
    return static_cast<size_t>(it - header.begin());
  };

  size_t group_idx = column_index(group_column);
  std::vector<size_t> metric_idx;
  for (const auto& m : metric_columns) metric_idx.push_back(column_index(m));

  IngestResult result;
  // group label -> metric -> values
  std::map<std::string, std::map<std::string, std::vector<double>>> data;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line);
    if (fields.size() != header.size()) {
      ++result.skipped_rows;
      continue;
    }
    const std::string& group = fields[group_idx];
    data[group];  // a well-formed row defines its group even if no cell parses
    for (size_t m = 0; m < metric_columns.size(); ++m) {
      const std::string& cell = fields[metric_idx[m]];
      try {
        size_t pos = 0;
        double v = std::stod(cell, &pos);
        if (pos != cell.size() || !std::isfinite(v)) throw std::invalid_argument("");
        data[group][metric_columns[m]].push_back(v);
      } catch (...) {
        ++result.skipped_cells;
      }
    }
  }

  if (data.size() != 2)
    throw StatsError("expected exactly two group labels, found " +
                     std::to_string(data.size()));
  auto it = data.begin();
  std::string first = it->first;
  std::string second = std::next(it)->first;
  if (!control_label.empty()) {
    if (second == control_label) std::swap(first, second);
    else if (first != control_label)
      throw StatsError("control group \"" + control_label + "\" not in CSV");
  }

  for (const auto& metric : metric_columns) {
    MetricRows row;
    row.metric_name = metric;
    row.control = Sample{first, data[first][metric]};
    row.treatment = Sample{second, data[second][metric]};
    if (row.control.values.empty() || row.treatment.values.empty())
      throw StatsError("no data for metric " + metric);
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace classbot
