#include "fsw/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsw/numeric.hpp"
#include "fsw/parallel.hpp"
#include "fsw/quantile.hpp"
#include "fsw/rng.hpp"

namespace fsw {

std::vector<double> TransportPlan::row_sums() const {
  std::vector<double> sums(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    CompensatedSum s;
    for (std::size_t j = 0; j < cols_; ++j) {
      s.add(at(i, j));
    }
    sums[i] = s.value();
  }
  return sums;
}

std::vector<double> TransportPlan::col_sums() const {
  std::vector<double> sums(cols_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j) {
    CompensatedSum s;
    for (std::size_t i = 0; i < rows_; ++i) {
      s.add(at(i, j));
    }
    sums[j] = s.value();
  }
  return sums;
}

namespace {

double euclidean(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const double diff = x[a] - y[a];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

// Transportation simplex over the complete bipartite graph. The basis is a
// spanning tree over m source and n sink nodes with exactly m+n-1 arcs.
// Entering variable per Bland's rule (first negative reduced cost in
// row-major order); leaving variable is the lexicographically first arc
// attaining the minimum ratio. Bland's rule guarantees finite termination
// under degeneracy.
class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                   std::vector<double> cost)
      : m_(supply.size()),
        n_(demand.size()),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        cost_(std::move(cost)) {
    double max_cost = 0.0;
    for (double c : cost_) {
      max_cost = std::max(max_cost, std::abs(c));
    }
    tolerance_ = 1e-13 * (1.0 + max_cost);
    initialize_northwest();
  }

  void solve() {
    const std::size_t max_pivots = 200000;
    for (std::size_t pivot = 0; pivot < max_pivots; ++pivot) {
      compute_duals();
      const auto entering = find_entering();
      if (!entering.has_value()) {
        return;
      }
      pivot_on(*entering);
    }
    throw std::runtime_error("wasserstein_exact: simplex failed to converge");
  }

  const std::vector<std::size_t>& arc_sources() const { return arc_src_; }
  const std::vector<std::size_t>& arc_sinks() const { return arc_dst_; }
  const std::vector<double>& arc_flows() const { return arc_flow_; }

  /// Most negative reduced cost over nonbasic cells at the current duals.
  double dual_violation() {
    compute_duals();
    double worst = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        worst = std::min(worst, reduced_cost(i, j));
      }
    }
    return worst;
  }

 private:
  double cost_at(std::size_t i, std::size_t j) const { return cost_[i * n_ + j]; }
  double reduced_cost(std::size_t i, std::size_t j) const {
    return cost_at(i, j) - dual_u_[i] - dual_v_[j];
  }

  void initialize_northwest() {
    std::vector<double> a_rem = supply_;
    std::vector<double> b_rem = demand_;
    std::size_t i = 0;
    std::size_t j = 0;
    while (true) {
      const double t = std::min(a_rem[i], b_rem[j]);
      arc_src_.push_back(i);
      arc_dst_.push_back(j);
      arc_flow_.push_back(std::max(t, 0.0));
      a_rem[i] -= t;
      b_rem[j] -= t;
      if (i == m_ - 1 && j == n_ - 1) {
        break;
      }
      if (j == n_ - 1 || (i < m_ - 1 && a_rem[i] <= b_rem[j])) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void build_adjacency(std::vector<std::vector<std::size_t>>& adj) const {
    adj.assign(m_ + n_, {});
    for (std::size_t arc = 0; arc < arc_src_.size(); ++arc) {
      adj[arc_src_[arc]].push_back(arc);
      adj[m_ + arc_dst_[arc]].push_back(arc);
    }
  }

  void compute_duals() {
    dual_u_.assign(m_, 0.0);
    dual_v_.assign(n_, 0.0);
    std::vector<std::vector<std::size_t>> adj;
    build_adjacency(adj);
    std::vector<char> visited(m_ + n_, 0);
    std::deque<std::size_t> queue{0};
    visited[0] = 1;
    while (!queue.empty()) {
      const std::size_t node = queue.front();
      queue.pop_front();
      for (std::size_t arc : adj[node]) {
        const std::size_t src = arc_src_[arc];
        const std::size_t dst = m_ + arc_dst_[arc];
        const std::size_t next = (node == src) ? dst : src;
        if (visited[next]) {
          continue;
        }
        visited[next] = 1;
        if (next == dst) {
          dual_v_[arc_dst_[arc]] = cost_at(src, arc_dst_[arc]) - dual_u_[src];
        } else {
          dual_u_[src] = cost_at(src, arc_dst_[arc]) - dual_v_[arc_dst_[arc]];
        }
        queue.push_back(next);
      }
    }
  }

  std::optional<std::pair<std::size_t, std::size_t>> find_entering() const {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (reduced_cost(i, j) < -tolerance_) {
          return std::pair{i, j};
        }
      }
    }
    return std::nullopt;
  }

  // Tree path from source node i to sink node m_+j; returns arc indices.
  std::vector<std::size_t> tree_path(std::size_t i, std::size_t j) const {
    std::vector<std::vector<std::size_t>> adj;
    build_adjacency(adj);
    const std::size_t target = m_ + j;
    std::vector<std::ptrdiff_t> parent_arc(m_ + n_, -1);
    std::vector<std::ptrdiff_t> parent_node(m_ + n_, -1);
    std::vector<char> visited(m_ + n_, 0);
    std::deque<std::size_t> queue{i};
    visited[i] = 1;
    while (!queue.empty()) {
      const std::size_t node = queue.front();
      queue.pop_front();
      if (node == target) {
        break;
      }
      for (std::size_t arc : adj[node]) {
        const std::size_t src = arc_src_[arc];
        const std::size_t dst = m_ + arc_dst_[arc];
        const std::size_t next = (node == src) ? dst : src;
        if (!visited[next]) {
          visited[next] = 1;
          parent_arc[next] = static_cast<std::ptrdiff_t>(arc);
          parent_node[next] = static_cast<std::ptrdiff_t>(node);
          queue.push_back(next);
        }
      }
    }
    if (!visited[target]) {
      throw std::runtime_error("wasserstein_exact: basis is not a spanning tree");
    }
    std::vector<std::size_t> path;
    for (std::size_t node = target; node != i;
         node = static_cast<std::size_t>(parent_node[node])) {
      path.push_back(static_cast<std::size_t>(parent_arc[node]));
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  void pivot_on(std::pair<std::size_t, std::size_t> entering) {
    const auto [i, j] = entering;
    const auto path = tree_path(i, j);
    // Around the cycle, the entering arc gains flow; path arcs starting from
    // the source side alternate minus, plus, minus, ...
    double theta = kInfinity;
    std::ptrdiff_t leaving = -1;
    for (std::size_t t = 0; t < path.size(); t += 2) {
      const std::size_t arc = path[t];
      const double flow = arc_flow_[arc];
      const bool better =
          flow < theta ||
          (flow == theta && leaving >= 0 &&
           std::pair{arc_src_[arc], arc_dst_[arc]} <
               std::pair{arc_src_[static_cast<std::size_t>(leaving)],
                         arc_dst_[static_cast<std::size_t>(leaving)]});
      if (better) {
        theta = flow;
        leaving = static_cast<std::ptrdiff_t>(arc);
      }
    }
    if (leaving < 0) {
      throw std::runtime_error("wasserstein_exact: unbounded pivot");
    }
    for (std::size_t t = 0; t < path.size(); ++t) {
      const std::size_t arc = path[t];
      arc_flow_[arc] += (t % 2 == 0) ? -theta : theta;
      if (arc_flow_[arc] < 0.0) {
        arc_flow_[arc] = 0.0;
      }
    }
    const auto leaving_index = static_cast<std::size_t>(leaving);
    arc_src_[leaving_index] = i;
    arc_dst_[leaving_index] = j;
    arc_flow_[leaving_index] = theta;
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<double> supply_;
  std::vector<double> demand_;
  std::vector<double> cost_;
  std::vector<std::size_t> arc_src_;
  std::vector<std::size_t> arc_dst_;
  std::vector<double> arc_flow_;
  std::vector<double> dual_u_;
  std::vector<double> dual_v_;
  double tolerance_ = 1e-13;
};

}  // namespace

ExactDistance wasserstein_exact(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                double p) {
  if (mu.dim() != nu.dim()) {
    throw std::invalid_argument("wasserstein_exact: dimension mismatch");
  }
  if (!(p >= 1.0) || p == kInfinity) {
    throw std::invalid_argument("wasserstein_exact: p must lie in [1, inf)");
  }
  if (mu.size() > kExactSolverMaxSupport || nu.size() > kExactSolverMaxSupport) {
    throw SupportSizeError(
        "wasserstein_exact: support larger than " + std::to_string(kExactSolverMaxSupport) +
        " points; use sliced estimation (sw) instead");
  }

  // Degenerate columns destabilize the basis; solve on the positive part.
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<double> supply;
  std::vector<double> demand;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.weight(i) > 0.0) {
      rows.push_back(i);
      supply.push_back(mu.weight(i));
    }
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (nu.weight(j) > 0.0) {
      cols.push_back(j);
      demand.push_back(nu.weight(j));
    }
  }

  // Rebalance rounding drift onto the largest demand so supply and demand
  // sums match exactly.
  CompensatedSum sa;
  for (double w : supply) {
    sa.add(w);
  }
  CompensatedSum sb;
  for (double w : demand) {
    sb.add(w);
  }
  const auto largest = static_cast<std::size_t>(
      std::max_element(demand.begin(), demand.end()) - demand.begin());
  demand[largest] += sa.value() - sb.value();

  std::vector<double> cost(supply.size() * demand.size());
  for (std::size_t r = 0; r < supply.size(); ++r) {
    for (std::size_t c = 0; c < demand.size(); ++c) {
      const double dist = euclidean(mu.point(rows[r]), nu.point(cols[c]));
      double value = 0.0;
      if (p == 1.0) {
        value = dist;
      } else if (p == 2.0) {
        value = dist * dist;
      } else {
        value = std::pow(dist, p);
      }
      cost[r * demand.size() + c] = value;
    }
  }

  TransportSimplex simplex(std::move(supply), std::move(demand), std::move(cost));
  simplex.solve();

  ExactDistance result;
  result.p = p;
  result.plan = TransportPlan(mu.size(), nu.size());
  CompensatedSum objective;
  const auto& srcs = simplex.arc_sources();
  const auto& dsts = simplex.arc_sinks();
  const auto& flows = simplex.arc_flows();
  for (std::size_t arc = 0; arc < flows.size(); ++arc) {
    const double flow = std::max(flows[arc], 0.0);
    if (flow == 0.0) {
      continue;
    }
    const std::size_t i = rows[srcs[arc]];
    const std::size_t j = cols[dsts[arc]];
    result.plan.at(i, j) += flow;
    const double dist = euclidean(mu.point(i), nu.point(j));
    objective.add(flow * (p == 1.0 ? dist : (p == 2.0 ? dist * dist : std::pow(dist, p))));
  }
  const double total = std::max(objective.value(), 0.0);
  result.cost = (p == 1.0) ? total : (p == 2.0 ? std::sqrt(total) : std::pow(total, 1.0 / p));
  result.max_dual_violation = simplex.dual_violation();
  return result;
}

SlicedEstimate sliced_wasserstein_mc(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                     std::int64_t directions, std::uint64_t seed) {
  if (mu.dim() != nu.dim()) {
    throw std::invalid_argument("sliced_wasserstein_mc: dimension mismatch");
  }
  if (directions < 2) {
    throw std::invalid_argument("sliced_wasserstein_mc: need at least 2 directions");
  }
  const auto count = static_cast<std::size_t>(directions);

  struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
  };
  const std::size_t chunk = 4096;
  const std::size_t chunks = (count + chunk - 1) / chunk;
  std::vector<Moments> partial(chunks);

  parallel_for(chunks, [&](std::size_t begin, std::size_t end) {
    std::vector<double> direction(mu.dim());
    for (std::size_t c = begin; c < end; ++c) {
      Moments& mom = partial[c];
      const std::size_t lo = c * chunk;
      const std::size_t hi = std::min(count, lo + chunk);
      for (std::size_t l = lo; l < hi; ++l) {
        rng::Stream stream(seed, rng::Space::slicing_direction, l);
        rng::sample_unit_vector(stream, direction);
        const double w = quantile_lp_distance(quantile(project(mu, direction)),
                                              quantile(project(nu, direction)), 2.0);
        const double w2 = w * w;
        mom.count += 1.0;
        const double delta = w2 - mom.mean;
        mom.mean += delta / mom.count;
        mom.m2 += delta * (w2 - mom.mean);
      }
    }
  });

  // Merge chunk moments in fixed order so results are scheduling-independent.
  Moments total;
  for (const Moments& mom : partial) {
    if (mom.count == 0.0) {
      continue;
    }
    if (total.count == 0.0) {
      total = mom;
      continue;
    }
    const double combined = total.count + mom.count;
    const double delta = mom.mean - total.mean;
    total.m2 += mom.m2 + delta * delta * total.count * mom.count / combined;
    total.mean += delta * mom.count / combined;
    total.count = combined;
  }

  SlicedEstimate out;
  out.directions = directions;
  out.mean_sq = total.mean;
  out.estimate = std::sqrt(std::max(total.mean, 0.0));
  const double variance = total.m2 / (total.count - 1.0);
  out.std_error = std::sqrt(std::max(variance, 0.0) / total.count);
  return out;
}

double sliced_wasserstein_collinear(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu) {
  if (mu.dim() != nu.dim()) {
    throw std::invalid_argument("sliced_wasserstein_collinear: dimension mismatch");
  }
  const std::size_t d = mu.dim();

  // The common direction is taken from the farthest positive-weight point.
  double best_norm = 0.0;
  std::vector<double> axis(d, 0.0);
  auto consider = [&](const ProbabilityMeasure& measure) {
    for (std::size_t i = 0; i < measure.size(); ++i) {
      if (measure.weight(i) <= 0.0) {
        continue;
      }
      auto x = measure.point(i);
      double norm_sq = 0.0;
      for (double v : x) {
        norm_sq += v * v;
      }
      const double norm = std::sqrt(norm_sq);
      if (norm > best_norm) {
        best_norm = norm;
        std::copy(x.begin(), x.end(), axis.begin());
      }
    }
  };
  consider(mu);
  consider(nu);
  if (best_norm == 0.0) {
    return 0.0;  // both measures sit at the origin
  }
  for (double& v : axis) {
    v /= best_norm;
  }

  auto collinear_values = [&](const ProbabilityMeasure& measure) {
    Matrix row(1, measure.size());
    for (std::size_t i = 0; i < measure.size(); ++i) {
      auto x = measure.point(i);
      double dot = 0.0;
      double norm_sq = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        dot += axis[a] * x[a];
        norm_sq += x[a] * x[a];
      }
      if (measure.weight(i) > 0.0) {
        double residual_sq = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
          const double r = x[a] - dot * axis[a];
          residual_sq += r * r;
        }
        const double scale = std::max(1.0, std::sqrt(norm_sq));
        if (std::sqrt(residual_sq) > 1e-10 * scale) {
          throw std::invalid_argument(
              "sliced_wasserstein_collinear: support point off the common line");
        }
      }
      row(0, i) = dot;
    }
    return ProbabilityMeasure(std::move(row), measure.weights());
  };

  const double w = quantile_lp_distance(quantile(collinear_values(mu)),
                                        quantile(collinear_values(nu)), 2.0);
  return w / std::sqrt(static_cast<double>(d));
}

std::pair<ProbabilityMeasure, ProbabilityMeasure> pswe_counterexample_pair(std::size_t d,
                                                                           std::size_t n1,
                                                                           std::size_t n2) {
  if (d < 1 || n1 < 1 || n2 < 1) {
    throw std::invalid_argument("pswe_counterexample_pair: need d, n1, n2 >= 1");
  }
  if (n1 == n2) {
    throw std::invalid_argument("pswe_counterexample_pair: sizes must differ");
  }
  auto build = [d](std::size_t n) {
    Matrix points(d, n);
    for (std::size_t i = 1; i <= n; ++i) {
      const double value = static_cast<double>(i) / static_cast<double>(n + 1);
      for (std::size_t a = 0; a < d; ++a) {
        points(a, i - 1) = value;
      }
    }
    return from_multiset(std::move(points));
  };
  return {build(n1), build(n2)};
}

nlohmann::json plan_to_json(const ExactDistance& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < result.plan.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < result.plan.cols(); ++j) {
      row.push_back(result.plan.at(i, j));
    }
    rows.push_back(std::move(row));
  }
  return {{"cost", result.cost}, {"p", result.p}, {"plan", std::move(rows)}};
}

}  // namespace fsw
