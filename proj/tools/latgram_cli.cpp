// Command-line front end: Gramian entries, decay curves, metric-bound
// families over target subsets, cross-module consistency checks, and
// driver placement reports. All output is CSV with a one-line header;
// numbers carry 17 significant digits so runs are bit-reproducible.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latgram/latgram.hpp"

namespace {

using namespace latgram;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto dots = tok.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(tok.substr(0, dots));
      const int hi = std::stoi(tok.substr(dots + 2));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else if (!tok.empty()) {
      out.push_back(std::stoi(tok));
    }
  }
  if (out.empty()) throw CLI::ValidationError("expected a non-empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  if (out.empty()) throw CLI::ValidationError("expected a non-empty number list");
  return out;
}

NodeIndex parse_node(const std::string& text) {
  NodeIndex idx;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) idx.push_back(std::stoi(tok));
  }
  if (idx.empty()) throw CLI::ValidationError("expected a node index like `0` or `0,1`");
  return idx;
}

std::string node_label(const NodeIndex& n) {
  std::string s;
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (k) s += '|';
    s += std::to_string(n[k]);
  }
  return s;
}

/// Output sink: --out path or stdout.
struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw std::runtime_error("cannot write output file " + path);
      os = &file;
    }
  }
  template <class T>
  Sink& operator<<(const T& v) {
    *os << v;
    return *this;
  }
};

struct CommonOpts {
  double p = -3.0;
  double s = 1.0;
  std::string spec_path;
  std::string out_path;
  int quad_points = 0;
  int radius = 0;

  QuadratureConfig quad() const {
    return {quad_points, QuadratureConfig::Scheme::GaussLegendre};
  }
  bool has_spec_file() const { return !spec_path.empty(); }
  LatticeSpec lattice() const {
    return has_spec_file() ? load_lattice_spec(spec_path) : nn1d_spec(p, s);
  }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_radius = true) {
  cmd->add_option("--p", o.p, "NN1D self-loop weight (negative)");
  cmd->add_option("--s", o.s, "NN1D coupling weight (positive)");
  cmd->add_option("--spec", o.spec_path, "lattice spec JSON file (overrides --p/--s)");
  cmd->add_option("--out", o.out_path, "output CSV path (default stdout)");
  cmd->add_option("--quad-points", o.quad_points, "quadrature points per dimension");
  if (with_radius) cmd->add_option("--radius", o.radius, "finite-window radius for oracle runs");
}

// ----------------------------------------------------------------------
// entry
// ----------------------------------------------------------------------

int cmd_entry(const CommonOpts& o, const std::string& diag_range, const std::string& i_str,
              const std::string& j_str, const std::string& method, bool steady, double tf) {
  Sink out(o.out_path);
  out << "i,j,value,method\n";

  const bool nn = !o.has_spec_file();
  std::optional<nn1d::Params> par;
  if (nn) par = nn1d::make_params(o.p, o.s);
  const LatticeSpec spec = o.lattice();

  auto emit = [&](const std::string& i, const std::string& j, double v, const std::string& m) {
    out << i << "," << j << "," << fmt(v) << "," << m << "\n";
  };

  if (!diag_range.empty()) {
    if (!par) throw std::runtime_error("--diag needs the NN1D parameters --p/--s");
    const auto range = parse_int_list(diag_range);
    const int m_max = *std::max_element(range.begin(), range.end());
    std::string m = method.empty() ? "quadrature" : method;
    if (m == "quadrature") {
      const auto diag = nn1d::diagonal_quadrature(*par, m_max, o.quad());
      for (int v : range) emit(std::to_string(v), std::to_string(v), diag[v], m);
    } else if (m == "recursion") {
      const auto run = nn1d::diagonal_recursion(*par, std::max(1, m_max));
      for (int v : range) {
        if (v > run.last_index())
          throw std::runtime_error("recursion lost accuracy at index " +
                                   std::to_string(run.last_index()) + "; requested " +
                                   std::to_string(v));
        emit(std::to_string(v), std::to_string(v), run.values[v], m);
      }
    } else if (m == "spectral") {
      spectral::GramianEvaluator eval(spec, o.quad());
      for (int v : range)
        emit(std::to_string(v), std::to_string(v),
             eval.entry_steady({node1d(0)}, node1d(v), node1d(v)), m);
    } else if (m == "oracle") {
      const int radius = o.radius > 0 ? o.radius : 100;
      const auto sys = finite::truncate(spec, radius, {node1d(0)});
      const Matrix w = finite::lyapunov_steady(sys);
      const int c = sys.index_of(node1d(0));
      for (int v : range) emit(std::to_string(v), std::to_string(v), w(c + v, c + v), m);
    } else {
      throw std::runtime_error("unknown method `" + m +
                               "` (expected quadrature|recursion|spectral|oracle)");
    }
    return 0;
  }

  if (i_str.empty() || j_str.empty())
    throw std::runtime_error("entry: give either --diag or both --i and --j");
  const NodeIndex i = parse_node(i_str);
  const NodeIndex j = parse_node(j_str);

  std::string m = method.empty() ? (nn && steady ? "quadrature" : "spectral") : method;
  double value = 0.0;
  if (!steady) {
    if (m != "spectral") throw std::runtime_error("time-varying entries use --method spectral");
    value = spectral::gramian_entry_t(spec, {NodeIndex(spec.d, 0)}, i, j, tf, o.quad());
  } else if (m == "quadrature") {
    if (!par) throw std::runtime_error("method quadrature needs the NN1D parameters");
    value = nn1d::entry_quadrature(*par, i.at(0), j.at(0), o.quad());
  } else if (m == "spectral") {
    value = spectral::gramian_entry_ss(spec, {NodeIndex(spec.d, 0)}, i, j, o.quad());
  } else if (m == "oracle") {
    const int radius = o.radius > 0 ? o.radius : (spec.d == 1 ? 100 : 8);
    const auto sys = finite::truncate(spec, radius, {NodeIndex(spec.d, 0)});
    const Matrix w = finite::lyapunov_steady(sys);
    value = w(sys.index_of(i), sys.index_of(j));
  } else {
    throw std::runtime_error("unknown method `" + m + "`");
  }
  emit(node_label(i), node_label(j), value, steady ? m : m + "@t=" + fmt(tf));
  return 0;
}

// ----------------------------------------------------------------------
// fig2: diagonal decay curves
// ----------------------------------------------------------------------

int cmd_fig2(const CommonOpts& o, const std::string& alphas_str, int max_index) {
  const auto alphas = parse_double_list(alphas_str);
  Sink out(o.out_path);
  out << "alpha,index,G_diag,asymptote\n";
  for (double a : alphas) {
    if (!(a > 1.0)) throw std::runtime_error("fig2: alpha values must exceed 1");
    const auto par = nn1d::make_params(-std::sqrt(2.0 * (a + 1.0)), 1.0);
    const int calib = std::min(10, max_index);
    const auto diag = nn1d::diagonal_quadrature(par, max_index, o.quad());
    for (int m = 0; m <= max_index; ++m) {
      const double asym = nn1d::asymptotic_diagonal(par, m, calib);
      out << fmt(a) << "," << m << "," << fmt(diag[m]) << "," << fmt(asym) << "\n";
    }
  }
  return 0;
}

// ----------------------------------------------------------------------
// fig3: metric lower bounds over all small target subsets
// ----------------------------------------------------------------------

int cmd_fig3(const CommonOpts& o, int max_node, int max_card) {
  const auto par = nn1d::make_params(o.p, o.s);
  const int n_nodes = max_node + 1;

  // shared entry table G_{i,j}, i,j in [0, max_node]
  std::vector<std::vector<double>> g(n_nodes, std::vector<double>(n_nodes));
  for (int i = 0; i < n_nodes; ++i)
    for (int j = i; j < n_nodes; ++j)
      g[i][j] = g[j][i] = nn1d::entry_quadrature(par, i, j, o.quad());
  const double g00 = nn1d::diagonal_seeds(par).g00;

  Sink out(o.out_path);
  out << "metric,n_t,target_set,ell,value,bound\n";

  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  auto gen = [&](auto&& self, int start, int want) -> void {
    if (want == 0) {
      subsets.push_back(cur);
      return;
    }
    for (int v = start; v < n_nodes; ++v) {
      cur.push_back(v);
      self(self, v + 1, want - 1);
      cur.pop_back();
    }
  };
  for (int card = 1; card <= max_card; ++card) gen(gen, 0, card);

  for (const char* metric : {"trace_inverse", "neg_log_det"}) {
    for (const auto& t : subsets) {
      const std::size_t nt = t.size();
      Matrix w(nt, nt);
      std::vector<NodeIndex> labels;
      for (std::size_t r = 0; r < nt; ++r) {
        labels.push_back(node1d(t[r]));
        for (std::size_t c = 0; c < nt; ++c) w(r, c) = g[t[r]][t[c]];
      }
      const auto gram = make_output_gramian(std::move(w), std::move(labels));
      const int ell = *std::max_element(t.begin(), t.end());
      double value, bound;
      if (std::string(metric) == "trace_inverse") {
        value = metrics::trace_inverse(gram);
        bound = metrics::bound_trace_inverse(ell, par).value;
      } else {
        value = metrics::neg_log_det_scaled(gram, g00);
        bound = metrics::bound_neg_log_det(ell, par, nt).value;
      }
      std::string set_label;
      for (std::size_t k = 0; k < t.size(); ++k)
        set_label += (k ? "|" : "") + std::to_string(t[k]);
      out << metric << "," << nt << "," << set_label << "," << ell << "," << fmt(value) << ","
          << fmt(bound) << "\n";
    }
  }
  return 0;
}

// ----------------------------------------------------------------------
// oracle-check
// ----------------------------------------------------------------------

int cmd_oracle_check(const CommonOpts& o, bool skip_2d) {
  consistency::CheckOptions opts;
  opts.p = o.p;
  opts.s = o.s;
  opts.quad_points = o.quad_points;
  if (o.radius > 0) opts.chain_radius = o.radius;
  opts.include_2d = !skip_2d;

  const auto results = consistency::run_consistency_checks(opts);
  Sink out(o.out_path);
  out << "check,max_error,tolerance,pass\n";
  bool all_pass = true;
  for (const auto& r : results) {
    out << r.name << "," << fmt(r.max_error) << "," << fmt(r.tolerance) << ","
        << (r.pass ? 1 : 0) << "\n";
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 1;
}

// ----------------------------------------------------------------------
// placement
// ----------------------------------------------------------------------

int cmd_placement(const CommonOpts& o, const std::string& targets_str,
                  const std::string& candidates_str, const std::string& metric_name) {
  placement::PlacementProblem prob;
  prob.params = nn1d::make_params(o.p, o.s);
  prob.targets = parse_int_list(targets_str);
  prob.candidates = parse_int_list(candidates_str);
  prob.quad = o.quad();
  if (metric_name == "trace_inverse")
    prob.metric = placement::Metric::TraceInverse;
  else if (metric_name == "neg_log_det")
    prob.metric = placement::Metric::NegLogDetScaled;
  else
    throw std::runtime_error("unknown metric `" + metric_name +
                             "` (expected trace_inverse|neg_log_det)");

  const auto report = placement::rank_candidates(prob);
  Sink out(o.out_path);
  out << "rank,candidate,metric_value,ell,bound,controllable\n";
  for (std::size_t r = 0; r < report.ranking.size(); ++r) {
    const auto& row = report.ranking[r];
    out << (r + 1) << "," << row.candidate << "," << fmt(row.metric_value) << "," << row.ell
        << "," << fmt(row.bound) << "," << (row.controllable ? 1 : 0) << "\n";
  }
  out << "# exact_winner=" << report.exact_winner
      << " heuristic_winner=" << report.heuristic_winner
      << " spearman=" << fmt(report.spearman) << "\n";
  return 0;
}

// ----------------------------------------------------------------------
// metrics
// ----------------------------------------------------------------------

int cmd_metrics(const CommonOpts& o, const std::string& targets_str, int driver,
                const std::string& b_str) {
  const auto par = nn1d::make_params(o.p, o.s);
  const auto targets = parse_int_list(targets_str);
  const std::size_t nt = targets.size();

  std::vector<double> b(nt, 1.0);
  if (!b_str.empty()) {
    b = parse_double_list(b_str);
    if (b.size() != nt) throw std::runtime_error("--b must match the number of targets");
  }

  Matrix w(nt, nt);
  std::vector<NodeIndex> labels;
  for (std::size_t r = 0; r < nt; ++r) {
    labels.push_back(node1d(targets[r]));
    for (std::size_t c = r; c < nt; ++c) {
      const double v =
          nn1d::entry_quadrature(par, targets[r] - driver, targets[c] - driver, o.quad());
      w(r, c) = v;
      w(c, r) = v;
    }
  }
  const auto gram = make_output_gramian(std::move(w), std::move(labels));
  const double g00 = nn1d::diagonal_seeds(par).g00;
  int ell = 0;
  for (int t : targets) ell = std::max(ell, std::abs(t - driver));

  const auto report = metrics::compute_energy_report(gram, b, g00, &par, ell);
  const auto ev = metrics::eigen_symmetric(gram.w);
  const double condition = metrics::condition_number(gram);
  if (condition > 1e14)
    std::cerr << "warning: output Gramian condition number " << fmt(condition)
              << " exceeds 1e14; inverse-based metrics may not be numerically reliable\n";

  Sink out(o.out_path);
  out << "quantity,value\n";
  out << "j_star," << fmt(report.j_star) << "\n";
  out << "trace_inverse," << fmt(report.trace_inverse) << "\n";
  out << "neg_log_det_scaled," << fmt(report.neg_log_det_scaled) << "\n";
  out << "ellipsoid_volume," << fmt(report.ellipsoid_volume) << "\n";
  out << "gerschgorin_upper," << fmt(report.gerschgorin_upper) << "\n";
  out << "gerschgorin_lattice_bound," << fmt(metrics::gerschgorin_lattice_bound(nt, g00)) << "\n";
  out << "bound_trace_inverse," << fmt(report.interlacing_lower_bounds[0]) << "\n";
  out << "bound_neg_log_det," << fmt(report.interlacing_lower_bounds[1]) << "\n";
  out << "ell," << ell << "\n";
  out << "lambda_min," << fmt(ev.front()) << "\n";
  out << "lambda_max," << fmt(ev.back()) << "\n";
  out << "condition," << fmt(condition) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"controllability Gramians of infinite lattice systems"};
  app.require_subcommand(1);

  CommonOpts entry_opts, fig2_opts, fig3_opts, check_opts, place_opts, metric_opts;

  auto* entry = app.add_subcommand("entry", "evaluate Gramian entries");
  add_common(entry, entry_opts);
  std::string diag_range, i_str, j_str, method;
  bool tf_given = false;
  double tf = 0.0;
  entry->add_option("--diag", diag_range, "diagonal index range, e.g. 0..5");
  entry->add_option("--i", i_str, "row node index, e.g. 0 or 0,1");
  entry->add_option("--j", j_str, "column node index");
  entry->add_option("--method", method, "quadrature|recursion|spectral|oracle");
  entry->add_flag("--steady", "steady-state entries (default)");
  entry->add_option("--tf", tf, "finite horizon t for time-varying entries")
      ->each([&](const std::string&) { tf_given = true; });

  auto* fig2 = app.add_subcommand("fig2", "diagonal decay vs the asymptotic rate (CSV)");
  add_common(fig2, fig2_opts, false);
  std::string alphas = "1.5,3.5";
  int max_index = 20;
  fig2->add_option("--alpha", alphas, "comma-separated alpha values (> 1)");
  fig2->add_option("--max-index", max_index, "largest diagonal index");

  auto* fig3 = app.add_subcommand("fig3", "metric lower bounds over target subsets (CSV)");
  add_common(fig3, fig3_opts, false);
  int max_node = 7, max_card = 3;
  fig3->add_option("--max-node", max_node, "largest target node index");
  fig3->add_option("--max-card", max_card, "largest subset cardinality");

  auto* check = app.add_subcommand("oracle-check", "cross-module consistency checks");
  add_common(check, check_opts);
  bool skip_2d = false;
  check->add_flag("--skip-2d", skip_2d, "skip the two-dimensional lattice check");

  auto* place = app.add_subcommand("placement", "rank candidate drivers for a target set");
  add_common(place, place_opts, false);
  std::string p_targets, p_candidates, p_metric = "trace_inverse";
  place->add_option("--targets", p_targets, "target indices, e.g. 0,7")->required();
  place->add_option("--candidates", p_candidates, "candidate indices, e.g. 0..7")->required();
  place->add_option("--metric", p_metric, "trace_inverse|neg_log_det");

  auto* metric = app.add_subcommand("metrics", "energy metrics of one target set");
  add_common(metric, metric_opts, false);
  std::string m_targets, m_b;
  int m_driver = 0;
  metric->add_option("--targets", m_targets, "target indices")->required();
  metric->add_option("--driver", m_driver, "driver node index");
  metric->add_option("--b", m_b, "transfer vector b (default all ones)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (entry->parsed())
      return cmd_entry(entry_opts, diag_range, i_str, j_str, method, !tf_given, tf);
    if (fig2->parsed()) return cmd_fig2(fig2_opts, alphas, max_index);
    if (fig3->parsed()) return cmd_fig3(fig3_opts, max_node, max_card);
    if (check->parsed()) return cmd_oracle_check(check_opts, skip_2d);
    if (place->parsed()) return cmd_placement(place_opts, p_targets, p_candidates, p_metric);
    if (metric->parsed()) return cmd_metrics(metric_opts, m_targets, m_driver, m_b);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
