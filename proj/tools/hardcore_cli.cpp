// command-line front end: every library entry point behind one binary.
// exit codes: 0 ok, 1 check failure, 2 usage error.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hardcore/dynamics.hpp"
#include "hardcore/enumerate.hpp"
#include "hardcore/experiment.hpp"
#include "hardcore/exponents.hpp"
#include "hardcore/graph.hpp"
#include "hardcore/moments.hpp"
#include "hardcore/numerics.hpp"
#include "hardcore/tree.hpp"

namespace {

using hardcore::format_double;

std::string fmt(double x) {
  if (x == hardcore::kNegInf) return "-inf";
  return format_double(x);
}

// "a:b:step" -> inclusive grid
std::vector<double> parse_grid(const std::string& s) {
  double a = 0, b = 0, step = 0;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &a, &b, &step, &extra) != 3)
    throw CLI::ValidationError("--lambda-grid", "expected a:b:step, got '" + s + "'");
  if (!(step > 0) || b < a)
    throw CLI::ValidationError("--lambda-grid", "need step > 0 and b >= a in '" + s + "'");
  std::vector<double> grid;
  for (double x = a; x <= b + step * 1e-9; x += step) grid.push_back(x);
  return grid;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw CLI::ValidationError("--n-list", "empty list");
  return out;
}

// CSV sink: --out FILE or stdout
struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file " + path);
      os = &file;
    }
  }
  template <typename T>
  Sink& operator<<(const T& v) {
    (*os) << v;
    return *this;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hard-core model on random regular bipartite graphs"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_path;
  app.add_option("--seed", seed, "rng seed");
  app.add_option("--threads", threads, "worker threads for sweeps");
  app.add_option("--out", out_path, "output file (CSV) or directory (experiment)");

  int rc = 0;  // set to 1 by subcommands whose checks fail

  // ---- gen ----
  {
    auto* gen = app.add_subcommand("gen", "sample a d-regular bipartite multigraph");
    gen->fallthrough();
    auto n = std::make_shared<int>(10);
    auto d = std::make_shared<int>(3);
    gen->add_option("--n", *n, "vertices per side")->required();
    gen->add_option("--d", *d, "degree (number of matchings)")->required();
    gen->callback([&, n, d] {
      const auto g = hardcore::sample_graph(*n, *d, seed);
      Sink sink(out_path);
      g.serialize(*sink.os);
    });
  }

  // ---- tree ----
  {
    auto* tree = app.add_subcommand("tree", "symmetric fixed points along a lambda grid");
    tree->fallthrough();
    auto d = std::make_shared<int>(3);
    auto grid_s = std::make_shared<std::string>();
    tree->add_option("--d", *d, "degree")->required();
    tree->add_option("--lambda-grid", *grid_s, "a:b:step")->required();
    tree->callback([&, d, grid_s] {
      Sink sink(out_path);
      sink << "lambda,p_star,p1,p2,is_unique\n";
      for (double l : parse_grid(*grid_s)) {
        const auto fp = hardcore::semi_invariant_fixed_points(l, *d);
        sink << fmt(l) << ',' << fmt(fp.p_star) << ',' << fmt(fp.p1) << ',' << fmt(fp.p2) << ','
             << (fp.is_unique ? 1 : 0) << '\n';
      }
    });
  }

  // ---- exponents ----
  {
    auto* exp_cmd = app.add_subcommand("exponents", "first/second-moment exponent surfaces");
    exp_cmd->fallthrough();
    exp_cmd->require_subcommand(1);

    auto d = std::make_shared<int>(3);
    auto lambda = std::make_shared<double>(1.0);
    auto starts = std::make_shared<int>(500);
    exp_cmd->add_option("--d", *d, "degree");
    exp_cmd->add_option("--lambda", *lambda, "activity");
    exp_cmd->add_option("--starts", *starts, "multistart count for stationary");

    auto* land = exp_cmd->add_subcommand("phi1-landscape", "maximizers of the first-moment exponent");
    land->fallthrough();
    land->callback([&, d, lambda] {
      const auto ls = hardcore::maximize_phi1(*lambda, *d);
      Sink sink(out_path);
      sink << "kind,alpha,beta,value,grad_norm,eig1,eig2,eig3\n";
      for (const auto& m : ls.maximizers) {
        const auto gnorm = hardcore::grad_phi1(m.point, *lambda, *d).norm();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hardcore::hessian_phi1(m.point, *d));
        sink << "maximizer," << fmt(m.point.alpha) << ',' << fmt(m.point.beta) << ','
             << fmt(m.value) << ',' << fmt(gnorm) << ',' << fmt(es.eigenvalues()(0)) << ','
             << fmt(es.eigenvalues()(1)) << ",nan\n";
      }
      const auto gnorm =
          hardcore::grad_phi1(ls.symmetric_point, *lambda, *d).norm();
      sink << "symmetric," << fmt(ls.symmetric_point.alpha) << ',' << fmt(ls.symmetric_point.beta)
           << ',' << fmt(ls.symmetric_value) << ',' << fmt(gnorm) << ','
           << fmt(ls.symmetric_eigs(0)) << ',' << fmt(ls.symmetric_eigs(1)) << ",nan\n";
    });

    auto* stat = exp_cmd->add_subcommand("stationary", "stationary points of the overlap exponent");
    stat->fallthrough();
    stat->callback([&, d, lambda, starts] {
      const double p = hardcore::symmetric_fixed_point(*lambda, *d);
      const auto rep = hardcore::find_stationary_points({p, p}, *lambda, *d, *starts, seed);
      Sink sink(out_path);
      sink << "alpha,beta,gamma,delta,epsilon,value,grad_norm,eig1,eig2,eig3,is_max,basin_count\n";
      for (const auto& sp : rep.points) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sp.hessian);
        sink << fmt(p) << ',' << fmt(p) << ',' << fmt(sp.point.gamma) << ',' << fmt(sp.point.delta)
             << ',' << fmt(sp.point.epsilon) << ',' << fmt(sp.value) << ','
             << fmt(sp.gradient_norm) << ',' << fmt(es.eigenvalues()(0)) << ','
             << fmt(es.eigenvalues()(1)) << ',' << fmt(es.eigenvalues()(2)) << ','
             << (sp.is_max ? 1 : 0) << ',' << sp.basin_count << '\n';
      }
      if (!rep.unique_interior_max) rc = 1;
    });

    auto* polys = exp_cmd->add_subcommand("verify-polys", "sign checks for the fixed-degree polynomials");
    polys->fallthrough();
    polys->callback([&, d] {
      const auto checks = hardcore::verify_appendix_polynomials(*d);
      Sink sink(out_path);
      sink << "name,lo,hi,claimed_sign,grid_min,grid_max,grid_ok,certified,worst_point\n";
      for (const auto& c : checks) {
        sink << c.name << ',' << fmt(c.lo) << ',' << fmt(c.hi) << ',' << c.claimed_sign << ','
             << fmt(c.grid_min) << ',' << fmt(c.grid_max) << ',' << (c.grid_ok ? 1 : 0) << ','
             << (c.certified ? 1 : 0) << ',' << fmt(c.worst_point) << '\n';
        if (!c.grid_ok) rc = 1;
      }
    });
  }

  // ---- moments ----
  {
    auto* mom = app.add_subcommand("moments", "exact finite-n moments and their limits");
    mom->fallthrough();
    mom->require_subcommand(1);

    auto d = std::make_shared<int>(3);
    auto alpha = std::make_shared<double>(-1.0);
    auto beta = std::make_shared<double>(-1.0);
    mom->add_option("--d", *d, "degree");
    mom->add_option("--alpha", *alpha, "V1-side density (default 1/d)");
    mom->add_option("--beta", *beta, "V2-side density (default 1/d)");
    auto dens = [d, alpha, beta] {
      const double a = *alpha < 0 ? 1.0 / *d : *alpha;
      const double b = *beta < 0 ? 1.0 / *d : *beta;
      return std::make_pair(a, b);
    };

    auto* ratio = mom->add_subcommand("ratio", "E[Z^2]/E[Z]^2 against the limit along n");
    ratio->fallthrough();
    auto n_list_s = std::make_shared<std::string>();
    ratio->add_option("--n-list", *n_list_s, "comma-separated n values")->required();
    ratio->callback([&, d, n_list_s] {
      const double dd = 1.0 / *d;
      const double limit = hardcore::tau(dd, dd, *d).value;
      const auto n_values = parse_int_list(*n_list_s);
      for (int n : n_values)
        if (n % *d != 0)
          throw CLI::ValidationError("--n-list", std::to_string(n) + " not divisible by d");
      Sink sink(out_path);
      sink << "n,a,b,ratio,tau,abs_err\n";
      for (int n : n_values) {
        const std::int64_t a = n / *d;
        const double r = hardcore::moment_ratio(n, a, a, *d);
        sink << n << ',' << a << ',' << a << ',' << fmt(r) << ',' << fmt(limit) << ','
             << fmt(std::abs(r - limit)) << '\n';
      }
    });

    auto* tau_cmd = mom->add_subcommand("tau", "the limiting ratio all four ways");
    tau_cmd->fallthrough();
    tau_cmd->callback([&, d, dens] {
      const auto [a, b] = dens();
      const auto prod = hardcore::tau(a, b, *d);
      const auto cyc = hardcore::tau_from_cycle_sums(a, b, *d);
      Sink sink(out_path);
      sink << "alpha,beta,d,product,cycle_sum,quad_gaussian,quad_gaussian_err,quad_nested,"
              "quad_nested_err,max_pairwise_diff\n";
      if (prod.diverges) {
        sink << fmt(a) << ',' << fmt(b) << ',' << *d << ",inf,inf,nan,nan,nan,nan,nan\n";
        return;
      }
      const auto q = hardcore::tau_by_quadrature(a, b, *d);
      const double vals[4] = {prod.value, cyc.value, q.gaussian_2d, q.nested_3d};
      double diff = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) diff = std::max(diff, std::abs(vals[i] - vals[j]));
      sink << fmt(a) << ',' << fmt(b) << ',' << *d << ',' << fmt(prod.value) << ','
           << fmt(cyc.value) << ',' << fmt(q.gaussian_2d) << ',' << fmt(q.gaussian_2d_err) << ','
           << fmt(q.nested_3d) << ',' << fmt(q.nested_3d_err) << ',' << fmt(diff) << '\n';
    });

    auto* cond = mom->add_subcommand("conditioning", "cycle-count terms of the limiting ratio");
    cond->fallthrough();
    auto i_max = std::make_shared<int>(40);
    cond->add_option("--i-max", *i_max, "largest cycle length");
    cond->callback([&, d, dens, i_max] {
      const auto [a, b] = dens();
      const auto s = hardcore::conditioning_summary(a, b, *d, *i_max);
      Sink sink(out_path);
      sink << "i,lambda_i,delta_i,partial_sum,tau_closed_form\n";
      double run = 0;
      for (std::size_t j = 0; j < s.cycle_lengths.size(); ++j) {
        run += s.lambdas[j] * s.deltas[j] * s.deltas[j];
        sink << s.cycle_lengths[j] << ',' << fmt(s.lambdas[j]) << ',' << fmt(s.deltas[j]) << ','
             << fmt(run) << ',' << fmt(s.tau_closed_form) << '\n';
      }
    });
  }

  // ---- enumerate ----
  {
    auto* en = app.add_subcommand("enumerate", "exact computations on a small graph");
    en->fallthrough();
    en->require_subcommand(1);

    auto graph_path = std::make_shared<std::string>();
    auto lambda = std::make_shared<double>(1.0);
    auto t = std::make_shared<int>(0);
    en->add_option("--graph", *graph_path, "graph file (from gen)")->required();
    en->add_option("--lambda", *lambda, "activity");
    en->add_option("--t", *t, "occupancy-difference threshold");

    auto* prof = en->add_subcommand("profile", "log-weight table over (a, b)");
    prof->fallthrough();
    prof->callback([&, graph_path, lambda] {
      const auto g = hardcore::BipartiteMultigraph::parse_file(*graph_path);
      const auto pr = hardcore::occupancy_profile(g, *lambda);
      Sink sink(out_path);
      sink << "a\\b";
      for (int b = 0; b <= pr.n; ++b) sink << ',' << b;
      sink << '\n';
      for (int a = 0; a <= pr.n; ++a) {
        sink << a;
        for (int b = 0; b <= pr.n; ++b) sink << ',' << fmt(pr.logw[a][b]);
        sink << '\n';
      }
    });

    auto* barrier = en->add_subcommand("barrier", "lobe and bottleneck measures at threshold t");
    barrier->fallthrough();
    barrier->callback([&, graph_path, lambda, t] {
      const auto g = hardcore::BipartiteMultigraph::parse_file(*graph_path);
      const auto bm = hardcore::barrier_measures(g, *lambda, *t);
      const auto cb = hardcore::conductance_lower_bound(g, *lambda, *t);
      Sink sink(out_path);
      sink << "t,mu_i1,mu_i2,mu_ib,bottleneck_ratio,conductance_applicable,conductance_bound\n";
      sink << bm.t << ',' << fmt(bm.mu_i1) << ',' << fmt(bm.mu_i2) << ',' << fmt(bm.mu_ib) << ','
           << fmt(bm.bottleneck_ratio) << ',' << (cb.applicable ? 1 : 0) << ','
           << (cb.applicable ? fmt(cb.value) : std::string("nan")) << '\n';
    });

    auto* gap = en->add_subcommand("gap", "exact spectral gap of the single-site kernel");
    gap->fallthrough();
    gap->callback([&, graph_path, lambda] {
      const auto g = hardcore::BipartiteMultigraph::parse_file(*graph_path);
      const double gval = hardcore::exact_spectral_gap(g, *lambda);
      Sink sink(out_path);
      sink << "lambda,n,d,spectral_gap\n";
      sink << fmt(*lambda) << ',' << g.n << ',' << g.d << ',' << fmt(gval) << '\n';
    });
  }

  // ---- dynamics ----
  {
    auto* dyn = app.add_subcommand("dynamics", "single-site heat-bath chain");
    dyn->fallthrough();
    dyn->require_subcommand(1);

    auto graph_path = std::make_shared<std::string>();
    auto lambda = std::make_shared<double>(1.0);
    auto steps = std::make_shared<std::int64_t>(1000);
    dyn->add_option("--graph", *graph_path, "graph file (from gen)")->required();
    dyn->add_option("--lambda", *lambda, "activity");
    dyn->add_option("--steps", *steps, "number of single-site updates");

    auto* run = dyn->add_subcommand("run", "one trajectory; trace of the occupancy difference");
    run->fallthrough();
    auto every = std::make_shared<std::int64_t>(1);
    auto init_s = std::make_shared<std::string>("fill1");
    run->add_option("--sample-every", *every, "record every k-th step");
    run->add_option("--init", *init_s, "empty | fill1 | fill2");
    run->callback([&, graph_path, lambda, steps, every, init_s] {
      const auto g = hardcore::BipartiteMultigraph::parse_file(*graph_path);
      hardcore::ChainInit init;
      if (*init_s == "empty")
        init = hardcore::ChainInit::kEmpty;
      else if (*init_s == "fill1")
        init = hardcore::ChainInit::kFillV1;
      else if (*init_s == "fill2")
        init = hardcore::ChainInit::kFillV2;
      else
        throw CLI::ValidationError("--init", "expected empty|fill1|fill2");
      const auto tr = hardcore::run_chain(g, *lambda, *steps, init, *every, seed);
      Sink sink(out_path);
      sink << "step,m,occupancy\n";
      for (std::size_t i = 0; i < tr.steps.size(); ++i)
        sink << tr.steps[i] << ',' << tr.magnetization[i] << ',' << tr.occupancy[i] << '\n';
    });

    auto* cross = dyn->add_subcommand("crossing", "first time the occupancy difference drops to 0");
    cross->fallthrough();
    auto runs = std::make_shared<int>(10);
    cross->add_option("--runs", *runs, "independent chains");
    cross->callback([&, graph_path, lambda, steps, runs] {
      const auto g = hardcore::BipartiteMultigraph::parse_file(*graph_path);
      const auto cs = hardcore::crossing_time(g, *lambda, *steps, *runs, seed);
      Sink sink(out_path);
      sink << "run,time,censored\n";
      for (int r = 0; r < cs.n_runs; ++r)
        sink << r << ',' << cs.times[r] << ',' << (cs.censored[r] ? 1 : 0) << '\n';
      std::cerr << "median_time=" << fmt(cs.median_time) << " n_censored=" << cs.n_censored
                << "/" << cs.n_runs << "\n";
    });
  }

  // ---- experiment ----
  {
    auto* ex = app.add_subcommand("experiment", "run a configured study end to end");
    ex->fallthrough();
    auto config_path = std::make_shared<std::string>();
    ex->add_option("--config", *config_path, "JSON config file")->required();
    ex->callback([&, config_path] {
      auto cfg = hardcore::load_config(*config_path);
      if (!cfg.has_seed && app.count("--seed") > 0) {
        cfg.seed = seed;
        cfg.has_seed = true;
      }
      if (!out_path.empty()) cfg.out_dir = out_path;
      if (app.count("--threads") > 0) cfg.threads = threads;
      const auto res = hardcore::run_experiment(cfg);
      for (const auto& c : res.checks)
        std::cout << (c.asserted ? (c.passed ? "PASS" : "FAIL") : "INFO") << ": " << c.text << "\n";
      std::cout << "wrote " << res.dir << " (" << res.files.size() << " files)\n";
      if (!res.all_passed) rc = 1;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
