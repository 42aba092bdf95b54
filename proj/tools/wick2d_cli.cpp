// wick2d command-line laboratory: sampling, dynamics, counting, tensor and
// random-tensor verification workflows with reproducible artifacts.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wick2d/counting.hpp"
#include "wick2d/dynamics.hpp"
#include "wick2d/gibbs.hpp"
#include "wick2d/random_tensor.hpp"
#include "wick2d/spacetime.hpp"
#include "wick2d/tensor.hpp"

using json = nlohmann::json;
using namespace wick2d;

namespace {

constexpr const char* kSchema = "wick2d/1";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// artifact writer: header embeds schema + resolved config, rows are CSV
struct Artifact {
  std::ostringstream body;
  json config;
  std::string command;

  void header(const std::string& columns) {
    body << "# schema=" << kSchema << "\n";
    body << "# command=" << command << "\n";
    body << "# config=" << config.dump() << "\n";
    body << columns << "\n";
  }
  void write(const std::string& path) const {
    if (path.empty() || path == "-") {
      std::cout << body.str();
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << body.str();
  }
};

std::vector<int> parse_sizes(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  if (out.empty()) throw CLI::ValidationError("sizes", "empty size list");
  return out;
}

DyadicTuple parse_tuple(const std::string& csv) {
  const auto v = parse_sizes(csv);
  if (v.size() != 4) throw CLI::ValidationError("tuple", "need N,N1,N2,N3");
  return {v[0], v[1], v[2], v[3]};
}

// merge a JSON config file under the flags: flags given on the command line win
void merge_config(CLI::App* cmd, const std::string& config_path) {
  if (config_path.empty()) return;
  std::ifstream is(config_path);
  if (!is) throw CLI::ValidationError("--config", "cannot open " + config_path);
  json j;
  is >> j;
  for (auto& [key, val] : j.items()) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr || opt->count() > 0) continue;
    opt->add_result(val.is_string() ? val.get<std::string>() : val.dump());
    opt->run_callback();
  }
}

int cmd_sample(int radius, int count, std::uint64_t seed, const std::string& out,
               const std::string& snapshot_prefix) {
  Artifact a;
  a.command = "sample";
  a.config = {{"radius", radius}, {"n", count}, {"seed", seed}};
  a.header("i,seed,l2_norm,hs_norm_s0.1,gibbs_log_weight");
  for (int i = 0; i < count; ++i) {
    const std::uint64_t si = rng::derive_seed(seed, i);
    const GaussianEnsemble ens(si, radius);
    const FourierField u = sample_mu(radius, ens);
    a.body << i << "," << si << "," << fmt(u.l2_norm()) << ","
           << fmt(u.hs_norm(0.1)) << "," << fmt(gibbs_log_weight(u, radius)) << "\n";
    if (!snapshot_prefix.empty())
      save_snapshot(u, snapshot_prefix + std::to_string(i) + ".bin");
  }
  a.write(out);
  return 0;
}

int cmd_evolve(int N, int radius, double t_end, double dt, const std::string& mode,
               int stride, std::uint64_t seed, const std::string& in,
               const std::string& out, const std::string& final_snapshot) {
  FourierField u0 = in.empty()
                        ? sample_mu(radius, GaussianEnsemble(seed, radius))
                        : load_snapshot(in);
  NlsMode m = mode == "gauged"   ? NlsMode::Gauged
              : mode == "bare"   ? NlsMode::Bare
                                 : NlsMode::Ungauged;
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.record_stride = stride;
  const TrajectoryRecord rec = evolve({u0, 0.0, N}, t_end, cfg, m);
  Artifact a;
  a.command = "evolve";
  a.config = {{"N", N},   {"radius", radius}, {"t_end", t_end}, {"dt", dt},
              {"mode", mode}, {"stride", stride}, {"seed", seed}, {"in", in}};
  a.header("t,mass,energy");
  for (std::size_t i = 0; i < rec.times.size(); ++i)
    a.body << fmt(rec.times[i]) << "," << fmt(rec.mass[i]) << ","
           << fmt(rec.energy[i]) << "\n";
  a.write(out);
  if (!final_snapshot.empty()) save_snapshot(rec.final_state.field, final_snapshot);
  return 0;
}

int cmd_gauge_check(int N, double t_end, double dt, int samples,
                    std::uint64_t seed, const std::string& out) {
  Artifact a;
  a.command = "gauge-check";
  a.config = {{"N", N}, {"t_end", t_end}, {"dt", dt}, {"samples", samples}, {"seed", seed}};
  a.header("i,sup_l2_discrepancy");
  IntegratorConfig cfg;
  cfg.dt = dt;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const FourierField u0 =
        sample_mu(N, GaussianEnsemble(rng::derive_seed(seed, i), N));
    const double d = gauge_equivalence_check(u0, N, t_end, cfg);
    worst = std::max(worst, d);
    a.body << i << "," << fmt(d) << "\n";
  }
  a.write(out);
  return worst <= 1e-6 ? 0 : 1;
}

int cmd_invariance(int N, double t_end, double dt, int samples, bool control,
                   std::uint64_t seed, const std::string& out) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.record_stride = 0;
  const InvarianceReport rep = invariance_test(N, t_end, samples, seed, cfg, control);
  Artifact a;
  a.command = "invariance";
  a.config = {{"N", N},       {"t_end", t_end},   {"dt", dt},
              {"samples", samples}, {"control", control}, {"seed", seed}};
  a.header("observable,mean_z,var_z,mean_diff,se,ess,inconclusive");
  bool any_fail = false;
  for (const auto& ob : rep.observables) {
    a.body << ob.name << "," << fmt(ob.mean_z) << "," << fmt(ob.var_z) << ","
           << fmt(ob.mean_diff) << "," << fmt(ob.se) << "," << fmt(rep.ess) << ","
           << (rep.inconclusive ? 1 : 0) << "\n";
    if (std::abs(ob.mean_z) >= 3.0) any_fail = true;
  }
  a.write(out);
  if (rep.inconclusive) return 2;
  return control ? (any_fail ? 0 : 1) : (any_fail ? 1 : 0);
}

int cmd_residual(int N, double t_end, double dt, double s, std::uint64_t seed,
                 const std::string& out) {
  const FourierField u0 = sample_mu(N, GaussianEnsemble(seed, N));
  IntegratorConfig cfg;
  cfg.dt = dt;
  const ResidualCurve rc = residual_diagnostic(u0, N, t_end, cfg, s);
  Artifact a;
  a.command = "residual";
  a.config = {{"N", N}, {"t_end", t_end}, {"dt", dt}, {"s", s}, {"seed", seed}};
  a.header("t,hs_residual");
  for (std::size_t i = 0; i < rc.times.size(); ++i)
    a.body << fmt(rc.times[i]) << "," << fmt(rc.hs_norms[i]) << "\n";
  a.write(out);
  return 0;
}

int cmd_count(int max_n, double eps, const std::string& out) {
  const CountSweepReport rep = verify_counting_bounds(max_n, eps);
  Artifact a;
  a.command = "count";
  a.config = {{"max_n", max_n}, {"eps", eps}};
  a.header("tuple,bound_id,worst_count,worst_m,bound,ratio");
  for (const BoundRow& r : rep.rows)
    a.body << r.tuple.str() << "," << r.bound_id << "," << r.worst_count << ","
           << r.worst_m << "," << fmt(r.bound) << "," << fmt(r.ratio) << "\n";
  a.body << "# fitted_constants=" << json(rep.fitted_constants).dump() << "\n";
  a.body << "# partition_identity_ok=" << rep.partition_identity_ok << "\n";
  a.write(out);
  return rep.partition_identity_ok ? 0 : 1;
}

int cmd_tensor_bounds(int max_n, double eps, const std::string& out) {
  const BaseTensorReport rep = verify_base_tensor_bounds(max_n, eps);
  Artifact a;
  a.command = "tensor-bounds";
  a.config = {{"max_n", max_n}, {"eps", eps}};
  a.header("tuple,m,partition,exact,schur,paper_bound,ratio");
  for (const BaseBoundRow& r : rep.rows)
    a.body << r.tuple.str() << "," << r.m << "," << r.partition << ","
           << fmt(r.exact) << "," << fmt(r.schur) << "," << fmt(r.paper_bound)
           << "," << fmt(r.ratio) << "\n";
  a.body << "# fitted_constants=" << json(rep.fitted_constants).dump() << "\n";
  a.body << "# chain_ok=" << rep.chain_ok
         << " max_duality_gap=" << fmt(rep.max_duality_gap) << "\n";
  a.write(out);
  return rep.chain_ok && rep.max_duality_gap <= 1e-10 ? 0 : 1;
}

int cmd_rt_mc(const std::string& variant, const std::string& sweep, double p,
              int samples, double s, double slope_cap, std::uint64_t seed,
              const std::string& out, const std::string& fit_out) {
  const RtScalingReport rep = verify_rt_scaling(
      parse_kernel_variant(variant), parse_sizes(sweep), p, slope_cap, samples,
      s, seed);
  Artifact a;
  a.command = "rt-mc";
  a.config = {{"variant", variant}, {"sweep", sweep}, {"p", p},
              {"samples", samples}, {"s", s},         {"slope_cap", slope_cap},
              {"seed", seed}};
  a.header("size,m,estimate,ci_lo,ci_hi,paper_rhs,ratio");
  for (const RtSweepPoint& pt : rep.points)
    a.body << pt.size << "," << pt.m << "," << fmt(pt.est.estimate) << ","
           << fmt(pt.est.ci_lo) << "," << fmt(pt.est.ci_hi) << ","
           << fmt(pt.paper_rhs) << "," << fmt(pt.ratio) << "\n";
  a.write(out);
  json fit = {{"schema", kSchema},   {"variant", variant},
              {"slope", rep.slope},  {"slope_cap", rep.slope_cap},
              {"pass", rep.pass},    {"config", a.config}};
  if (fit_out.empty() || fit_out == "-")
    std::cout << fit.dump(2) << "\n";
  else
    std::ofstream(fit_out) << fit.dump(2) << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_stochastic_norm(const std::string& tuple_csv, double s, double eps,
                        double T, int samples, bool t_sweep, std::uint64_t seed,
                        const std::string& out) {
  const DyadicTuple tuple = parse_tuple(tuple_csv);
  const double bp = XsbParams::b_prime(eps);
  Artifact a;
  a.command = "stochastic-norm";
  a.config = {{"tuple", tuple_csv}, {"s", s},       {"eps", eps}, {"T", T},
              {"samples", samples}, {"t_sweep", t_sweep}, {"seed", seed}};
  a.header("T,closed_form,mc_estimate,mc_ci_lo,mc_ci_hi");
  bool pass = true;
  std::vector<double> Ts = t_sweep ? std::vector<double>{1.0, 0.5, 0.25, 0.125}
                                   : std::vector<double>{T};
  for (double Ti : Ts) {
    const StochasticMomentResult r =
        stochastic_cubic_second_moment(tuple, s, bp, Ti, samples, seed);
    a.body << fmt(Ti) << "," << fmt(r.closed_form) << "," << fmt(r.mc.estimate)
           << "," << fmt(r.mc.ci_lo) << "," << fmt(r.mc.ci_hi) << "\n";
    const double w = r.mc.ci_hi - r.mc.ci_lo;
    if (std::abs(r.closed_form - r.mc.estimate) > 3.0 * std::max(w, 1e-300))
      pass = false;
  }
  a.write(out);
  return pass ? 0 : 1;
}

int cmd_resonant(const std::string& pattern, int radius, double s, double eps,
                 double T, std::uint64_t seed, const std::string& out) {
  const FourierField z = sample_mu(radius, GaussianEnsemble(seed, radius));
  FourierField w = sample_mu(radius, GaussianEnsemble(rng::derive_seed(seed, 1), radius));
  if (w.l2_norm() > 0.0) w *= cd(1.0 / w.l2_norm(), 0.0);
  const double norm = resonant_term_norm(pattern, w, z, s, eps, T);
  Artifact a;
  a.command = "resonant";
  a.config = {{"pattern", pattern}, {"radius", radius}, {"s", s},
              {"eps", eps},         {"T", T},           {"seed", seed}};
  a.header("pattern,T,norm");
  a.body << pattern << "," << fmt(T) << "," << fmt(norm) << "\n";
  a.write(out);
  return 0;
}

int cmd_strichartz(const std::string& sizes_csv, const std::string& out) {
  Artifact a;
  a.command = "strichartz";
  a.config = {{"sizes", sizes_csv}};
  a.header("N,ratio");
  double prev = 0.0;
  bool nondecreasing = true;
  for (int N : parse_sizes(sizes_csv)) {
    FourierField f(N);
    f.coeffs().setOnes();
    const double r = strichartz_ratio(f, N);
    if (r < prev) nondecreasing = false;
    prev = r;
    a.body << N << "," << fmt(r) << "\n";
  }
  a.write(out);
  return nondecreasing ? 0 : 1;
}

int cmd_dual_bound(int r, int N, double a1, int trials, std::uint64_t seed,
                   const std::string& out) {
  const double ratio = dual_vector_bound_check(r, N, a1, trials, seed);
  Artifact a;
  a.command = "dual-bound";
  a.config = {{"r", r}, {"N", N}, {"a1", a1}, {"trials", trials}, {"seed", seed}};
  a.header("r,N,a1,max_ratio");
  a.body << r << "," << N << "," << fmt(a1) << "," << fmt(ratio) << "\n";
  a.write(out);
  return 0;  // the lemma's implicit constant is reported, not asserted
}

int cmd_report(int max_n, int samples, std::uint64_t seed, const std::string& out) {
  json rep;
  rep["schema"] = kSchema;
  rep["config"] = {{"max_n", max_n}, {"samples", samples}, {"seed", seed}};

  const WickConstants s1 = sigma(1), s2 = sigma(2);
  rep["sigma"] = {{"sigma_1", s1.sigma_N},
                  {"sigma_2", s2.sigma_N},
                  {"pass", std::abs(s1.sigma_N - 3.0) < 1e-12 &&
                               std::abs(s2.sigma_N - 77.0 / 15.0) < 1e-12}};

  const CountSweepReport cs = verify_counting_bounds(max_n);
  rep["counting"] = {{"partition_identity_ok", cs.partition_identity_ok},
                     {"fitted_constants", cs.fitted_constants}};

  const BaseTensorReport bt = verify_base_tensor_bounds(std::min(max_n, 4));
  rep["tensor"] = {{"chain_ok", bt.chain_ok},
                   {"max_duality_gap", bt.max_duality_gap},
                   {"fitted_constants", bt.fitted_constants}};

  IntegratorConfig cfg;
  cfg.dt = 1.0 / 256.0;
  const FourierField u0 = sample_mu(4, GaussianEnsemble(seed, 4));
  rep["gauge_check"] = {{"sup_l2", gauge_equivalence_check(u0, 4, 0.25, cfg)}};

  RandomKernelSpec spec;
  spec.tuple = {4, 4, 4, 4};
  const NormEstimate ne = mc_operator_norm(spec, 2.0, samples, seed);
  rep["rt_mc_h1_4"] = {{"estimate", ne.estimate}, {"ci_lo", ne.ci_lo},
                       {"ci_hi", ne.ci_hi},       {"samples", ne.n_samples}};

  FourierField f(4);
  f.coeffs().setOnes();
  rep["strichartz_4"] = strichartz_ratio(f, 4);
  rep["dual_bound_r2"] = dual_vector_bound_check(2, 16, 1.0, 100, seed);

  if (out.empty() || out == "-")
    std::cout << rep.dump(2) << "\n";
  else
    std::ofstream(out) << rep.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wick2d: desk-scale laboratory for the Wick-ordered cubic NLS on T^2"};
  app.require_subcommand(1);

  // shared option storage
  std::string out = "-", config_path, in, snapshot_prefix, final_snapshot;
  std::string mode = "ungauged", variant = "h1", sweep = "2,4,8,16";
  std::string tuple_csv = "2,2,2,2", pattern = "zzz", sizes = "4,8,16,32";
  std::string fit_out = "-";
  int radius = 8, N = 8, n_count = 1, samples = 100, stride = 1, trials = 1000;
  int max_n = 8, r_rank = 2;
  double t_end = 1.0, dt = 1e-3, s = 0.1, eps = 0.25, xs_eps = 0.01, T = 0.5;
  double p = 2.0, slope_cap = 0.0, a1 = 1.0;
  std::uint64_t seed = 0;
  bool control = false, t_sweep = false;

  auto add_common = [&](CLI::App* c, bool needs_seed) {
    c->add_option("--out", out, "output path ('-' for stdout)");
    c->add_option("--config", config_path, "JSON config merged under the flags");
    auto* so = c->add_option("--seed", seed, "RNG seed");
    if (needs_seed) so->required();
    return c;
  };

  auto* c_sample = add_common(app.add_subcommand("sample", "draw mu-samples"), true);
  c_sample->add_option("--radius", radius);
  c_sample->add_option("--n", n_count);
  c_sample->add_option("--snapshot-prefix", snapshot_prefix);

  auto* c_evolve = add_common(app.add_subcommand("evolve", "run the truncated flow"), true);
  c_evolve->add_option("--n-trunc", N);
  c_evolve->add_option("--radius", radius);
  c_evolve->add_option("--t-end", t_end);
  c_evolve->add_option("--dt", dt);
  c_evolve->add_option("--mode", mode)->check(CLI::IsMember({"ungauged", "gauged", "bare"}));
  c_evolve->add_option("--stride", stride);
  c_evolve->add_option("--in", in);
  c_evolve->add_option("--final-snapshot", final_snapshot);

  auto* c_gauge = add_common(app.add_subcommand("gauge-check", "gauge equivalence"), true);
  c_gauge->add_option("--n-trunc", N);
  c_gauge->add_option("--t-end", t_end);
  c_gauge->add_option("--dt", dt);
  c_gauge->add_option("--samples", samples);

  auto* c_inv = add_common(app.add_subcommand("invariance", "measure invariance"), true);
  c_inv->add_option("--n-trunc", N);
  c_inv->add_option("--t-end", t_end);
  c_inv->add_option("--dt", dt);
  c_inv->add_option("--samples", samples);
  c_inv->add_flag("--control", control, "broken control: no renormalization, flat weights");

  auto* c_res = add_common(app.add_subcommand("residual", "nonlinear residual"), true);
  c_res->add_option("--n-trunc", N);
  c_res->add_option("--t-end", t_end);
  c_res->add_option("--dt", dt);
  c_res->add_option("--s", s);

  auto* c_count = add_common(app.add_subcommand("count", "lattice counting sweep"), false);
  c_count->add_option("--max-n", max_n);
  c_count->add_option("--eps", eps);

  auto* c_tb = add_common(app.add_subcommand("tensor-bounds", "base tensor norms"), false);
  c_tb->add_option("--max-n", max_n);
  c_tb->add_option("--eps", eps);

  auto* c_rt = add_common(app.add_subcommand("rt-mc", "random tensor MC sweep"), true);
  c_rt->add_option("--variant", variant);
  c_rt->add_option("--sweep", sweep);
  c_rt->add_option("--p", p);
  c_rt->add_option("--samples", samples);
  c_rt->add_option("--s", s);
  c_rt->add_option("--slope-cap", slope_cap);
  c_rt->add_option("--fit-out", fit_out);

  auto* c_sn = add_common(app.add_subcommand("stochastic-norm", "purely stochastic term"), true);
  c_sn->add_option("--tuple", tuple_csv);
  c_sn->add_option("--s", s);
  c_sn->add_option("--eps", xs_eps);
  c_sn->add_option("--big-t", T);
  c_sn->add_option("--samples", samples);
  c_sn->add_flag("--t-sweep", t_sweep);

  auto* c_rn = add_common(app.add_subcommand("resonant", "resonant term norm"), true);
  c_rn->add_option("--pattern", pattern)->check(CLI::IsMember({"www", "zzz", "wzz", "wwz"}));
  c_rn->add_option("--radius", radius);
  c_rn->add_option("--s", s);
  c_rn->add_option("--eps", xs_eps);
  c_rn->add_option("--big-t", T);

  auto* c_st = add_common(app.add_subcommand("strichartz", "Strichartz ratio sweep"), false);
  c_st->add_option("--sizes", sizes);

  auto* c_db = add_common(app.add_subcommand("dual-bound", "dual vector lemma check"), true);
  c_db->add_option("--r", r_rank);
  c_db->add_option("--big-n", N);
  c_db->add_option("--a1", a1);
  c_db->add_option("--trials", trials);

  auto* c_rep = add_common(app.add_subcommand("report", "aggregate reduced-scale report"), true);
  c_rep->add_option("--max-n", max_n);
  c_rep->add_option("--samples", samples);
  c_rep->add_flag("--all", "run every section (default)");

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    merge_config(sub, config_path);
    const std::string name = sub->get_name();
    if (name == "sample") return cmd_sample(radius, n_count, seed, out, snapshot_prefix);
    if (name == "evolve")
      return cmd_evolve(N, radius, t_end, dt, mode, stride, seed, in, out, final_snapshot);
    if (name == "gauge-check") return cmd_gauge_check(N, t_end, dt, samples, seed, out);
    if (name == "invariance") return cmd_invariance(N, t_end, dt, samples, control, seed, out);
    if (name == "residual") return cmd_residual(N, t_end, dt, s, seed, out);
    if (name == "count") return cmd_count(max_n, eps, out);
    if (name == "tensor-bounds") return cmd_tensor_bounds(max_n, eps, out);
    if (name == "rt-mc")
      return cmd_rt_mc(variant, sweep, p, samples, s, slope_cap, seed, out, fit_out);
    if (name == "stochastic-norm")
      return cmd_stochastic_norm(tuple_csv, s, xs_eps, T, samples, t_sweep, seed, out);
    if (name == "resonant") return cmd_resonant(pattern, radius, s, xs_eps, T, seed, out);
    if (name == "strichartz") return cmd_strichartz(sizes, out);
    if (name == "dual-bound") return cmd_dual_bound(r_rank, N, a1, trials, seed, out);
    if (name == "report") return cmd_report(max_n, samples, seed, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
