// Copyright 2026 The qdf developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdf/cli.hpp"

#include "qdf/io.hpp"
#include "qdf/probabilistic.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>

namespace qdf::cli {

namespace {

using io::json;

struct GlobalOpts {
  std::uint64_t seed = 0;
  double tol = 1e-7;  // extremality / decomposition decision tolerance
  std::string out;
  bool json_out = false;
};

json spectrum_json(const Matrix& hermitian) {
  const auto eig = sorted_eig_desc(hermitian);
  json out = json::array();
  for (Index i = 0; i < eig.values.size(); ++i) out.push_back(eig.values(i));
  return out;
}

json dilation_json(const DilationReport& report, double verify_sweep) {
  return json{{"diagnostics", report.diagnostics},
              {"eps_certified", report.eps_certified},
              {"eps_measured", report.eps_measured},
              {"method", to_string(report.method)},
              {"verify_sweep", verify_sweep},
              {"w", io::matrix_to_json(report.w.mat)}};
}

json analyze_cmd(const std::string& channel_path, const GlobalOpts& g) {
  const Channel ch = io::load_channel(channel_path);
  const auto verdict = extremality_test(ch, g.tol);
  return json{{"choi_spectrum", spectrum_json(ch.choi().mat)},
              {"dim", ch.dim()},
              {"extreme", verdict.is_extreme},
              {"gram_rank", verdict.gram_rank},
              {"kraus_rank", kraus_rank(ch)},
              {"min_singular_value", verdict.min_singular_value}};
}

json dilate_cmd(const std::string& channel_path, const std::string& env_path, Index m,
                const std::string& mode, const GlobalOpts& g) {
  const Channel target = io::load_channel(channel_path);
  const DensityOperator env = io::load_state(env_path);
  if (m <= 0) m = kraus_rank(target);
  if (m > env.dim())
    throw InfeasibleError("m-rank infeasible: subsystem dimension " + std::to_string(m) +
                          " exceeds the environment dimension " +
                          std::to_string(env.dim()));
  const Initialization init = find_eps_pure_subsystem(env, m);
  if (mode == "stinespring" && init.epsilon > 1e-9)
    throw InfeasibleError("stinespring mode requires a pure subsystem initialization, "
                          "achieved epsilon " + std::to_string(init.epsilon));
  const DilationReport report = dilate_via_subsystem(target, init);
  const double sweep = verify_dilation(report, target, 20, g.seed);
  json out = dilation_json(report, sweep);
  out["m"] = init.decomp.m;
  out["f"] = init.decomp.f;
  out["r"] = init.decomp.r;
  out["mode"] = mode;
  return out;
}

json design_stochastic_cmd(const std::string& spec_path, const std::string& env_path,
                           const GlobalOpts& g) {
  const StochasticUnitarySpec spec = io::load_stochastic_spec(spec_path);
  const DensityOperator env = io::load_state(env_path);
  const MixedInitialization init = mixed_subsystem_init(env, spec.size());
  const DilationReport report = design_stochastic_unitary(spec, init);
  const double sweep = verify_dilation(report, spec.channel(), 20, g.seed);
  const Channel achieved = channel_from_joint(report.w.mat, report.env_state, spec.dim());
  json out = dilation_json(report, sweep);
  out["choi_residual"] = max_abs(Matrix(achieved.choi().mat - spec.channel().choi().mat));
  return out;
}

json design_convex_cmd(const std::string& spec_path, const std::string& env_path,
                       const GlobalOpts& g) {
  const ConvexCombinationSpec spec = io::load_convex_spec(spec_path);
  const DensityOperator env = io::load_state(env_path);
  const DilationReport report = block_convex_design(spec, env);
  const Channel target = spec.combined();
  const double sweep = verify_dilation(report, target, 20, g.seed);
  const Channel achieved = channel_from_joint(report.w.mat, report.env_state, spec.dim());
  json out = dilation_json(report, sweep);
  out["choi_residual"] = max_abs(Matrix(achieved.choi().mat - target.choi().mat));
  return out;
}

json decompose_cmd(const std::string& channel_path, Index max_components,
                   const GlobalOpts& g) {
  const Channel ch = io::load_channel(channel_path);
  const auto comps = extreme_decompose(ch, g.tol, max_components);
  Matrix recon = Matrix::Zero(ch.dim() * ch.dim(), ch.dim() * ch.dim());
  json list = json::array();
  for (const auto& c : comps) {
    recon += c.weight * c.channel.choi().mat;
    json ops = json::array();
    for (const Matrix& m : c.channel.kraus().ops) ops.push_back(io::matrix_to_json(m));
    list.push_back(json{{"extreme", c.verdict.is_extreme},
                        {"kraus", std::move(ops)},
                        {"min_singular_value", c.verdict.min_singular_value},
                        {"quasi_extreme", c.quasi_extreme},
                        {"weight", c.weight}});
  }
  return json{{"components", std::move(list)},
              {"count", comps.size()},
              {"reconstitution_residual", max_abs(Matrix(recon - ch.choi().mat))}};
}

json realize_cmd(const std::string& channel_path, const std::string& env_path,
                 const GlobalOpts& g) {
  const Channel ch = io::load_channel(channel_path);
  const DensityOperator env = io::load_state(env_path);
  const Initialization init = find_eps_pure_subsystem(env, ch.dim());
  const AverageRealization ar = realize_on_average(ch, init, g.tol);
  json pi = json::array();
  for (Index j = 0; j < ar.distribution.size(); ++j) pi.push_back(ar.distribution(j));
  json warnings = json::array();
  for (const auto& w : ar.warnings) warnings.push_back(w);
  return json{{"avg_error_measured", ar.avg_error_measured},
              {"component_count", ar.distribution.size()},
              {"distribution", std::move(pi)},
              {"eps_certified", ar.eps_certified},
              {"reconstitution_residual", ar.reconstitution_residual},
              {"warnings", std::move(warnings)}};
}

json protocol_rank2_cmd(const std::string& config_path, int cycles) {
  const io::RankFile file = io::load_rank_config(config_path);
  const RankTwoTarget target = polar_extract(file.m0, file.m1);
  Matrix anc(2, 2);
  anc << file.w0, file.q, std::conj(file.q), file.w1;
  const auto sim =
      simulate_rank2(target, schedule_for_target(target, cycles), DensityOperator(anc));
  const double target_distance =
      channel_distance_1to1(sim.achieved, target.channel()).lower_bound;
  return json{{"cycles", cycles},
              {"target_distance", target_distance},
              {"theta", target.theta},
              {"trotter_error", sim.trotter_error}};
}

json protocol_rank3_cmd(const std::string& config_path, int cycles) {
  const io::RankFile file = io::load_rank_config(config_path);
  if (!file.m2) throw ValidationError("lv3 requires an m2 operator in the config");
  const auto sim = simulate_rank3_nested(file.m0, file.m1, *file.m2, cycles);
  const Channel target = Channel::from_kraus({file.m0, file.m1, *file.m2});
  return json{{"choi_residual", max_abs(Matrix(sim.achieved.choi().mat - target.choi().mat))},
              {"cycles", cycles},
              {"pseudo_inverse_used", sim.pseudo_inverse_used},
              {"stage2_tp_residual", sim.stage2_tp_residual},
              {"target_distance",
               channel_distance_1to1(sim.achieved, target).lower_bound}};
}

json protocol_fbdd_cmd(const std::string& config_path) {
  const io::FbddFile file = io::load_fbdd_config(config_path);
  const FbddCheck check = fbdd_check(file.config);
  json out{{"block_form_ok", check.block_form_ok},
           {"max_block_residual", check.max_block_residual},
           {"mixing_ok", check.mixing_ok},
           {"x_eigenvalues", json::array()}};
  for (Index i = 0; i < check.x_eigenvalues.size(); ++i)
    out["x_eigenvalues"].push_back(check.x_eigenvalues(i));
  if (!check.block_form_ok || !check.mixing_ok || !check.u_fb) {
    out["infeasible"] = "feedback decoupling refused: coupling fails the block-form or "
                        "mixing conditions";
    return out;
  }
  const FbddRun run = fbdd_run(file.config, file.rho_b);
  out["fidelity"] = run.fidelity;
  out["rho_s_final"] = io::matrix_to_json(run.rho_s_final.mat);
  return out;
}

json protocol_split_cmd(const std::string& config_path) {
  const io::SplitFile file = io::load_split_config(config_path);
  const SplitConfig cfg = split_build(file.d_s, file.pi_t);
  const DensityOperator exact = split_run(cfg, file.rho_s);
  json out{{"blocks", cfg.k},
           {"d_t", cfg.d_t},
           {"output", io::matrix_to_json(exact.mat)},
           {"support_trace", (file.pi_t * exact.mat).trace().real()},
           {"closed_form_residual",
            max_abs(Matrix(exact.mat - split_closed_form(cfg, file.rho_s.mat)))}};
  if (file.ancilla_eps > 0.0 && cfg.k > 1) {
    Matrix anc = Matrix::Zero(cfg.k, cfg.k);
    anc(0, 0) = 1.0 - file.ancilla_eps;
    for (Index k = 1; k < cfg.k; ++k) anc(k, k) = file.ancilla_eps / (cfg.k - 1);
    const DensityOperator noisy =
        split_run_with_ancilla(cfg, file.rho_s, DensityOperator(anc));
    out["ancilla_eps"] = file.ancilla_eps;
    out["eps_deviation"] = tv_distance(noisy, exact);
  }
  return out;
}

json optimize_cmd(const std::string& problem_path, const std::string& target_path,
                  int iters, int restarts, const GlobalOpts& g) {
  const ControlProblem prob = io::load_problem(problem_path);
  const Channel target = io::load_channel(target_path);
  const RealVector c_target = target_components(target, prob.basis);
  OptimizeOptions opts;
  opts.max_iters = iters;
  opts.restarts = restarts;
  opts.seed = g.seed;
  const OptimizeResult result = optimize(prob, c_target, opts);
  json pulse = json::array();
  for (Index k = 0; k < result.pulse.values.rows(); ++k) {
    json row = json::array();
    for (Index l = 0; l < result.pulse.values.cols(); ++l)
      row.push_back(result.pulse.values(k, l));
    pulse.push_back(std::move(row));
  }
  return json{{"final_cost", result.final_cost},
              {"iterations", result.cost_trace.size()},
              {"pulse", std::move(pulse)},
              {"restart_index", result.restart_index}};
}

thread_local std::string g_last_report;

}  // namespace

const std::string& last_report() { return g_last_report; }

int run(const std::vector<std::string>& args) {
  GlobalOpts g;
  CLI::App app{"joint-unitary synthesis and verification for quantum channels"};
  app.name("qdf");
  app.fallthrough();
  app.add_option("--seed", g.seed, "random seed for searches and sweeps");
  app.add_option("--tol", g.tol, "extremality / decomposition tolerance");
  app.add_option("--out", g.out, "write the JSON report to this path");
  app.add_flag("--json", g.json_out, "print the JSON report to stdout");
  app.require_subcommand(1);

  std::function<json()> action;

  auto* analyze = app.add_subcommand("analyze", "rank, extremality and Choi spectrum");
  {
    auto path = std::make_shared<std::string>();
    analyze->add_option("--channel", *path, "channel file")->required();
    analyze->callback([&, path] { action = [&, path] { return analyze_cmd(*path, g); }; });
  }

  auto* dilate = app.add_subcommand("dilate", "joint unitary realizing a channel");
  {
    auto ch = std::make_shared<std::string>();
    auto env = std::make_shared<std::string>();
    auto m = std::make_shared<Index>(0);
    auto mode = std::make_shared<std::string>("auto");
    dilate->add_option("--channel", *ch, "target channel file")->required();
    dilate->add_option("--env", *env, "environment state file")->required();
    dilate->add_option("--m", *m, "virtual subsystem dimension (default: Kraus rank)");
    dilate->add_option("--mode", *mode, "auto|stinespring|subsystem")
        ->check(CLI::IsMember({"auto", "stinespring", "subsystem"}));
    dilate->callback(
        [&, ch, env, m, mode] { action = [&, ch, env, m, mode] { return dilate_cmd(*ch, *env, *m, *mode, g); }; });
  }

  auto* design = app.add_subcommand("design", "structured designs");
  design->require_subcommand(1);
  {
    auto* stoch = design->add_subcommand("stochastic", "stochastic-unitary target");
    auto spec = std::make_shared<std::string>();
    auto env = std::make_shared<std::string>();
    stoch->add_option("--spec", *spec, "stochastic-spec file")->required();
    stoch->add_option("--env", *env, "environment state file")->required();
    stoch->callback(
        [&, spec, env] { action = [&, spec, env] { return design_stochastic_cmd(*spec, *env, g); }; });

    auto* convex = design->add_subcommand("convex", "convex combination of extreme maps");
    auto cspec = std::make_shared<std::string>();
    auto cenv = std::make_shared<std::string>();
    convex->add_option("--spec", *cspec, "convex-spec file")->required();
    convex->add_option("--env", *cenv, "environment state file")->required();
    convex->callback(
        [&, cspec, cenv] { action = [&, cspec, cenv] { return design_convex_cmd(*cspec, *cenv, g); }; });
  }

  auto* decompose = app.add_subcommand("decompose", "channel decompositions");
  decompose->require_subcommand(1);
  {
    auto* extreme = decompose->add_subcommand("extreme", "extreme-point decomposition");
    auto ch = std::make_shared<std::string>();
    auto max = std::make_shared<Index>(0);
    extreme->add_option("--channel", *ch, "channel file")->required();
    extreme->add_option("--max", *max, "component budget (default d_S^4)");
    extreme->callback([&, ch, max] { action = [&, ch, max] { return decompose_cmd(*ch, *max, g); }; });
  }

  auto* realize = app.add_subcommand("realize", "randomized realizations");
  realize->require_subcommand(1);
  {
    auto* average = realize->add_subcommand("average", "sampled extreme dilations");
    auto ch = std::make_shared<std::string>();
    auto env = std::make_shared<std::string>();
    average->add_option("--channel", *ch, "channel file")->required();
    average->add_option("--env", *env, "environment state file")->required();
    average->callback([&, ch, env] { action = [&, ch, env] { return realize_cmd(*ch, *env, g); }; });
  }

  auto* protocol = app.add_subcommand("protocol", "coherent protocol simulations");
  protocol->require_subcommand(1);
  {
    auto* lv2 = protocol->add_subcommand("lv2", "rank-2 construction, one ancilla qubit");
    auto cfg2 = std::make_shared<std::string>();
    auto cycles2 = std::make_shared<int>(64);
    lv2->add_option("--config", *cfg2, "lv-config file")->required();
    lv2->add_option("--cycles", *cycles2, "averaging cycles");
    lv2->callback([&, cfg2, cycles2] { action = [&, cfg2, cycles2] { return protocol_rank2_cmd(*cfg2, *cycles2); }; });

    auto* lv3 = protocol->add_subcommand("lv3", "nested rank-3 construction");
    auto cfg3 = std::make_shared<std::string>();
    auto cycles3 = std::make_shared<int>(64);
    lv3->add_option("--config", *cfg3, "lv-config file with m2")->required();
    lv3->add_option("--cycles", *cycles3, "averaging cycles per stage");
    lv3->callback([&, cfg3, cycles3] { action = [&, cfg3, cycles3] { return protocol_rank3_cmd(*cfg3, *cycles3); }; });

    auto* fbdd = protocol->add_subcommand("fbdd", "feedback decoupling at time T");
    auto cfgf = std::make_shared<std::string>();
    fbdd->add_option("--config", *cfgf, "fbdd-config file")->required();
    fbdd->callback([&, cfgf] { action = [&, cfgf] { return protocol_fbdd_cmd(*cfgf); }; });

    auto* split = protocol->add_subcommand("split", "splitting-subspace stabilization");
    auto cfgs = std::make_shared<std::string>();
    split->add_option("--config", *cfgs, "split-config file")->required();
    split->callback([&, cfgs] { action = [&, cfgs] { return protocol_split_cmd(*cfgs); }; });
  }

  auto* opt = app.add_subcommand("optimize", "steer a pulse toward a target channel");
  {
    auto prob = std::make_shared<std::string>();
    auto target = std::make_shared<std::string>();
    auto iters = std::make_shared<int>(500);
    auto restarts = std::make_shared<int>(4);
    opt->add_option("--problem", *prob, "problem file")->required();
    opt->add_option("--target", *target, "target channel file")->required();
    opt->add_option("--iters", *iters, "iteration budget per restart");
    opt->add_option("--restarts", *restarts, "restart budget");
    opt->callback([&, prob, target, iters, restarts] {
      action = [&, prob, target, iters, restarts] {
        return optimize_cmd(*prob, *target, *iters, *restarts, g);
      };
    });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help() << std::endl;
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return 64;
  }

  std::string command = "qdf";
  for (const auto& a : args) command += " " + a;

  json report;
  int code = 0;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    report = action();
    if (report.contains("infeasible")) code = 2;
  } catch (const InfeasibleError& e) {
    report = json{{"infeasible", e.what()}};
    code = 2;
  } catch (const ValidationError& e) {
    report = json{{"error", e.what()}};
    code = 1;
  } catch (const std::exception& e) {
    report = json{{"error", e.what()}};
    code = 1;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  report["command"] = command;
  report["seed"] = g.seed;
  report["tolerances"] = json{{"tol", g.tol}};
  const std::string text = io::canonical_dump(report);
  g_last_report = text;

  if (!g.out.empty()) io::write_file_atomic(g.out, text);
  if (g.json_out) {
    std::cout << text << std::endl;
  } else {
    for (auto it = report.begin(); it != report.end(); ++it)
      if (it.value().is_primitive())
        std::cout << it.key() << ": " << it.value().dump() << "\n";
  }
  // wall time stays out of the report so identical runs stay byte-identical
  std::cerr << "wall_time_s: " << wall << std::endl;
  return code;
}

}  // namespace qdf::cli
