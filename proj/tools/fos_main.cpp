#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "fos/config.hpp"
#include "fos/errors.hpp"
#include "fos/orlicz.hpp"
#include "fos/verify.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNoConverge = 4;
constexpr int kExitRegime = 5;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<long> seed;
  bool deterministic = false;
};

fos::RunConfig load_config(const CommonArgs& args) {
  fos::RunConfig cfg = fos::parse_config_file(args.config_path);
  if (args.seed) {
    cfg.seed = static_cast<std::uint64_t>(*args.seed);
    cfg.solver.rng_seed = cfg.seed;
  }
  if (args.deterministic) {
    cfg.deterministic = true;
    cfg.solver.deterministic_reduction = true;
  }
  return cfg;
}

std::ofstream open_out(const CommonArgs& args, const std::string& name) {
  fs::create_directories(args.out_dir);
  const fs::path p = fs::path(args.out_dir) / name;
  std::ofstream os(p);
  if (!os) throw fos::DataError("cannot write '" + p.string() + "'");
  return os;
}

int cmd_nfun(const CommonArgs& args) {
  const fos::RunConfig cfg = load_config(args);
  const fos::NFunction nf = cfg.build_nfunction();
  std::printf("nfunction: %s\n", nf.name().c_str());
  std::printf("p_lower=%.12g p_upper=%.12g%s\n", nf.p_lower(), nf.p_upper(),
              nf.indices_estimated() ? " (grid estimate)" : "");
  std::printf("%12s %16s %16s %16s %16s\n", "t", "A(t)", "a(t)", "abar(t)", "Abar(t)");
  for (const double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    std::printf("%12g %16.10g %16.10g %16.10g %16.10g\n", t, nf.value(t), nf.density(t),
                nf.conjugate_density(t), nf.conjugate_value(t));
  }
  std::printf("delta2_constant=%.12g (bound 2^p_upper=%.12g)\n", nf.delta2_constant(),
              std::pow(2.0, nf.p_upper()));
  std::printf("conjugate_composition_ratio=%.12g\n", nf.conjugate_composition_ratio());
  return kExitOk;
}

int cmd_norm(const CommonArgs& args, const std::string& csv_path) {
  const fos::RunConfig cfg = load_config(args);
  const auto gd = cfg.build_grid();
  const auto kt = cfg.build_kernel(gd);
  const fos::NFunction nf = cfg.build_nfunction();

  std::ifstream is(csv_path);
  if (!is) throw fos::DataError("cannot open '" + csv_path + "'");
  const fos::GridFunction u = fos::read_grid_function_csv(is, gd);

  const fos::NormReport rep = fos::norm_report(nf, *kt, u, cfg.reduction());
  fos::write_norm_report_kv(std::cout, rep);
  auto txt = open_out(args, "norm_report.txt");
  fos::write_norm_report_kv(txt, rep);
  auto csv = open_out(args, "norm_report.csv");
  fos::write_norm_report_csv(csv, rep, true);
  return kExitOk;
}

int cmd_verify(const CommonArgs& args) {
  const fos::RunConfig cfg = load_config(args);
  const auto lines = fos::run_verification(cfg);
  const bool ok = fos::write_verification_report(std::cout, lines);
  auto rep = open_out(args, "verify_report.txt");
  fos::write_verification_report(rep, lines);
  return ok ? kExitOk : kExitVerifyFail;
}

int cmd_solve(const CommonArgs& args) {
  const fos::RunConfig cfg = load_config(args);
  const auto gd = cfg.build_grid();
  const auto kt = cfg.build_kernel(gd);
  const fos::OperatorContext ctx{cfg.build_nfunction(), kt, cfg.reduction()};
  const fos::Nonlinearity nl = cfg.build_nonlinearity();
  const fos::Solution sol = fos::minimize(ctx, nl, cfg.build_solver_config());

  auto csv = open_out(args, "solution.csv");
  fos::write_grid_function_csv(csv, sol.u);
  auto meta = open_out(args, "solution_meta.txt");
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g", sol.energy);
  meta << "energy=" << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", sol.grad_norm);
  meta << "grad_norm=" << buf << "\n"
       << "iters=" << sol.iters << "\n"
       << "converged=" << (sol.converged ? "true" : "false") << "\n"
       << "nontrivial=" << (sol.nontrivial ? "true" : "false") << "\n";
  if (sol.seed_t) {
    std::snprintf(buf, sizeof buf, "%.17g", *sol.seed_t);
    meta << "seed_t=" << buf << "\n";
  } else {
    meta << "seed_t=none\n";
  }
  std::snprintf(buf, sizeof buf, "%.6g", gd->truncation_tail_bound(cfg.s));
  meta << "truncation_tail_bound=" << buf << "\n";
  fos::write_config_echo(meta, cfg);

  std::printf("energy=%.12g grad_norm=%.3g iters=%ld converged=%s nontrivial=%s\n", sol.energy,
              sol.grad_norm, sol.iters, sol.converged ? "true" : "false",
              sol.nontrivial ? "true" : "false");
  return sol.converged ? kExitOk : kExitNoConverge;
}

int cmd_lambda1(const CommonArgs& args) {
  const fos::RunConfig cfg = load_config(args);
  const auto gd = cfg.build_grid();
  const auto kt = cfg.build_kernel(gd);
  const fos::OperatorContext ctx{cfg.build_nfunction(), kt, cfg.reduction()};
  const fos::Lambda1Result res = fos::lambda1_estimate(ctx, cfg.build_solver_config());
  std::printf("lambda1_upper_bound=%.12g\n", res.value);
  auto csv = open_out(args, "lambda1_minimizer.csv");
  fos::write_grid_function_csv(csv, res.minimizer);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional Orlicz-Sobolev toolkit"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string norm_csv;

  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "problem description file")->required();
    sub->add_option("--out", common.out_dir, "output directory");
    sub->add_option("--seed", common.seed, "override run.seed");
    sub->add_flag("--deterministic", common.deterministic,
                  "force deterministic reductions regardless of config");
  };

  CLI::App* nfun = app.add_subcommand("nfun", "report the configured Young function");
  add_common(nfun);
  CLI::App* norm = app.add_subcommand("norm", "norms of a grid function read from CSV");
  add_common(norm);
  norm->add_option("csv", norm_csv, "grid function CSV")->required();
  CLI::App* verify = app.add_subcommand("verify", "run the inequality certification suite");
  add_common(verify);
  CLI::App* solve = app.add_subcommand("solve", "minimize the energy functional");
  add_common(solve);
  CLI::App* lambda1 = app.add_subcommand("lambda1", "estimate the first eigenvalue quotient");
  add_common(lambda1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (nfun->parsed()) return cmd_nfun(common);
    if (norm->parsed()) return cmd_norm(common, norm_csv);
    if (verify->parsed()) return cmd_verify(common);
    if (solve->parsed()) return cmd_solve(common);
    if (lambda1->parsed()) return cmd_lambda1(common);
  } catch (const fos::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const fos::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const fos::RegimeError& e) {
    std::fprintf(stderr, "regime error: %s\n", e.what());
    return kExitRegime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
