#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path log = fs::path("cli_tmp") / ("log" + std::to_string(counter++) + ".txt");
  fs::create_directories("cli_tmp");
  const std::string cmd = std::string(FOS_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult res;
  res.code = (status >= 256) ? status / 256 : status;  // POSIX wait status
  std::ifstream is(log);
  std::stringstream ss;
  ss << is.rdbuf();
  res.out = ss.str();
  return res;
}

std::string write_file(const std::string& name, const std::string& text) {
  fs::create_directories("cli_tmp");
  const fs::path p = fs::path("cli_tmp") / name;
  std::ofstream os(p);
  os << text;
  return p.string();
}

// small, quick variant of the benchmark problem
std::string quick_config(const std::string& extra_nfun = "", const std::string& nl = R"([nonlinearity]
form = pure_power
theta1 = 1
theta2 = 1
q = 1.5
)") {
  return R"([nfunction]
kind = power_normalized
p = 2.0
)" + extra_nfun +
         R"(
[domain]
dim = 1
box_lo = 0
box_hi = 3
h = 0.05
omega_lo = 1
omega_hi = 2
omega0_lo = 1.25
omega0_hi = 1.75
s = 0.5
ball_center = 0.4
ball_radius = 0.3
)" + nl + R"(
[solver]
grad_tol = 1e-5
max_iters = 50000
lambda1_restarts = 5

[run]
seed = 42
deterministic = true
threads = 1
)";
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli nfun reports the indices") {
  const auto cfg = write_file("nfun.cfg", quick_config());
  const auto res = run_cli("nfun --config " + cfg);
  CHECK(res.code == 0);
  CHECK(res.out.find("p_lower=2") != std::string::npos);

  std::string pl = quick_config();
  const auto at = pl.find("kind = power_normalized");
  pl.replace(at, std::string("kind = power_normalized").size(), "kind = power_log");
  const auto plog = run_cli("nfun --config " + write_file("nfun_pl.cfg", pl));
  CHECK(plog.code == 0);
  CHECK(plog.out.find("p_lower=2 p_upper=3") != std::string::npos);

  const auto bad = write_file("badkind.cfg",
                              "[nfunction]\nkind = exponential\np = 2\n[domain]\ndim = 1\n"
                              "box_lo = 0\nbox_hi = 3\nh = 0.5\nomega_lo = 1\nomega_hi = 2\n");
  CHECK(run_cli("nfun --config " + bad).code == 2);
}

TEST_CASE("cli norm: zero function, malformed csv, order mismatch") {
  const auto cfg = write_file("norm.cfg", quick_config());

  std::ostringstream zeros;
  zeros << "x,u\n";
  for (int k = 0; k <= 60; ++k) zeros << (0.05 * k) << ",0\n";
  const auto csv = write_file("zero.csv", zeros.str());
  const auto res = run_cli("norm --config " + cfg + " --out cli_tmp/norm_out " + csv);
  CHECK(res.code == 0);
  CHECK(res.out.find("luxemburg=0") != std::string::npos);
  CHECK(res.out.find("full_norm=0") != std::string::npos);

  const auto garbled = write_file("garbled.csv", "x,u\n0,zero\n");
  CHECK(run_cli("norm --config " + cfg + " " + garbled).code == 3);

  std::ostringstream shuffled;  // right header, wrong first coordinate
  shuffled << "x,u\n0.05,0\n";
  const auto bad_order = write_file("order.csv", shuffled.str());
  CHECK(run_cli("norm --config " + cfg + " " + bad_order).code == 3);
}

TEST_CASE("cli verify passes on the quick problem and fails under an injected index fault") {
  const auto cfg = write_file("verify.cfg", quick_config());
  const auto res = run_cli("verify --config " + cfg + " --out cli_tmp/verify_out");
  CHECK(res.code == 0);
  CHECK(res.out.find("ALL CHECKS PASS") != std::string::npos);
  CHECK(res.out.find("FAIL") == std::string::npos);
  CHECK(slurp("cli_tmp/verify_out/verify_report.txt").find("ALL CHECKS PASS") !=
        std::string::npos);

  // force wrong growth indices: the modular-seminorm sandwich must fail
  const auto broken = write_file(
      "verify_broken.cfg",
      quick_config("index_override_lower = 1.2\nindex_override_upper = 1.3\n"));
  const auto bad = run_cli("verify --config " + broken);
  CHECK(bad.code == 1);
  CHECK(bad.out.find("sandwich") != std::string::npos);
  const auto pos = bad.out.find("sandwich");
  CHECK(bad.out.substr(pos, bad.out.find('\n', pos) - pos).find("FAIL") != std::string::npos);
}

TEST_CASE("cli solve: converges, writes solution files, honors the regime guard") {
  const auto cfg = write_file("solve.cfg", quick_config());
  const auto res = run_cli("solve --config " + cfg + " --out cli_tmp/solve_out");
  CHECK(res.code == 0);
  CHECK(res.out.find("nontrivial=true") != std::string::npos);
  const std::string meta = slurp("cli_tmp/solve_out/solution_meta.txt");
  CHECK(meta.find("converged=true") != std::string::npos);
  CHECK(meta.find("nontrivial=true") != std::string::npos);
  CHECK(meta.find("truncation_tail_bound=") != std::string::npos);
  CHECK(slurp("cli_tmp/solve_out/solution.csv").find("x,u\n") == 0);

  {  // theta2 = 0: trivial solution
    const auto trivial_cfg = write_file("solve_trivial.cfg", quick_config("", R"([nonlinearity]
form = pure_power
theta1 = 1
theta2 = 0
q = 1.5
)"));
    const auto triv = run_cli("solve --config " + trivial_cfg + " --out cli_tmp/solve_triv");
    CHECK(triv.code == 0);
    CHECK(triv.out.find("nontrivial=false") != std::string::npos);
  }

  {  // q = p_lower with oversized theta1: exit 5
    const auto guarded = write_file("solve_guard.cfg", quick_config("", R"([nonlinearity]
form = pure_power
theta1 = 1000
theta2 = 1000
q = 2.0
)"));
    const auto refused = run_cli("solve --config " + guarded);
    CHECK(refused.code == 5);
  }

  {  // q > p_lower: exit 5
    const auto super = write_file("solve_super.cfg", quick_config("", R"([nonlinearity]
form = pure_power
theta1 = 1
theta2 = 1
q = 2.5
)"));
    CHECK(run_cli("solve --config " + super).code == 5);
  }
}

TEST_CASE("cli solve: starving the iteration budget exits 4") {
  std::string text = quick_config();
  const auto pos = text.find("max_iters = 50000");
  text.replace(pos, std::string("max_iters = 50000").size(), "max_iters = 3");
  const auto cfg = write_file("starved.cfg", text);
  const auto res = run_cli("solve --config " + cfg + " --out cli_tmp/starved");
  CHECK(res.code == 4);
  CHECK(slurp("cli_tmp/starved/solution_meta.txt").find("converged=false") != std::string::npos);
}

TEST_CASE("cli verify: source-term-free checks ignore the nonlinearity settings") {
  const auto a = write_file("theta_a.cfg", quick_config());
  const auto b = write_file("theta_b.cfg", quick_config("", R"([nonlinearity]
form = shifted_power
theta1 = 3
theta2 = 0.5
q = 1.8
eps = 0.25
)"));
  const auto ra = run_cli("verify --config " + a);
  const auto rb = run_cli("verify --config " + b);
  CHECK(ra.code == 0);
  CHECK(rb.code == 0);
  for (const std::string check : {"young_nonneg", "young_equality", "holder", "sandwich",
                                  "poincare", "conjugate_composition_ratio", "pairing_bracket"}) {
    const auto la = ra.out.substr(ra.out.find(check));
    const auto lb = rb.out.substr(rb.out.find(check));
    CHECK(la.substr(0, la.find('\n')) == lb.substr(0, lb.find('\n')));
  }
}

TEST_CASE("cli solve: deterministic reruns are byte-identical") {
  const auto cfg = write_file("det.cfg", quick_config());
  CHECK(run_cli("solve --config " + cfg + " --deterministic --out cli_tmp/det_a").code == 0);
  CHECK(run_cli("solve --config " + cfg + " --deterministic --out cli_tmp/det_b").code == 0);
  CHECK(slurp("cli_tmp/det_a/solution.csv") == slurp("cli_tmp/det_b/solution.csv"));
  CHECK(slurp("cli_tmp/det_a/solution_meta.txt") == slurp("cli_tmp/det_b/solution_meta.txt"));
}

TEST_CASE("cli lambda1 prints an estimate and writes the minimizer") {
  const auto cfg = write_file("lam.cfg", quick_config());
  const auto res = run_cli("lambda1 --config " + cfg + " --out cli_tmp/lam_out");
  CHECK(res.code == 0);
  CHECK(res.out.find("lambda1_upper_bound=") != std::string::npos);
  const double value = std::strtod(res.out.c_str() + res.out.find('=') + 1, nullptr);
  CHECK(value > 0.0);
  CHECK(slurp("cli_tmp/lam_out/lambda1_minimizer.csv").find("x,u\n") == 0);

  // a different seed moves the estimate by at most a few percent
  const auto res2 = run_cli("lambda1 --config " + cfg + " --seed 777 --out cli_tmp/lam_out2");
  CHECK(res2.code == 0);
  const double value2 = std::strtod(res2.out.c_str() + res2.out.find('=') + 1, nullptr);
  CHECK(std::abs(value - value2) <= 0.05 * value);
}

TEST_CASE("cli rejects missing and malformed configs") {
  CHECK(run_cli("verify --config cli_tmp/absent.cfg").code == 2);
  const auto dup = write_file("dup.cfg", "[nfunction]\nmystery_key = 1\n");
  CHECK(run_cli("nfun --config " + dup).code == 2);
  const auto bad_s =
      write_file("bads.cfg", quick_config() + "\n[domain]\ns = 1.5\n");  // s out of range
  CHECK(run_cli("verify --config " + bad_s).code == 2);
}
