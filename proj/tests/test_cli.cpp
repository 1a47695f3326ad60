#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "expfam/report.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

std::string cli_path() {
  const char* p = std::getenv("EXPFAM_CLI");
  REQUIRE_MESSAGE(p != nullptr, "EXPFAM_CLI must point at the built binary");
  return p;
}

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) r.output += buf;
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string workdir() {
  const fs::path d = "/tmp/expfam_cli_test";
  fs::create_directories(d);
  return d.string();
}

std::string write_gamma_data() {
  // twelve values with mean exactly 2, so the gamma ML rate estimate is 1/2
  const std::string path = workdir() + "/gamma.dat";
  expfam::write_text_file(path,
                          "# sample\n0.5\n1.0\n1.5\n2.0\n2.5\n3.0\n0.8\n1.2\n"
                          "2.2\n2.8\n3.2\n3.3\n");
  return path;
}

}  // namespace

TEST_CASE("--version prints the library version") {
  const RunResult r = run("--version");
  CHECK(r.status == 0);
  CHECK(r.output.find("1.0.0") != std::string::npos);
}

TEST_CASE("fit --json emits all three methods with sane values") {
  const std::string data = write_gamma_data();
  const RunResult r = run("fit --dist gamma --params alpha=2,beta=0.5 --data " + data + " --json");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.output);
  for (const char* m : {"closed_form", "map_numeric", "ml_numeric"}) {
    REQUIRE(j.contains(m));
    CHECK(j[m].contains("mu"));
    CHECK(j[m].contains("sigma"));
    CHECK(j[m]["failure"].get<std::string>() == "none");
  }
  // gamma ML: the rate mu*sigma equals shape/mean, so sigma = 1/mean = 0.5
  CHECK(j["ml_numeric"]["sigma"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(j["closed_form"]["diagnostics"]["residual_sigma_eq"].get<double>()) < 1e-8);
  CHECK(std::abs(j["closed_form"]["diagnostics"]["residual_mu_eq"].get<double>()) < 1e-8);
  CHECK(j["map_numeric"]["report"]["converged"].get<bool>());
}

TEST_CASE("fit human output is labeled per method") {
  const std::string data = write_gamma_data();
  const RunResult r =
      run("fit --dist gamma --params alpha=2,beta=0.5 --data " + data + " --method closed");
  REQUIRE(r.status == 0);
  CHECK(r.output.find("method: closed_form") != std::string::npos);
  CHECK(r.output.find("mu_hat:") != std::string::npos);
  CHECK(r.output.find("sigma_hat:") != std::string::npos);
  CHECK(r.output.find("map_numeric") == std::string::npos);
}

TEST_CASE("fit reports fixed parameters instead of estimating them") {
  const std::string data = write_gamma_data();
  const RunResult r =
      run("fit --dist rayleigh --params beta=3 --data " + data + " --method closed --json");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j["closed_form"]["fixed"]["mu"].get<double>() == 1.0);
  CHECK(!j["closed_form"].contains("mu"));
  CHECK(j["closed_form"].contains("sigma"));
}

TEST_CASE("fit configuration problems exit 2") {
  const std::string data = write_gamma_data();
  RunResult r = run("fit --dist no_such_family --data " + data);
  CHECK(r.status == 2);
  CHECK(r.output.find("config error") != std::string::npos);

  r = run("fit --dist gamma --params alpha=2,beta=0.5,bogus=1 --data " + data);
  CHECK(r.status == 2);

  r = run("fit --dist gamma --params alpha=2,beta=0.5 --data " + data + " --method magic");
  CHECK(r.status == 2);

  r = run("fit --dist gamma --params alpha=2,beta=0.5");  // neither --data nor --stdin
  CHECK(r.status == 2);

  r = run("fit --dist gamma --params alpha=2,beta=0.5 --data " + data + " --stdin");  // both
  CHECK(r.status == 2);

  r = run("fit --dist gamma --params alpha=2,beta=0.5 --data " + data + " --hp gamma=1");
  CHECK(r.status == 2);
}

TEST_CASE("fit data problems exit 3") {
  RunResult r = run("fit --dist gamma --params alpha=2,beta=0.5 --data /tmp/expfam_no_file");
  CHECK(r.status == 3);
  CHECK(r.output.find("data error") != std::string::npos);

  const std::string bad = workdir() + "/bad.dat";
  expfam::write_text_file(bad, "1.0\nnot_a_number\n2.0\n");
  r = run("fit --dist gamma --params alpha=2,beta=0.5 --data " + bad);
  CHECK(r.status == 3);
  CHECK(r.output.find("line 2") != std::string::npos);

  const std::string neg = workdir() + "/neg.dat";
  expfam::write_text_file(neg, "1.0\n-3.0\n");
  r = run("fit --dist gamma --params alpha=2,beta=0.5 --data " + neg);
  CHECK(r.status == 3);

  const std::string empty = workdir() + "/empty.dat";
  expfam::write_text_file(empty, "# nothing\n\n");
  r = run("fit --dist gamma --params alpha=2,beta=0.5 --data " + empty);
  CHECK(r.status == 3);
}

TEST_CASE("fit reads stdin when asked") {
  const std::string cmd = std::string("printf '1.0\\n2.0\\n3.0\\n1.5\\n2.5\\n' | ") +
                          cli_path() +
                          " fit --dist gamma --params alpha=2,beta=0.5 --stdin --method ml 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) out += buf;
  const int raw = pclose(pipe);
  CHECK(WEXITSTATUS(raw) == 0);
  CHECK(out.find("method: ml_numeric") != std::string::npos);
}

TEST_CASE("a degenerate sample is an estimation failure, exit 4") {
  // chi-squared ties sigma to mu through the scale link; all-equal data at 1
  // makes the mean log statistic vanish and the link equation insoluble
  const std::string ones = workdir() + "/ones.dat";
  expfam::write_text_file(ones, "1\n1\n1\n1\n1\n1\n1\n1\n");
  const RunResult r = run("fit --dist chi_squared --params nu=4 --data " + ones + " --method closed");
  CHECK(r.status == 4);
  CHECK(r.output.find("estimation failure") != std::string::npos);
}

TEST_CASE("simulate writes results.csv and manifest.json") {
  const std::string dir = workdir() + "/sim";
  fs::remove_all(dir);
  const std::string cfg = workdir() + "/sim.cfg";
  expfam::write_text_file(cfg,
                          "distribution = gamma s=-1\n"
                          "true_mu = 2\ntrue_sigma = 1\n"
                          "n_grid = 5,10\nreplications = 25\n"
                          "methods = closed_form\nseed = 31\n");
  const RunResult r = run("simulate --config " + cfg + " --out " + dir, "EXPFAM_THREADS=2");
  REQUIRE(r.status == 0);
  const auto rows = expfam::parse_results_csv(expfam::read_text_file(dir + "/results.csv"));
  CHECK(rows.size() == 4);  // 1 dist x 1 method x 2 n x 2 parameters
  const auto manifest = nlohmann::json::parse(expfam::read_text_file(dir + "/manifest.json"));
  CHECK(manifest["seed"].get<std::uint64_t>() == 31);
  CHECK(manifest["cells"].size() == 2);
  CHECK(manifest["errors"].empty());
}

TEST_CASE("simulate output bytes do not depend on the worker count") {
  const std::string cfg = workdir() + "/det.cfg";
  expfam::write_text_file(cfg,
                          "distribution = weibull delta=2 s=-2\n"
                          "n_grid = 8,16\nreplications = 40\n"
                          "methods = closed_form,ml_numeric\nseed = 99\n");
  const std::string d1 = workdir() + "/det1", d8 = workdir() + "/det8";
  REQUIRE(run("simulate --config " + cfg + " --out " + d1, "EXPFAM_THREADS=1").status == 0);
  REQUIRE(run("simulate --config " + cfg + " --out " + d8, "EXPFAM_THREADS=8").status == 0);
  CHECK(expfam::read_text_file(d1 + "/results.csv") ==
        expfam::read_text_file(d8 + "/results.csv"));
}

TEST_CASE("simulate honors command-line overrides") {
  const std::string cfg = workdir() + "/ovr.cfg";
  expfam::write_text_file(cfg,
                          "distribution = gamma s=-1\n"
                          "n_grid = 100,200\nreplications = 1000\n"
                          "methods = closed_form\nseed = 1\n");
  const std::string dir = workdir() + "/ovr";
  const RunResult r = run("simulate --config " + cfg + " --out " + dir +
                              " --n-grid 5,10 --reps 10 --seed 77",
                          "EXPFAM_THREADS=1");
  REQUIRE(r.status == 0);
  const auto manifest = nlohmann::json::parse(expfam::read_text_file(dir + "/manifest.json"));
  CHECK(manifest["config"]["n_grid"] == nlohmann::json::array({5, 10}));
  CHECK(manifest["config"]["replications"].get<int>() == 10);
  CHECK(manifest["seed"].get<std::uint64_t>() == 77);
}

TEST_CASE("simulate configuration problems exit 2") {
  RunResult r = run("simulate --config /tmp/expfam_no_cfg");
  CHECK(r.status == 2);

  const std::string cfg = workdir() + "/bad.cfg";
  expfam::write_text_file(cfg, "distribution = gamma\nwhat = 1\nreplications = 5\n");
  r = run("simulate --config " + cfg);
  CHECK(r.status == 2);
  CHECK(r.output.find("config error") != std::string::npos);

  const std::string ok = workdir() + "/ok.cfg";
  expfam::write_text_file(ok,
                          "distribution = gamma s=-1\nn_grid = 5\nreplications = 5\n"
                          "methods = closed_form\n");
  r = run("simulate --config " + ok, "EXPFAM_THREADS=banana");
  CHECK(r.status == 2);
  CHECK(r.output.find("EXPFAM_THREADS") != std::string::npos);
}

TEST_CASE("plot renders one svg and dat per distribution-parameter") {
  const std::string dir = workdir() + "/sim";  // produced by the simulate test
  if (!fs::exists(dir + "/results.csv")) {
    const std::string cfg = workdir() + "/sim.cfg";
    expfam::write_text_file(cfg,
                            "distribution = gamma s=-1\n"
                            "n_grid = 5,10\nreplications = 25\n"
                            "methods = closed_form\nseed = 31\n");
    REQUIRE(run("simulate --config " + cfg + " --out " + dir, "EXPFAM_THREADS=1").status == 0);
  }
  const std::string out = workdir() + "/plots";
  fs::remove_all(out);
  const RunResult r = run("plot --in " + dir + "/results.csv --out " + out);
  REQUIRE(r.status == 0);
  for (const char* f : {"gamma_mu.svg", "gamma_mu.dat", "gamma_sigma.svg", "gamma_sigma.dat"})
    CHECK(fs::exists(out + "/" + f));
  const std::string svg = expfam::read_text_file(out + "/gamma_mu.svg");
  CHECK(svg.rfind("<svg ", 0) == 0);
}

TEST_CASE("plot rejects malformed input with exit 3") {
  const std::string bad = workdir() + "/bad.csv";
  expfam::write_text_file(bad, "not,a,results,file\n1,2,3,4\n");
  const RunResult r = run("plot --in " + bad + " --out " + workdir());
  CHECK(r.status == 3);
  CHECK(r.output.find("data error") != std::string::npos);
}

TEST_CASE("argument parse errors exit 2") {
  CHECK(run("").status == 2);             // a subcommand is required
  CHECK(run("fit").status != 0);          // --dist is required
  CHECK(run("frobnicate").status == 2);   // unknown subcommand
  CHECK(run("simulate").status != 0);     // --config is required
}
