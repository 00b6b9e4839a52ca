#include "doctest.h"
#include "models.hpp"
#include "schema_check.hpp"
#include "wristkit/json_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace {

std::string cli() { return WRISTKIT_CLI_PATH; }
std::string schemaPath(const std::string& name) {
  return std::string(WRISTKIT_SCHEMA_DIR) + "/" + name;
}

int run(const std::string& args, const std::string& stdout_file = "cli_out.txt") {
  const std::string cmd = cli() + " " + args + " > " + stdout_file + " 2> cli_err.txt";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void checkSchema(const std::string& json_path, const std::string& schema) {
  std::string error;
  const bool ok =
      schemacheck::validateFile(wristkit::loadJsonFile(json_path), schemaPath(schema), &error);
  CAPTURE(error);
  CHECK(ok);
}

}  // namespace

TEST_CASE("fk subcommand emits a valid report") {
  const int rc = run("fk --robot " + testmodels::dataPath("robots/arm_pkm_wrist.json") +
                     " --q 0,0,0,0,0,0 --out fk_report.json");
  CHECK(rc == 0);
  checkSchema("fk_report.json", "fk.schema.json");
  const auto j = wristkit::loadJsonFile("fk_report.json");
  CHECK(j.at("robot") == "arm_pkm_wrist");
  CHECK(j.at("ee").at("translation").size() == 3);
}

TEST_CASE("ik subcommand solves a reachable pose") {
  const int rc = run("ik --robot " + testmodels::dataPath("robots/arm_pkm_wrist.json") +
                     " --pos 0.45,0.05,0.35 --position-only --out ik_report.json");
  CHECK(rc == 0);
  checkSchema("ik_report.json", "ik.schema.json");
  const auto j = wristkit::loadJsonFile("ik_report.json");
  CHECK(j.at("converged") == true);
  CHECK(j.at("position_residual_m").get<double>() < 1e-4);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("fk --robot nonexistent.json") == 2);  // missing required --q
  CHECK(run("no-such-subcommand") == 2);
  CHECK(run("fk --robot x.json --q 0 --definitely-not-a-flag 1") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("domain errors exit with code 1 and a JSON diagnostic") {
  const int rc = run("fk --robot nonexistent.json --q 0,0,0,0,0,0");
  CHECK(rc == 1);
  const std::string err = slurp("cli_err.txt");
  const auto j = wristkit::Json::parse(err);
  CHECK(j.contains("error"));
  CHECK(j.contains("message"));
}

TEST_CASE("reqs subcommand reproduces the fixture verdicts") {
  const int rc = run("reqs --csv " + testmodels::dataPath("fixtures/requirements_table.csv") +
                     " --out reqs_report.json");
  CHECK(rc == 0);
  checkSchema("reqs_report.json", "reqs.schema.json");
  const auto j = wristkit::loadJsonFile("reqs_report.json");
  CHECK(j.at("passed") == 10);
  CHECK(j.at("marginal") == 2);
  CHECK(j.at("failed") == 0);
}

TEST_CASE("actuator-check subcommand") {
  const int rc = run("actuator-check --spec " + testmodels::dataPath("actuator/qdd_wrist.json") +
                     " --out act_report.json");
  CHECK(rc == 0);
  checkSchema("act_report.json", "actuator_check.schema.json");
  const auto j = wristkit::loadJsonFile("act_report.json");
  CHECK(j.at("output_torque").at("value_nm").get<double>() == doctest::Approx(3.25));
}

TEST_CASE("demolog-stats subcommand") {
  const int rc = run("demolog-stats --csv " + testmodels::dataPath("fixtures/demos_sample.csv") +
                     " --task fridge --robot arm_pkm_wrist --out demo_report.json"
                     " --csv-out demo_report.csv");
  CHECK(rc == 0);
  checkSchema("demo_report.json", "demolog_stats.schema.json");
  const auto j = wristkit::loadJsonFile("demo_report.json");
  CHECK(j.at("selection").at("mean_operator_time_s").get<double>() == doctest::Approx(39.5));
  const std::string csv = slurp("demo_report.csv");
  CHECK(csv.find("task,robot,episodes") == 0);
}

TEST_CASE("workspace + compare round trip on a coarse grid") {
  const std::string robot_a = testmodels::dataPath("robots/arm_serial_wrist.json");
  const std::string robot_b = testmodels::dataPath("robots/arm_pkm_wrist.json");
  const std::string scene = testmodels::dataPath("scenes/cabinet.json");

  CHECK(run("workspace --robot " + robot_a + " --scene " + scene +
            " --grid 5x5x5 --threads 2 --seed 0 --out ws_a.json") == 0);
  CHECK(run("workspace --robot " + robot_b + " --scene " + scene +
            " --grid 5x5x5 --threads 2 --seed 0 --out ws_b.json --heatmap ws_b.ppm") == 0);
  checkSchema("ws_a.json", "workspace.schema.json");
  checkSchema("ws_b.json", "workspace.schema.json");

  CHECK(run("compare ws_a.json ws_b.json --out cmp.json") == 0);
  checkSchema("cmp.json", "compare.schema.json");
  const auto cmp = wristkit::loadJsonFile("cmp.json");
  CHECK(cmp.at("reachable_b").get<int>() >= 0);

  // Heatmap slices exist, one per z layer.
  std::ifstream ppm("ws_b_z00.ppm", std::ios::binary);
  CHECK(ppm.good());

  // Determinism at the CLI level: identical bytes for identical seed.
  CHECK(run("workspace --robot " + robot_b + " --scene " + scene +
            " --grid 5x5x5 --threads 1 --seed 0 --out ws_b2.json") == 0);
  CHECK(slurp("ws_b.json") == slurp("ws_b2.json"));

  // Mismatched grids are a domain error (exit 1).
  CHECK(run("workspace --robot " + robot_a + " --scene " + scene +
            " --grid 4x4x4 --threads 2 --out ws_small.json") == 0);
  CHECK(run("compare ws_a.json ws_small.json") == 1);
}

TEST_CASE("ik trajectory mode writes a setpoint stream") {
  {
    std::ofstream traj("cli_traj.csv");
    traj << "t,x,y,z,qw,qx,qy,qz\n";
    traj << "0.0,0.45,0.0,0.30,1,0,0,0\n";
    traj << "0.2,0.45,0.05,0.30,1,0,0,0\n";
  }
  const int rc = run("ik --robot " + testmodels::dataPath("robots/arm_pkm_wrist.json") +
                     " --trajectory cli_traj.csv --duration 0.5 --position-only"
                     " --out setpoints.csv");
  CHECK(rc == 0);
  const std::string head = slurp("setpoints.csv").substr(0, 20);
  CHECK(head.find("t,q0,q1") == 0);
  std::ifstream in("setpoints.csv");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 501);  // header + 0.5 s at 1 kHz
}
