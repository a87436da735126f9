#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <string>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd = env_prefix + std::string(HAMLOW_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) result.output.append(buf.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "hamlow_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

json strip_timestamp(json j) {
  j.erase("timestamp");
  return j;
}

}  // namespace

TEST_CASE("gen_is_deterministic_and_validates") {
  const auto dir = work_dir();
  const std::string a = (dir / "a.json").string();
  const std::string b = (dir / "b.json").string();
  CHECK(run("gen --n 8 --k 3 --m 16 --seed 7 --out " + a).exit_code == 0);
  CHECK(run("gen --n 8 --k 3 --m 16 --seed 7 --out " + b).exit_code == 0);
  CHECK(slurp(a) == slurp(b));

  const auto instance = json::parse(slurp(a));
  CHECK(instance["n"] == 8);
  REQUIRE(instance["terms"].size() == 16);
  for (const auto& t : instance["terms"]) CHECK(t["qubits"].size() == 3);

  CHECK(run("gen --n 2 --k 3 --m 4").exit_code == 1);  // k > n is a usage error
}

TEST_CASE("config_file_merges_with_flag_priority") {
  const auto dir = work_dir();
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"n": 6, "k": 2, "m": 5, "seed": 3})";
  const auto out = dir / "merged.json";
  CHECK(run("gen --config " + cfg.string() + " --n 7 --out " + out.string()).exit_code == 0);
  const auto instance = json::parse(slurp(out));
  CHECK(instance["n"] == 7);  // flag beats config
  REQUIRE(instance["terms"].size() == 5);
  CHECK(instance["terms"][0]["qubits"].size() == 2);

  std::ofstream(dir / "bogus.json") << R"({"bogus": 1})";
  CHECK(run("gen --n 4 --config " + (dir / "bogus.json").string()).exit_code == 1);
  std::ofstream(dir / "badfmt.json") << R"({"format": "yaml"})";
  CHECK(run("table --config " + (dir / "badfmt.json").string()).exit_code == 1);
  std::ofstream(dir / "notjson.json") << "not json";
  CHECK(run("gen --n 4 --config " + (dir / "notjson.json").string()).exit_code == 1);
}

TEST_CASE("certify_report_and_exit_codes") {
  const auto dir = work_dir();
  const std::string h = (dir / "h6.json").string();
  REQUIRE(run("gen --n 6 --k 3 --m 12 --seed 1 --out " + h).exit_code == 0);

  const std::string report_path = (dir / "cert.json").string();
  const auto res =
      run("certify --in " + h + " --mu 0.1 --mu 0.3 --validate --out " + report_path);
  CHECK(res.exit_code == 0);
  const auto report = json::parse(slurp(report_path));
  CHECK(report["version"] == "hamlow 0.1.0");
  CHECK(report.contains("timestamp"));
  CHECK(report["config"]["mu"] == json::array({"0.1", "0.3"}));
  REQUIRE(report["certificates"].size() == 2);
  for (const auto& cert : report["certificates"]) {
    CHECK(cert["validated"]["pass"].get<bool>());
    CHECK(cert["lower_bound_D"].get<double>() >= 0.0);
  }

  // an identical rerun differs only in the timestamp
  const json first = json::parse(slurp(report_path));
  REQUIRE(run("certify --in " + h + " --mu 0.1 --mu 0.3 --validate --out " + report_path)
              .exit_code == 0);
  CHECK(strip_timestamp(first) == strip_timestamp(json::parse(slurp(report_path))));

  CHECK(run("certify --in " + h + " --mu 0").exit_code == 1);        // mu must be positive
  CHECK(run("certify --in " + (dir / "nope.json").string()).exit_code == 1);
}

TEST_CASE("scale_cap_yields_exit_code_3") {
  const auto dir = work_dir();
  const std::string big = (dir / "h15.json").string();
  REQUIRE(run("gen --n 15 --k 3 --m 6 --seed 2 --out " + big).exit_code == 0);
  CHECK(run("certify --in " + big + " --mu 0.3 --validate").exit_code == 3);

  const std::string small = (dir / "h6b.json").string();
  REQUIRE(run("gen --n 6 --k 2 --m 6 --seed 3 --out " + small).exit_code == 0);
  CHECK(run("certify --in " + small + " --mu 0.3 --validate --oracle-cap 4").exit_code == 3);
  // the environment variable caps the oracle the same way, flags win over it
  CHECK(run("certify --in " + small + " --mu 0.3 --validate", "HAMLOW_ORACLE_CAP=4 ").exit_code == 3);
  CHECK(run("certify --in " + small + " --mu 0.3 --validate --oracle-cap 8",
            "HAMLOW_ORACLE_CAP=4 ").exit_code == 0);
}

TEST_CASE("certify_spectrum_exports") {
  const auto dir = work_dir();
  const std::string h = (dir / "h4.json").string();
  REQUIRE(run("gen --n 4 --k 2 --m 6 --seed 11 --out " + h).exit_code == 0);
  const std::string spectrum = (dir / "spectrum.csv").string();
  const std::string nsweep = (dir / "nsweep.csv").string();
  CHECK(run("certify --in " + h + " --mu 0.2 --mu 0.4 --spectrum-out " + spectrum +
            " --nsweep-out " + nsweep + " --out " + (dir / "r.json").string())
            .exit_code == 0);
  const auto spec_csv = slurp(spectrum);
  CHECK(spec_csv.rfind("index,eigenvalue\n", 0) == 0);
  CHECK(std::count(spec_csv.begin(), spec_csv.end(), '\n') == 17);  // header + 2^4 rows
  CHECK(slurp(nsweep).rfind("E,count\n", 0) == 0);
}

TEST_CASE("simulate_report_contracts") {
  const auto dir = work_dir();
  const std::string h = (dir / "h5.json").string();
  REQUIRE(run("gen --n 5 --k 3 --m 10 --seed 4 --out " + h).exit_code == 0);

  const std::string report_path = (dir / "sim.json").string();
  const auto res = run("simulate --in " + h + " --epsilon 0.2 --mode exact --samples 2000 --seed 9 --out " +
                       report_path);
  CHECK(res.exit_code == 0);
  const auto report = json::parse(slurp(report_path));
  const auto& outcome = report["outcome"];
  const double m_total = report["M"].get<double>();
  const double e0 = report["e_d_ref"].get<double>();
  const double lambda0 = report["lambda0"].get<double>();
  CHECK(outcome["energy"].get<double>() <= e0 + 0.2 * m_total + 1e-9);
  CHECK(outcome["energy"].get<double>() >= lambda0 - 1e-9);
  CHECK(report["lemma5_check"]["pass"].get<bool>());
  CHECK(report["estimate_within_3sigma"].get<bool>());
  CHECK(outcome["degree"].is_null());

  // polynomial mode carries the degree and a fidelity metric
  const auto poly = run("simulate --in " + h + " --epsilon 0.2 --mode poly --degree 256 --samples 100");
  CHECK(poly.exit_code == 0);
  const auto poly_report = json::parse(poly.output);
  CHECK(poly_report["outcome"]["degree"] == 256);
  CHECK(poly_report["fidelity_to_exact"].get<double>() > 0.5);

  CHECK(run("simulate --in " + h + " --epsilon 0").exit_code == 1);
  CHECK(run("simulate --in " + h + " --epsilon -1").exit_code == 1);
}

TEST_CASE("table_default_matches_published_values") {
  const auto res = run("table");
  CHECK(res.exit_code == 0);
  // spot rows from the published comparison
  CHECK(res.output.find("3,0.125,0,0.4897959,0.4800000,0.4791143") != std::string::npos);
  CHECK(res.output.find("10,0.001,0,0.4999750,0.4999500,0.4998954") != std::string::npos);
  CHECK(res.output.find("10,0.001,1,0.4999750,0.4999500,0.4999446") != std::string::npos);

  const auto as_json = run("table --format json");
  CHECK(as_json.exit_code == 0);
  const auto rows = json::parse(as_json.output);
  CHECK(rows.size() == 24);

  const auto custom = run("table --ks 5 --epsilons 0.1 --ds 0 --format json");
  const auto custom_rows = json::parse(custom.output);
  REQUIRE(custom_rows.size() == 1);
  CHECK(custom_rows[0]["k"] == 5);
}

TEST_CASE("table_plot_data_export") {
  const auto dir = work_dir();
  const std::string plot = (dir / "plot.csv").string();
  CHECK(run("table --plot-data " + plot + " --out " + (dir / "t.csv").string()).exit_code == 0);
  const auto content = slurp(plot);
  CHECK(content.rfind("k,d,epsilon,c_ours\n", 0) == 0);
}

TEST_CASE("sweep_emits_one_record_per_instance") {
  const auto dir = work_dir();
  const std::string out = (dir / "sweep.jsonl").string();
  const auto res = run("sweep --count 4 --n 6 --k 3 --m 12 --mu 0.3 --validate --workers 2 --seed 5 --out " + out);
  CHECK(res.exit_code == 0);

  std::ifstream in(out);
  std::string line;
  int headers = 0;
  std::set<int> ids;
  while (std::getline(in, line)) {
    const auto record = json::parse(line);
    if (record["record"] == "header") {
      ++headers;
      continue;
    }
    ids.insert(record["instance_id"].get<int>());
    for (const auto& cert : record["certificates"]) CHECK(cert["validated"]["pass"].get<bool>());
  }
  CHECK(headers == 1);
  CHECK(ids == std::set<int>{0, 1, 2, 3});
}

TEST_CASE("usage_errors_exit_1") {
  CHECK(run("").exit_code == 1);                       // missing subcommand
  CHECK(run("certify").exit_code == 1);                // missing --in
  CHECK(run("simulate --epsilon 0.1").exit_code == 1); // missing --in
  CHECK(run("table --format yaml").exit_code == 1);    // invalid enum
}
