#include <string>

#include "helpers.hpp"
#include "sublevel/commands.hpp"

using namespace sublevel;
using namespace testing_helpers;

namespace {

Json parse_out(const CommandOutput& o) { return Json::parse(o.text); }

AnalysisConfig disk_config() {
  AnalysisConfig c;
  c.poly = "x^2+y^2";
  c.domain = Json::parse(R"({"kind":"ball","center":[0,0],"radius":1})");
  c.samples = 20000;
  return c;
}

int exit_code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (...) {
    return exit_code_for_current_exception();
  }
  return kExitOk;
}

}  // namespace

TEST_CASE("doubles print with 17 significant digits and round-trip") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(1e-6) == "9.9999999999999995e-07");
  CHECK(format_double(3.0) == "3");
  std::mt19937_64 gen(17);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(uniform01(gen) - 0.5, static_cast<int>(gen() % 600) - 300);
    CHECK(to_double(parse_rational(format_double(x))) == x);
  }
}

TEST_CASE("rational to double rounds to nearest") {
  CHECK(to_double(Q("1/100")) == 0.01);
  CHECK(to_double(Q("1/3")) == 1.0 / 3.0);
  CHECK(to_double(Q("-2/3")) == -2.0 / 3.0);
  CHECK(to_double(Q("1/10")) == 0.1);
}

TEST_CASE("numbers from JSON") {
  CHECK(rational_from_json(Json("3/4")) == frac(3, 4));
  CHECK(rational_from_json(Json(0.1)) == frac(1, 10));
  CHECK(rational_from_json(Json(7)) == frac(7, 1));
  CHECK_THROWS_AS(rational_from_json(Json(true)), InputError);
  CHECK_THROWS_AS(rational_from_json(Json("1/0")), InputError);
  CHECK_THROWS_AS(rational_from_json(Json("abc")), InputError);
}

TEST_CASE("domain JSON round trip") {
  const char* cases[] = {
      R"({"kind":"box","intervals":[["-1","1/2"],["0","3"]]})",
      R"({"kind":"ball","center":["1/3","0","-2"],"radius":"5/2"})",
  };
  for (const char* text : cases) {
    const Domain d = domain_from_json(Json::parse(text));
    const Json back = domain_to_json(d);
    CHECK(back == Json::parse(text));
    CHECK(domain_to_json(domain_from_json(back)) == back);
  }
  const Domain b = parse_domain_arg(R"({"kind":"box","intervals":[[0,1],[0,2]]})");
  CHECK(domain_volume(b) == doctest::Approx(2.0));
  const Domain disk = parse_domain_arg(R"({"kind":"ball","center":[0,0],"radius":1})");
  CHECK(domain_volume(disk) == doctest::Approx(M_PI));
}

TEST_CASE("domain JSON errors") {
  const char* bad[] = {
      R"({"kind":"cube"})",
      R"({"intervals":[[0,1]]})",
      R"({"kind":"box","intervals":[]})",
      R"({"kind":"box","intervals":[[1,0]]})",
      R"({"kind":"box","intervals":[[0,1,2]]})",
      R"({"kind":"ball","center":[0,0],"radius":0})",
      R"({"kind":"ball","center":[0,0],"radius":-1})",
      R"({"kind":"ball","radius":1})",
      R"([1,2])",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(domain_from_json(Json::parse(text)), InputError);
  }
  CHECK_THROWS_AS(parse_domain_arg("{not json"), InputError);
  CHECK_THROWS_AS(parse_domain_arg("@/nonexistent/domain.json"), InputError);
}

TEST_CASE("amplitude JSON round trip and errors") {
  const Json ind = Json::parse(R"({"kind":"indicator"})");
  CHECK(amplitude_to_json(amplitude_from_json(ind)) == ind);
  const Json bump = Json::parse(R"({"kind":"smooth_bump","center":["0"],"inner":"0.5","outer":"1"})");
  CHECK(amplitude_to_json(amplitude_from_json(bump)) == bump);
  CHECK_THROWS_AS(amplitude_from_json(Json::parse(R"({"kind":"gauss"})")), InputError);
  CHECK_THROWS_AS(amplitude_from_json(Json::parse(R"({"kind":"smooth_bump","center":[0],"inner":1,"outer":"1/2"})")),
                  InputError);
}

TEST_CASE("config JSON round trip") {
  AnalysisConfig c = disk_config();
  c.seed = 42;
  c.fit_window = std::make_pair(1e-4, 1e-2);
  c.d_prime = 2;
  c.witnesses = {{"0", "0"}};
  c.gammas = {0.5, 1.0};
  const Json j = config_to_json(c);
  CHECK(config_to_json(config_from_json(j)) == j);
  CHECK(j["seed"] == "42");

  AnalysisConfig d = config_from_json(Json::parse(R"({"poly":"x","samples":"77"})"));
  CHECK(d.poly == "x");
  CHECK(d.samples == 77);
  CHECK(d.t_max == AnalysisConfig{}.t_max);

  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"sampels":"10"})")), InputError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"samples":"-3"})")), InputError);
}

TEST_CASE("volume CSV layout") {
  AnalysisConfig c;
  c.poly = "x";
  c.domain = Json::parse(R"({"kind":"box","intervals":[[0,1]]})");
  c.samples = 10000;
  c.seed = 5;
  c.t_min = 0.125;
  c.t_max = 1;
  c.n_points = 8;
  c.format = "csv";
  const std::string csv = cmd_volume(c).text;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,volume,ci_half_width,method,seed");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.find(",montecarlo,5") != std::string::npos);
  }
  CHECK(rows == 8);
  CHECK(csv.rfind("1,1,", csv.size()) != std::string::npos);
}

TEST_CASE("decay CSV layout") {
  AnalysisConfig c;
  c.poly = "x^2";
  c.domain = Json::parse(R"({"kind":"box","intervals":[[-1,1]]})");
  c.lambda_min = 1;
  c.lambda_max = 100;
  c.lambda_points = 3;
  c.format = "csv";
  const std::string csv = cmd_oscillatory(c).text;
  CHECK(csv.rfind("lambda,magnitude,envelope,converged\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("analyze: disk bracket inferred from the interior zero") {
  const Json j = parse_out(cmd_analyze(disk_config()));
  CHECK(j["degree"] == "2");
  CHECK(j["star"]["verdict"] == "PassesSampled");
  CHECK(j["bracket"]["bracket"] == Json::array({"1", "1"}));
}

TEST_CASE("analyze: product example with a witness") {
  AnalysisConfig c;
  c.poly = "x^4*y^2+x^2*y^4";
  c.domain = Json::parse(R"({"kind":"box","intervals":[[0,1],[0,1]]})");
  c.witnesses = {{"1/2", "0"}};
  c.d_prime = 2;
  c.k_prime = 1;
  const Json j = parse_out(cmd_analyze(c));
  CHECK(j["witnesses"][0]["order"] == "2");
  CHECK(j["witnesses"][0]["is_zero"] == true);
  CHECK(j["bracket"]["bracket"] == Json::array({"1/6", "1/2"}));
}

TEST_CASE("dichotomy command: d = 1 family") {
  AnalysisConfig c;
  c.lemma_d = 1;
  c.trials = 50;
  const Json j = parse_out(cmd_dichotomy(c));
  CHECK(j["family"]["lambda"] == "1/8");
  CHECK(j["family"]["eps"] == Json::array({"1/4", "1/8"}));
  CHECK(j["tally"]["violations"] == "0");
  CHECK(j["tally"]["trials"] == "50");
}

TEST_CASE("singular: verdicts per exponent on the disk") {
  AnalysisConfig c = disk_config();
  c.samples = 200000;
  c.direct_samples = 0;
  c.singular_t_min = 1e-3;
  c.gammas = {0.5, 1.0, 1.5};
  const Json j = parse_out(cmd_singular(c));
  const Json& rs = j["reports"];
  REQUIRE(rs.size() == 3);
  CHECK(rs[0]["verdict"] == "Convergent");
  CHECK(std::stod(rs[0]["value"].get<std::string>()) == doctest::Approx(2 * M_PI).epsilon(0.03));
  CHECK(rs[1]["verdict"] == "Divergent");
  CHECK(rs[2]["verdict"] == "Divergent");
}

TEST_CASE("commands are deterministic and worker independent") {
  AnalysisConfig c = disk_config();
  c.seed = 9;
  c.t_min = 1e-3;
  c.n_points = 12;
  c.samples = 150000;  // spans several sample blocks
  const std::string a = cmd_volume(c).text;
  CHECK(cmd_volume(c).text == a);
  c.workers = 4;
  CHECK(cmd_volume(c).text == a);
  c.seed = 10;
  CHECK(cmd_volume(c).text != a);
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_of([] { run_command("frobnicate", AnalysisConfig{}); }) == kExitUsage);
  CHECK(exit_code_of([] { run_command("analyze", AnalysisConfig{}); }) == kExitUsage);
  AnalysisConfig bad = disk_config();
  bad.poly = "x^2+";
  CHECK(exit_code_of([&] { run_command("analyze", bad); }) == kExitParse);
  bad = disk_config();
  bad.domain = Json::parse(R"({"kind":"torus"})");
  CHECK(exit_code_of([&] { run_command("volume", bad); }) == kExitParse);
  AnalysisConfig vdc;
  vdc.poly = "s";
  vdc.vdc_t = "2";  // |P'| >= 2 fails on [0, 1]
  CHECK(exit_code_of([&] { run_command("vdc-check", vdc); }) == kExitNumeric);
  AnalysisConfig ok;
  ok.trials = 5;
  CHECK(exit_code_of([&] { run_command("lemma2", ok); }) == kExitOk);
}
