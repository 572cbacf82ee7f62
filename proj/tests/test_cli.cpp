#include <doctest.h>

#include "isolab/run.hpp"

using namespace isolab;

namespace {

RunConfig base(const std::string& command) {
  RunConfig c;
  c.command = command;
  return c;
}

}  // namespace

TEST_CASE("cheeger run reproduces the worked report") {
  RunConfig c = base("cheeger");
  c.group = "F2";
  c.radius = 3;
  c.max_size = 5;
  Report rep = run(c);
  CHECK(rep.all_asserted_passed());
  CHECK(rep.payload.at("ratio").at("num") == 12);
  CHECK(rep.payload.at("ratio").at("den") == 5);
  bool saw_sandwich = false, saw_kazhdan = false;
  for (const auto& check : rep.checks) {
    if (check.name == "sandwich") {
      saw_sandwich = true;
      CHECK(check.passed);
    }
    if (check.name == "kazhdan_le_sqrt_ratio") {
      saw_kazhdan = true;
      CHECK(check.passed);
    }
  }
  CHECK(saw_sandwich);
  CHECK(saw_kazhdan);
}

TEST_CASE("forest run pins the free-group estimator") {
  RunConfig c = base("forest");
  c.group = "F2";
  c.radius = 4;
  c.mode = "free";
  c.samples = 100;
  Report rep = run(c);
  CHECK(rep.all_asserted_passed());
  CHECK(rep.payload.at("beta1_estimate").get<double>() == 1.0);
  CHECK(rep.payload.at("variance").get<double>() == 0.0);
  CHECK(rep.payload.at("rsf_checks_passed") == rep.payload.at("rsf_checks_run"));
}

TEST_CASE("relsim hzero run") {
  RunConfig c = base("relsim");
  c.subcommand = "hzero";
  c.N = 1000;
  c.n = 10;
  c.eps = "0.01";
  Report rep = run(c);
  CHECK(rep.all_asserted_passed());
  CHECK(rep.payload.at("cost").at("num") == 101);
  CHECK(rep.payload.at("cost").at("den") == 100);
  Rational ratio(rep.payload.at("witness_ratio").at("num").get<long long>(),
                 rep.payload.at("witness_ratio").at("den").get<long long>());
  CHECK(ratio <= Rational(4, 11));
}

TEST_CASE("emitted reports are byte stable") {
  RunConfig c = base("forest");
  c.group = "F2";
  c.radius = 3;
  c.samples = 25;
  c.seed = 42;
  std::string first = emit(run(c), c);
  std::string second = emit(run(c), c);
  CHECK(first == second);
  CHECK(first.find("\"timestamp\"") == std::string::npos);

  c.with_timestamp = true;
  CHECK(emit(run(c), c).find("\"timestamp\"") != std::string::npos);
}

TEST_CASE("different seeds change sampled payloads") {
  RunConfig c = base("forest");
  c.group = "Z^2";
  c.radius = 4;
  c.samples = 60;
  c.seed = 1;
  std::string first = emit(run(c), c);
  c.seed = 2;
  std::string second = emit(run(c), c);
  CHECK(first != second);
}

TEST_CASE("profile csv schema") {
  RunConfig c = base("profile");
  c.group = "F2";
  c.radius = 3;
  c.format = "csv";
  std::string csv = emit(run(c), c);
  CHECK(csv.rfind("n,ball,boundary,ratio_num,ratio_den,ratio_float\n", 0) == 0);
  CHECK(csv.find("1,5,12,12,5,2.4\n") != std::string::npos);
  CHECK(csv.find("2,17,36,36,17,") != std::string::npos);
}

TEST_CASE("csv is rejected outside profile") {
  RunConfig c = base("cheeger");
  c.format = "csv";
  c.radius = 2;
  c.max_size = 2;
  Report rep = run(c);
  CHECK_THROWS_AS(emit(rep, c), std::invalid_argument);
}

TEST_CASE("config validation errors") {
  RunConfig bad = base("nonsense");
  CHECK_THROWS_AS(run(bad), std::invalid_argument);

  RunConfig relsim_bad = base("relsim");
  relsim_bad.subcommand = "bogus";
  CHECK_THROWS_AS(run(relsim_bad), std::invalid_argument);

  RunConfig bad_group = base("ball");
  bad_group.group = "E8";
  CHECK_THROWS_AS(run(bad_group), GroupParseError);

  RunConfig bad_mode = base("forest");
  bad_mode.mode = "loose";
  CHECK_THROWS_AS(run(bad_mode), std::invalid_argument);
}

TEST_CASE("float formatting is fixed width") {
  CHECK(format_double(2.4) == "2.4");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(12345678901234.0) == "1.23456789012e+13");
  CHECK(format_double(0.0) == "0");
}

TEST_CASE("ball payload follows the serialization schema") {
  RunConfig c = base("ball");
  c.group = "Z";
  c.radius = 2;
  Report rep = run(c);
  CHECK(rep.payload.at("radius") == 2);
  CHECK(rep.payload.at("vertices").size() == 5);
  CHECK(rep.payload.at("sphere").size() == 5);
  for (const auto& e : rep.payload.at("edges")) CHECK(e.size() == 3);
  CHECK(rep.payload.at("vertices")[0] == "e");
}

TEST_CASE("betti run with target") {
  RunConfig c = base("betti");
  c.group = "Z";
  c.sweep = "2:6";
  c.target = 1.0 / 12.0;  // center trace of the radius-6 line ball
  c.target_tol = 1e-9;
  Report rep = run(c);
  CHECK(rep.all_asserted_passed());
  auto traces = rep.payload.at("center_trace");
  CHECK(traces.size() == 5);
  CHECK(traces[0].get<double>() == doctest::Approx(0.25));

  // informational by default, asserted (and failing) under --assert
  c.target = 0.5;
  Report loose = run(c);
  CHECK(loose.all_asserted_passed());
  c.assert_upgrade = true;
  Report strict = run(c);
  CHECK(!strict.all_asserted_passed());
}

TEST_CASE("relsim main-check scenarios") {
  RunConfig c = base("relsim");
  c.subcommand = "main-check";
  c.scenario = "cycle";
  c.N = 100;
  c.n = 9;
  Report rep = run(c);
  CHECK(rep.all_asserted_passed());
  auto trial = rep.payload.at("trials")[0];
  CHECK(trial.at("cost_treeing").at("num") == 99);  // 2*0.99 <= 2 + 2/10
  CHECK(trial.at("ratio").at("num") == 1);
  CHECK(trial.at("ratio").at("den") == 5);

  c.scenario = "random";
  c.trials = 10;
  c.N = 150;
  Report rnd = run(c);
  CHECK(rnd.all_asserted_passed());
  CHECK(rnd.payload.at("trials").size() == 10);

  c.scenario = "unknown";
  CHECK_THROWS_AS(run(c), std::invalid_argument);
}

TEST_CASE("relsim compress run") {
  RunConfig c = base("relsim");
  c.subcommand = "compress";
  c.N = 200;
  c.y_size = 100;
  c.n = 10;
  c.k = 5;
  Report rep = run(c);
  CHECK(rep.all_asserted_passed());
  CHECK(rep.payload.at("delta").at("num") == 1);
  CHECK(rep.payload.at("delta").at("den") == 20);
  CHECK(rep.payload.at("mu_y").at("num") == 1);
  CHECK(rep.payload.at("mu_y").at("den") == 2);
}
