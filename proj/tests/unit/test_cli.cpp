#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "luroth/cli/app.hpp"

using luroth::cli::run;
using Json = nlohmann::ordered_json;

namespace {
struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Json json_of(std::vector<std::string> args) {
  Result r = call(std::move(args));
  REQUIRE(r.code == 0);
  return Json::parse(r.out);
}
}  // namespace

TEST_CASE("expand") {
  Json j = json_of({"expand", "27/71", "--depth", "4"});
  CHECK(j["schema"] == "luroth/v1");
  CHECK(j["command"] == "expand");
  CHECK(j["params"]["x"] == "27/71");
  CHECK(j["params"]["depth"] == "4");
  CHECK(j["summary"]["periodic"] == true);
  CHECK(j["summary"]["period"] == "[;3,4]");
  auto rows = j["tables"]["convergents"]["rows"];
  REQUIRE(rows.size() == 4);
  std::vector<int> ds;
  for (const auto& r : rows) ds.push_back(r["d"].get<int>());
  CHECK(ds == std::vector<int>{3, 4, 3, 4});
  CHECK(rows[1]["Q"] == 24);
  CHECK(rows[1]["error"] == "3/568");

  Json one = json_of({"expand", "1", "--depth", "3"});
  for (const auto& r : one["tables"]["convergents"]["rows"]) CHECK(r["d"] == 2);
  CHECK(call({"expand", "5/3"}).code == 3);
  CHECK(call({"expand", "x/3"}).code == 3);
}

TEST_CASE("csv output carries the parameter echo") {
  Result r = call({"expand", "27/71", "--depth", "2", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# schema=luroth/v1\n") == 0);
  CHECK(r.out.find("# param x=27/71\n") != std::string::npos);
  CHECK(r.out.find("n,d,P,Q,error,cylinder_length\n1,3,1,3,10/213,1/6\n2,4,9,24,3/568,1/72\n") != std::string::npos);
}

TEST_CASE("eval and enum-s") {
  CHECK(json_of({"eval", "[;3,4]"})["summary"]["value"] == "27/71");
  CHECK(json_of({"eval", "[3,4]"})["summary"]["length"] == "1/72");
  Json s = json_of({"enum-s", "--qmax", "6"});
  CHECK(s["summary"]["count"] == 7);
  CHECK(call({"enum-s", "--qmax", "100000", "--cap", "10"}).code == 4);
  CHECK(call({"enum-s", "--k", "3", "--qmax", "7"}).code == 3);
}

TEST_CASE("dim") {
  Json p = json_of({"dim", "--tau", "1", "--method", "pressure"});
  CHECK(p["summary"]["theory"] == "1/2");
  std::string s = p["tables"]["pressure"]["rows"][0]["s_star"];
  CHECK(std::stod(s) == doctest::Approx(0.5).epsilon(1e-12));

  Json c = json_of({"dim", "--psi", "two-adic:tau=1", "--method", "cover", "--j", "2"});
  auto rows = c["tables"]["upper_bounds"]["rows"];
  REQUIRE(rows.size() == 3);
  CHECK(rows[2]["dimension_bound"] == "1/4");

  Json b = json_of({"dim", "--psi", "power:tau=2", "--method", "box", "--depth", "3", "--ms", "4:8"});
  CHECK(b["summary"]["theory"] == "1/3");
  CHECK(b["tables"]["counts"]["rows"].size() == 5);

  CHECK(call({"dim", "--tau", "1", "--method", "guess"}).code == 2);
  CHECK(call({"dim", "--tau", "1", "--method", "cover", "--s", "1/2"}).code == 3);
  CHECK(call({"dim", "--tau", "1", "--method", "box", "--ms", "8"}).code == 3);
}

TEST_CASE("measure") {
  Json m = json_of({"measure", "--psi", "const:c=0.5", "--windows", "1:3,4:6", "--samples", "200", "--seed", "7",
                    "--qmax", "10000"});
  auto rows = m["tables"]["hit_fractions"]["rows"];
  REQUIRE(rows.size() == 2);
  CHECK(m["summary"]["khintchine"]["trend"] == "diverging-trend");
  CHECK(m["params"]["seed"] == "7");
  CHECK(call({"measure", "--psi", "const:c=0.5", "--windows", "5:1"}).code == 2);
  CHECK(call({"measure", "--psi", "const:c=0.5", "--windows", "5"}).code == 2);
  CHECK(call({"measure", "--psi", "const:c=2"}).code == 3);
}

TEST_CASE("mtp") {
  Json z = json_of({"mtp", "--tau", "0", "--s", "1", "--depth", "1"});
  CHECK(z["summary"]["coverage"] == "1 (certified from below)");
  CHECK(z["summary"]["lower"] == "1/1");
  Json one = json_of({"mtp", "--tau", "1", "--s", "1", "--depth", "2", "--qmax", "4096"});
  CHECK(one["summary"]["coverage"] == "< 1 (certified from above)");
}

TEST_CASE("orders") {
  Json o = json_of({"orders", "--psi", "two-adic:tau=1", "--qmax", "20", "--violations"});
  bool has4 = false;
  for (const auto& r : o["tables"]["monotonicity_violations"]["rows"]) has4 |= r["q"] == 4;
  CHECK(has4);
  Json t = json_of({"orders", "--psi", "power:tau=3", "--s", "1/4", "--qmax", "300"});
  CHECK(t["summary"]["theta_exactly_one"] == 300);
}

TEST_CASE("same arguments give identical output, whatever the thread count") {
  std::vector<std::string> base{"measure", "--psi", "power:tau=1", "--windows", "1:4", "--samples", "300",
                                "--qmax", "100000", "--format", "csv"};
  auto with = [&](const char* threads) {
    auto a = base;
    a.push_back("--threads");
    a.push_back(threads);
    return call(a);
  };
  Result a = with("1"), b = with("4"), c = with("1");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("report") {
  const char* path = "report_test.json";
  {
    std::ofstream f(path);
    f << R"({"runs":[{"command":"expand","args":{"x":"27/71","depth":2}},
                     {"command":"dim","args":{"tau":"3","method":"pressure"}}]})";
  }
  Json r = json_of({"report", "--config", path});
  REQUIRE(r["records"].size() == 2);
  CHECK(r["records"][0]["command"] == "expand");
  CHECK(r["records"][1]["summary"]["theory"] == "1/4");
  {
    std::ofstream f(path);
    f << R"({"runs":[], "colour":"blue"})";
  }
  CHECK(call({"report", "--config", path}).code == 3);
  {
    std::ofstream f(path);
    f << R"({"runs":[{"command":"mtp","args":{"tau":"1","bogus":"2"}}]})";
  }
  CHECK(call({"report", "--config", path}).code == 2);
  std::remove(path);
  CHECK(call({"report", "--config", "does-not-exist.json"}).code == 2);
}

TEST_CASE("usage errors") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"expand"}).code == 2);
  CHECK(call({"expand", "1/2", "--format", "xml"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}
