#include <doctest.h>

#include <thread>

#include <httplib.h>

#include "dwb/http_service.hpp"
#include "dwb/text.hpp"

using namespace dwb;
using api::json;

namespace {

std::string data(const std::string& name) { return text::read_file(std::string(DWB_TEST_DATA) + "/" + name); }

/// Runs a service on an ephemeral port for the lifetime of the fixture.
struct Running {
  api::Workbench workbench;
  http::Service service{workbench};
  int port = -1;
  std::thread thread;

  Running() {
    port = service.bind_any();
    REQUIRE(port > 0);
    thread = std::thread([this] { service.listen_after_bind(); });
    service.wait_until_ready();
  }
  ~Running() {
    service.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

json post(httplib::Client& c, const std::string& path, const json& body, int expected) {
  auto res = c.Post(path, body.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == expected);
  return json::parse(res->body);
}

}  // namespace

TEST_CASE("series lifecycle over HTTP") {
  Running server;
  auto c = server.client();

  auto res = c.Get("/series?industry=1&index=6");
  REQUIRE(res);
  CHECK(res->status == 404);
  CHECK(json::parse(res->body)["code"] == "NotFound");

  const auto written = post(c, "/ingest", {{"csv", data("gambling_mining_gdp.csv")}, {"rules", data("gambling_mining_gdp.rules")}}, 200);
  CHECK(written["written"] == 18);

  res = c.Get("/series?industry=1&index=6&from=2000&to=2001");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto s = json::parse(res->body);
  REQUIRE(s["points"].size() == 2);
  CHECK(s["points"][0]["value"] == 19225.4);

  res = c.Get("/series?industry=x&index=6");
  REQUIRE(res);
  CHECK(res->status == 400);

  res = c.Get("/industries");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body).is_array());
}

TEST_CASE("correlate, predict and solve over HTTP") {
  Running server;
  auto c = server.client();
  post(c, "/ingest", {{"csv", data("gambling_mining_gdp.csv")}, {"rules", data("gambling_mining_gdp.rules")}}, 200);

  auto res = c.Post("/correlate", R"({"x": {"industry": 1, "index": 6}, "y": {"industry": 2, "index": 6}})",
                    "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body.find("-0.0116493580762903") != std::string::npos);

  const auto flat = post(c, "/correlate", {{"x", {1, 2, 3}}, {"y", {4, 4, 4}}}, 200);
  CHECK(flat["undefined"]["pearson"] == "ZeroVariance");

  post(c, "/correlate", {{"x", {1, 2, 3}}, {"y", {4, 4}}}, 422);

  res = c.Post("/correlate", "{not json", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);

  const auto prediction = post(c, "/predict", {{"method", "gaussian"}, {"industry", 1}, {"index", 6}}, 200);
  CHECK(prediction["predictions"].size() == 5);

  const auto mdp = post(c, "/mdp/solve", {{"spec", data("single_state.mdp")}}, 200);
  CHECK(mdp["states"][0]["utility"].get<double>() == doctest::Approx(10.0).epsilon(1e-8));
}

TEST_CASE("templates round trip byte for byte") {
  Running server;
  auto c = server.client();
  const std::string body =
      "{\"nodes\":[{\"id\":\"g\",\"kind\":\"goal\",\"label\":\"Jobs\",\"position\":[0.1,0.30000000000000004]},"
      "{\"id\":\"s\",\"kind\":\"solution\",\"label\":\"Tourism\",\"position\":[100,200]}],"
      "\"relations\":[{\"from\":\"s\",\"to\":\"g\",\"support\":0.7,\"curved\":true,"
      "\"anchors\":[[12.5,33.25],[70.125,1e-7]],\"style\":\"\"}]}";

  auto res = c.Get("/templates/demo");
  REQUIRE(res);
  CHECK(res->status == 404);

  res = c.Put("/templates/demo", body, "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);

  res = c.Get("/templates/demo");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body == body);

  res = c.Put("/templates/demo", "{\"nodes\": 5}", "application/json");
  REQUIRE(res);
  CHECK(res->status == 422);
  res = c.Get("/templates/demo");
  REQUIRE(res);
  CHECK(res->body == body);
}
