#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "alloyscope/error.hpp"
#include "alloyscope/http_api.hpp"
#include "alloyscope/json_io.hpp"
#include "alloyscope/synthetic.hpp"
#include "alloyscope/train.hpp"
#include "oracles.hpp"

// After Eigen: <resolv.h> defines a macro that collides with Eigen parameter names.
#include <httplib.h>

namespace alloyscope {
namespace {

class ApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    sessions.add_dataset("default", synthesize_dataset(3000, 4));
    server = std::make_unique<ApiServer>(sessions);
    port = server->bind("127.0.0.1", 0);
    thread = std::thread([this] { server->run(); });
    server->wait_until_ready();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }

  void TearDown() override {
    server->stop();
    thread.join();
  }

  void load_model() {
    const std::vector<std::size_t> dims{12, 16, 20};
    auto model = make_random_model(dims, 5);
    const auto& data = sessions.dataset("default")->data;
    model.input_names = default_input_columns(data);
    model.output_names = default_output_columns(data);
    sessions.set_model(std::make_shared<const MlpModel>(model), json{{"note", "test"}});
  }

  json post(const std::string& path, const json& body, int expected = 200) {
    auto res = client->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res);
    if (!res) return nullptr;
    EXPECT_EQ(res->status, expected) << res->body;
    return json::parse(res->body);
  }

  json get(const std::string& path, int expected = 200) {
    auto res = client->Get(path);
    EXPECT_TRUE(res);
    if (!res) return nullptr;
    EXPECT_EQ(res->status, expected) << res->body;
    return json::parse(res->body);
  }

  std::string new_session(std::size_t n = 1000, int seed = 1) {
    return post("/api/sessions", {{"n", n}, {"seed", seed}}, 201).at("session_id");
  }

  SessionManager sessions;
  std::unique_ptr<ApiServer> server;
  std::unique_ptr<httplib::Client> client;
  std::thread thread;
  int port = 0;
};

TEST_F(ApiTest, ColumnsListSpecsAndRanges) {
  const auto body = get("/api/columns");
  EXPECT_EQ(body.at("rows"), 3000);
  ASSERT_EQ(body.at("columns").size(), 35u);
  EXPECT_EQ(body.at("columns")[3].at("name"), "Si");
  EXPECT_EQ(body.at("columns")[3].at("group"), "element_fraction");
  const auto err = get("/api/columns?dataset=missing", 404);
  EXPECT_EQ(err.at("error"), "UnknownDataset");
}

TEST_F(ApiTest, SessionPointsAreNormalized) {
  const auto created = post("/api/sessions", {{"n", 500}, {"seed", 3}}, 201);
  EXPECT_EQ(created.at("rows"), 500);
  const auto points = get("/api/sessions/" + created.at("session_id").get<std::string>() + "/points");
  EXPECT_EQ(points.at("row_ids").size(), 500u);
  EXPECT_EQ(points.at("points").size(), 500u);
  for (const auto& row : points.at("points")) {
    ASSERT_EQ(row.size(), 35u);
    for (const auto& v : row) {
      ASSERT_GE(v.get<double>(), 0.0);
      ASSERT_LE(v.get<double>(), 1.0);
    }
  }
}

TEST_F(ApiTest, BoundsMatchTheLibraryResponse) {
  const auto id = new_session(3000);
  const json request = {{"bounds", {{"YS", {250, nullptr}}, {"density", {nullptr, 2.7}}}},
                        {"tolerance", 0.05}};
  const auto body = post("/api/sessions/" + id + "/bounds", request);
  const auto& entry = *sessions.dataset("default");
  const auto q = query_from_json(request, entry.stats);
  const auto expected = oracle::predicate_labels(sessions.served(id), q.bounds, 0.05);
  ASSERT_EQ(body.at("labels").size(), expected.size());
  for (std::size_t r = 0; r < expected.size(); ++r) {
    ASSERT_EQ(body.at("labels")[r].get<int>(), static_cast<int>(expected[r]));
  }
  EXPECT_FALSE(body.contains("ranking"));
}

TEST_F(ApiTest, InfeasibleBoundsCarryARanking) {
  const auto id = new_session(800);
  const auto body = post("/api/sessions/" + id + "/bounds",
                         {{"bounds", {{"YS", {1000, 2000}}}}, {"k", 5}});
  EXPECT_EQ(body.at("feasible"), false);
  ASSERT_EQ(body.at("ranking").size(), 5u);
  EXPECT_EQ(body.at("ranking")[0].at("score"), 1.0);
}

TEST_F(ApiTest, ErrorBodies) {
  const auto id = new_session(100);
  auto e = post("/api/sessions/" + id + "/bounds", {{"bounds", {{"Pb", {0, 1}}}}}, 400);
  EXPECT_EQ(e.at("error"), "UnknownColumn");
  e = post("/api/sessions/nope/bounds", json::object(), 404);
  EXPECT_EQ(e.at("error"), "UnknownSession");
  auto res = client->Post("/api/sessions/" + id + "/bounds", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(json::parse(res->body).at("error"), "BadRequest");
  e = post("/api/sessions", {{"dataset", "other"}}, 404);
  EXPECT_EQ(e.at("error"), "UnknownDataset");
  e = post("/api/sessions", {{"n", 0}}, 400);
  EXPECT_EQ(e.at("error"), "InvalidCount");
}

TEST_F(ApiTest, ModelEndpointAndDegradedSensitivity) {
  EXPECT_EQ(get("/api/model").at("loaded"), false);
  const auto id = new_session(300);
  const auto e = post("/api/sessions/" + id + "/sensitivity", {{"axis", "Si"}}, 409);
  EXPECT_EQ(e.at("error"), "ModelNotLoaded");

  load_model();
  const auto model = get("/api/model");
  EXPECT_EQ(model.at("loaded"), true);
  EXPECT_EQ(model.at("layer_dims"), json::parse("[12, 16, 20]"));
  EXPECT_EQ(model.at("residual_report").at("note"), "test");
}

TEST_F(ApiTest, SensitivityCurvePayload) {
  load_model();
  const auto id = new_session(300);
  const auto body =
      post("/api/sessions/" + id + "/sensitivity",
           {{"axis", "Fe"}, {"overrides", {{"Si", 4.0}}}, {"n_samples", 9}});
  EXPECT_EQ(body.at("axis"), "Fe");
  EXPECT_EQ(body.at("anchor")[0], 4.0);
  ASSERT_EQ(body.at("samples").size(), 9u);
  EXPECT_EQ(body.at("samples")[0].at("prediction").size(), 20u);
  EXPECT_EQ(body.at("samples")[0].at("derivative").size(), 20u);
  const auto e = post("/api/sessions/" + id + "/sensitivity", {{"axis", "YS"}}, 400);
  EXPECT_EQ(e.at("error"), "UnknownAxis");
  const auto few = post("/api/sessions/" + id + "/sensitivity",
                        {{"axis", "Si"}, {"n_samples", 1}}, 400);
  EXPECT_EQ(few.at("error"), "TooFewSamples");
}

TEST_F(ApiTest, ExportReingestsExactly) {
  const auto id = new_session(400);
  const auto& served = sessions.served(id);
  const std::vector<std::int64_t> rows{served.source_row_ids()[5], served.source_row_ids()[2]};
  auto res = client->Post("/api/sessions/" + id + "/export", json{{"rows", rows}}.dump(),
                          "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "text/csv");
  std::istringstream in(res->body);
  const auto back = read_csv(in, served.columns());
  const std::vector<std::size_t> idx{5, 2};
  EXPECT_TRUE(back == served.select_rows(idx));

  res = client->Post("/api/sessions/" + id + "/export", R"({"rows": []})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(std::count(res->body.begin(), res->body.end(), '\n'), 1);

  res = client->Post("/api/sessions/" + id + "/export", R"({"rows": [-1]})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
}

TEST_F(ApiTest, ConcurrentClientsSeeIsolatedSessions) {
  const auto a = new_session(1000, 2);
  const auto b = new_session(1000, 2);
  const json tight = {{"bounds", {{"YS", {1e5, 2e5}}}}};
  const json loose = {{"bounds", {{"YS", {200, 300}}}}};
  json last_a;
  json last_b;
  std::thread ta([&] {
    httplib::Client c("127.0.0.1", port);
    for (int i = 0; i < 15; ++i) {
      auto r = c.Post("/api/sessions/" + a + "/bounds", tight.dump(), "application/json");
      if (r) last_a = json::parse(r->body);
    }
  });
  std::thread tb([&] {
    httplib::Client c("127.0.0.1", port);
    for (int i = 0; i < 15; ++i) {
      auto r = c.Post("/api/sessions/" + b + "/bounds", loose.dump(), "application/json");
      if (r) last_b = json::parse(r->body);
    }
  });
  ta.join();
  tb.join();
  EXPECT_EQ(last_a.at("feasible"), false);
  EXPECT_EQ(last_b.at("feasible"), true);
  EXPECT_EQ(sessions.state(a).last_response.feasible, false);
  EXPECT_EQ(sessions.state(b).last_response.feasible, true);
}

TEST(ApiServerBind, PortInUse) {
  SessionManager sessions;
  ApiServer first(sessions);
  const int port = first.bind("127.0.0.1", 0);
  ApiServer second(sessions);
  try {
    second.bind("127.0.0.1", port);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PortInUse);
  }
}

}  // namespace
}  // namespace alloyscope
