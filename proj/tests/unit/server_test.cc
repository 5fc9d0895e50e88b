// Copyright 2026 The gvfnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gvfnav/gcs/server.h"

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <gtest/gtest.h>

#include "gvfnav/sim_log.h"
#include "gvfnav/spline_io.h"
#include "oracles.h"

namespace gvfnav::gcs {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = boost::asio::ip::tcp;
using nlohmann::json;

std::string ConfigDir() {
  return std::filesystem::path(testing::ConfigPath("paper_sim.json"))
      .parent_path()
      .string();
}

std::string PaperSimBody(double duration = 20.0) {
  json doc = ParseJsonText(ReadTextFile(testing::ConfigPath("paper_sim.json")),
                           "paper_sim");
  doc["duration"] = duration;
  return doc.dump();
}

class RouterTest : public ::testing::Test {
 protected:
  RouterTest() : router_(sessions_, ConfigDir(), false) {}

  HttpResponse Call(const std::string& method, const std::string& target,
                    const std::string& body = "") {
    return router_.Handle({method, target, body});
  }

  std::string CreateSession() {
    const HttpResponse r = Call("POST", "/sessions", PaperSimBody());
    EXPECT_EQ(r.status, 201) << r.body;
    return json::parse(r.body)["id"];
  }

  SessionManager sessions_;
  Router router_;
};

TEST(TargetTest, SplitAndDecode) {
  std::map<std::string, std::string> q;
  EXPECT_EQ(SplitTarget("/a/b?x=1&bbox=-1%2C2,3,4&flag", &q), "/a/b");
  EXPECT_EQ(q["x"], "1");
  EXPECT_EQ(q["bbox"], "-1,2,3,4");
  EXPECT_EQ(q["flag"], "");
  EXPECT_EQ(PercentDecode("a+b%20c%"), "a b c%");
}

TEST(TargetTest, StatusMapping) {
  EXPECT_EQ(StatusFor(NotFoundError("x")), 404);
  EXPECT_EQ(StatusFor(StateError("x")), 409);
  EXPECT_EQ(StatusFor(ValidationError("/a", "x")), 400);
  EXPECT_EQ(StatusFor(InvalidArgumentError("x")), 400);
  EXPECT_EQ(StatusFor(ConfigurationError("x")), 400);
  EXPECT_EQ(StatusFor(std::runtime_error("x")), 500);
}

TEST_F(RouterTest, Health) {
  const HttpResponse r = Call("GET", "/health");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["status"], "ok");
  EXPECT_EQ(Call("POST", "/health").status, 405);
  EXPECT_EQ(Call("GET", "/nowhere").status, 404);
  EXPECT_EQ(Call("OPTIONS", "/sessions").status, 204);
}

TEST_F(RouterTest, SessionLifecycle) {
  const std::string id = CreateSession();
  EXPECT_EQ(id, "s1");
  const json list = json::parse(Call("GET", "/sessions").body);
  ASSERT_EQ(list["sessions"].size(), 1u);
  EXPECT_EQ(list["sessions"][0]["name"], "paper_sim");
  EXPECT_EQ(json::parse(Call("GET", "/sessions/s1").body)["mode"], "paused");
  EXPECT_EQ(Call("DELETE", "/sessions/s1").status, 200);
  EXPECT_EQ(Call("GET", "/sessions/s1").status, 404);
  EXPECT_EQ(json::parse(Call("GET", "/sessions/s1").body)["code"], "not_found");
}

TEST_F(RouterTest, InvalidScenarioIs400WithPaths) {
  json doc = json::parse(PaperSimBody());
  doc["dt"] = -1;
  const HttpResponse r = Call("POST", "/sessions", doc.dump());
  EXPECT_EQ(r.status, 400);
  const json body = json::parse(r.body);
  EXPECT_EQ(body["code"], "validation_error");
  EXPECT_EQ(body["issues"][0]["path"], "/dt");
  EXPECT_EQ(Call("POST", "/sessions", "{not json").status, 400);
}

TEST_F(RouterTest, StepEditsAndLog) {
  const std::string id = CreateSession();
  const json stepped =
      json::parse(Call("POST", "/sessions/" + id + "/step?n=25").body);
  EXPECT_EQ(stepped["steps"], 25);
  EXPECT_EQ(stepped["step"], 25);

  HttpResponse r = Call("POST", "/sessions/" + id + "/edits",
                        R"({"kind": "set_guidance_gains", "gains": {"k_theta": 2}})");
  EXPECT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(json::parse(r.body)["effective_step"], 25);

  r = Call("POST", "/sessions/" + id + "/edits",
           R"([{"kind": "pause"}, {"kind": "set_pace", "multiplier": 2}])");
  EXPECT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(json::parse(r.body)["acks"].size(), 2u);

  r = Call("POST", "/sessions/" + id + "/edits",
           R"([{"kind": "pause"}, {"kind": "set_pace"}])");
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(json::parse(r.body)["issues"][0]["path"].get<std::string>().rfind("/1", 0),
            0u);

  Call("POST", "/sessions/" + id + "/step?n=5");
  const json log = json::parse(Call("GET", "/sessions/" + id + "/edits").body);
  EXPECT_EQ(log["type"], "edit_log");
  EXPECT_EQ(log["edits"].size(), 3u);

  r = Call("GET", "/sessions/" + id + "/log.csv");
  EXPECT_EQ(r.content_type, "text/csv");
  std::istringstream csv(r.body);
  const SimLog parsed = ReadSimLogCsv(csv);
  ASSERT_EQ(parsed.records.size(), 30u);
  EXPECT_EQ(parsed.records[25].event, "set_guidance_gains;pause;set_pace");
}

TEST_F(RouterTest, LockedPointMoveIs400) {
  const std::string id = CreateSession();
  const HttpResponse r =
      Call("POST", "/sessions/" + id + "/edits",
           R"({"kind": "move_free_point", "segment": 1, "index": 1, "x": 0, "y": 0})");
  EXPECT_EQ(r.status, 400);
  const json body = json::parse(r.body);
  EXPECT_EQ(body["code"], "invalid_argument");
  EXPECT_NE(body["message"].get<std::string>().find("recurrence"),
            std::string::npos);
}

TEST_F(RouterTest, FinishedSessionIs409) {
  const HttpResponse created =
      Call("POST", "/sessions", PaperSimBody(0.02));
  const std::string id = json::parse(created.body)["id"];
  Call("POST", "/sessions/" + id + "/step?n=10");
  const HttpResponse r =
      Call("POST", "/sessions/" + id + "/edits", R"({"kind": "resume"})");
  EXPECT_EQ(r.status, 409);
}

TEST_F(RouterTest, FieldCsv) {
  const std::string id = CreateSession();
  HttpResponse r = Call("GET", "/sessions/" + id +
                                   "/field?bbox=-10,-10,10,10&res=4,3&w=0.5");
  EXPECT_EQ(r.status, 200) << r.body;
  auto session = sessions_.Get(id);
  const Scenario s = session->initial_scenario();
  EXPECT_EQ(r.body, FieldGridCsv(FieldGrid(*s.spline, s.guidance,
                                           {{-10, -10, 10, 10}, 4, 3, 0.5})));
  EXPECT_EQ(Call("GET", "/sessions/" + id + "/field").status, 400);
  EXPECT_EQ(Call("GET", "/sessions/" + id + "/field?bbox=1,1,0,0").status, 400);
  EXPECT_EQ(Call("GET", "/sessions/" + id + "/stream").status, 426);
}

TEST_F(RouterTest, StreamMessages) {
  const std::string id = CreateSession();
  auto session = sessions_.Get(id);
  json reply = router_.HandleStreamMessage(
      *session, R"({"type": "edit", "request_id": 7,
                    "edit": {"kind": "set_pace", "multiplier": 2}})");
  EXPECT_EQ(reply["type"], "ack");
  EXPECT_EQ(reply["request_id"], 7);

  reply = router_.HandleStreamMessage(
      *session, R"({"type": "field_request", "bbox": [-5, -5, 5, 5],
                    "res": [2, 2], "w": 0.0})");
  EXPECT_EQ(reply["type"], "field");
  EXPECT_EQ(reply["rows"].size(), 4u);

  reply = router_.HandleStreamMessage(*session, R"({"type": "snapshot_request"})");
  EXPECT_EQ(reply["type"], "snapshot");

  reply = router_.HandleStreamMessage(*session, R"({"kind": "warp", "request_id": "x"})");
  EXPECT_EQ(reply["type"], "error");
  EXPECT_EQ(reply["request_id"], "x");
  reply = router_.HandleStreamMessage(*session, "[1,2");
  EXPECT_EQ(reply["type"], "error");
}

// Real sockets on an ephemeral port.
class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ServerOptions options;
    options.port = 0;
    options.scenario_base_dir = ConfigDir();
    options.start_runners = false;
    server_ = std::make_unique<Server>(sessions_, options);
    server_->Start();
  }
  void TearDown() override { server_->Stop(); }

  http::response<http::string_body> Request(http::verb verb,
                                            const std::string& target,
                                            const std::string& body = "") {
    boost::asio::io_context ioc;
    tcp::resolver resolver(ioc);
    beast::tcp_stream stream(ioc);
    stream.connect(resolver.resolve("127.0.0.1", std::to_string(server_->port())));
    http::request<http::string_body> req{verb, target, 11};
    req.set(http::field::host, "127.0.0.1");
    req.set(http::field::content_type, "application/json");
    req.body() = body;
    req.prepare_payload();
    http::write(stream, req);
    beast::flat_buffer buffer;
    http::response<http::string_body> res;
    http::read(stream, buffer, res);
    beast::error_code ec;
    stream.socket().shutdown(tcp::socket::shutdown_both, ec);
    return res;
  }

  SessionManager sessions_;
  std::unique_ptr<Server> server_;
};

TEST_F(ServerTest, HttpRoundTrip) {
  ASSERT_NE(server_->port(), 0);
  auto res = Request(http::verb::get, "/health");
  EXPECT_EQ(res.result_int(), 200);
  EXPECT_EQ(res[http::field::access_control_allow_origin], "*");
  res = Request(http::verb::post, "/sessions", PaperSimBody());
  EXPECT_EQ(res.result_int(), 201);
  res = Request(http::verb::post, "/sessions/s1/step?n=3");
  EXPECT_EQ(json::parse(res.body())["step"], 3);
  res = Request(http::verb::get, "/sessions/s9");
  EXPECT_EQ(res.result_int(), 404);
}

TEST_F(ServerTest, WebSocketStream) {
  Request(http::verb::post, "/sessions", PaperSimBody());
  auto session = sessions_.Get("s1");

  boost::asio::io_context ioc;
  tcp::resolver resolver(ioc);
  websocket::stream<beast::tcp_stream> ws(ioc);
  beast::get_lowest_layer(ws).connect(
      resolver.resolve("127.0.0.1", std::to_string(server_->port())));
  beast::get_lowest_layer(ws).expires_after(std::chrono::seconds(20));
  ws.handshake("127.0.0.1", "/sessions/s1/stream");

  const auto read = [&] {
    beast::flat_buffer buffer;
    ws.read(buffer);
    return json::parse(beast::buffers_to_string(buffer.data()));
  };

  json first = read();
  EXPECT_EQ(first["type"], "snapshot");
  EXPECT_EQ(first["step"], 0);

  session->Advance(10);
  for (int i = 0; i < 10; ++i) {
    const json m = read();
    ASSERT_EQ(m["type"], "record");
    EXPECT_EQ(m["record"]["step"], i);
  }

  // Edits in, ack back on the same socket.
  ws.write(boost::asio::buffer(std::string(
      R"({"type": "edit", "request_id": 1,
          "edit": {"kind": "set_guidance_gains", "gains": {"k_theta": 2}}})")));
  json ack = read();
  while (ack["type"] != "ack") ack = read();
  EXPECT_EQ(ack["request_id"], 1);
  EXPECT_EQ(ack["effective_step"], 10);

  ws.write(boost::asio::buffer(std::string(
      R"({"type": "edit", "edit": {"kind": "move_free_point",
          "segment": 1, "index": 2, "x": 0, "y": 0}})")));
  json err = read();
  while (err["type"] != "error") err = read();
  EXPECT_EQ(err["code"], "invalid_argument");

  ws.write(boost::asio::buffer(std::string(
      R"({"type": "field_request", "bbox": "-5,-5,5,5", "res": "3,3"})")));
  json field = read();
  while (field["type"] != "field") field = read();
  EXPECT_EQ(field["rows"].size(), 9u);

  // Removing the session closes the stream after a "closed" event.
  sessions_.Remove("s1");
  json last = read();
  while (last["type"] != "event" || last["event"] != "closed") last = read();
  beast::flat_buffer buffer;
  beast::error_code ec;
  ws.read(buffer, ec);
  EXPECT_EQ(ec, websocket::error::closed);
}

TEST_F(ServerTest, StreamForUnknownSessionIsRejected) {
  boost::asio::io_context ioc;
  tcp::resolver resolver(ioc);
  websocket::stream<beast::tcp_stream> ws(ioc);
  beast::get_lowest_layer(ws).connect(
      resolver.resolve("127.0.0.1", std::to_string(server_->port())));
  beast::error_code ec;
  ws.handshake("127.0.0.1", "/sessions/s42/stream", ec);
  EXPECT_TRUE(ec);
}

TEST(ServerBindTest, PortInUseIsConfigurationError) {
  SessionManager sessions;
  ServerOptions options;
  options.port = 0;
  Server first(sessions, options);
  first.Start();
  options.port = first.port();
  Server second(sessions, options);
  EXPECT_THROW(second.Start(), ConfigurationError);
  first.Stop();
}

}  // namespace
}  // namespace gvfnav::gcs
