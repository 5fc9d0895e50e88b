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

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <thread>
#include <vector>

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include "gvfnav/field_grid.h"
#include "gvfnav/spline_io.h"

namespace gvfnav::gcs {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

std::string PercentDecode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '+') {
      out += ' ';
    } else if (c == '%' && i + 2 < text.size()) {
      int value = 0;
      const auto [ptr, ec] =
          std::from_chars(text.data() + i + 1, text.data() + i + 3, value, 16);
      if (ec == std::errc() && ptr == text.data() + i + 3) {
        out += static_cast<char>(value);
        i += 2;
      } else {
        out += c;
      }
    } else {
      out += c;
    }
  }
  return out;
}

std::string SplitTarget(const std::string& target,
                        std::map<std::string, std::string>* query) {
  const auto q = target.find('?');
  std::string path = PercentDecode(target.substr(0, q));
  if (q == std::string::npos) return path;
  std::string_view rest(target);
  rest.remove_prefix(q + 1);
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const std::string_view pair = rest.substr(0, amp);
    const auto eq = pair.find('=');
    if (!pair.empty()) {
      (*query)[PercentDecode(pair.substr(0, eq))] =
          eq == std::string_view::npos ? std::string()
                                       : PercentDecode(pair.substr(eq + 1));
    }
    if (amp == std::string_view::npos) break;
    rest.remove_prefix(amp + 1);
  }
  return path;
}

int StatusFor(const std::exception& error) {
  if (dynamic_cast<const NotFoundError*>(&error)) return 404;
  if (dynamic_cast<const StateError*>(&error)) return 409;
  if (dynamic_cast<const ValidationError*>(&error) ||
      dynamic_cast<const ConfigurationError*>(&error) ||
      dynamic_cast<const InvalidArgumentError*>(&error) ||
      dynamic_cast<const DomainError*>(&error)) {
    return 400;
  }
  return 500;
}

namespace {

HttpResponse JsonResponse(int status, const json& body) {
  return {status, "application/json", body.dump()};
}

HttpResponse ErrorResponse(int status, std::string code, std::string message) {
  json body = Envelope("error");
  body["code"] = std::move(code);
  body["message"] = std::move(message);
  return JsonResponse(status, body);
}

HttpResponse MethodNotAllowed(const std::string& method,
                              const std::string& path) {
  return ErrorResponse(405, "method_not_allowed",
                       method + " is not supported on " + path);
}

double ParseDouble(const std::string& text, const std::string& name) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw InvalidArgumentError(name + " must be a finite number, got '" +
                               text + "'");
  }
  return value;
}

std::int64_t ParseCount(const std::string& text, const std::string& name) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
    throw InvalidArgumentError(name + " must be a non-negative integer");
  }
  return value;
}

FieldRequest FieldRequestFromQuery(
    const std::map<std::string, std::string>& query) {
  FieldRequest request;
  const auto bbox = query.find("bbox");
  if (bbox == query.end()) {
    throw InvalidArgumentError("bbox=xmin,ymin,xmax,ymax is required");
  }
  request.bbox = ParseBoundingBox(bbox->second);
  const auto res = query.find("res");
  if (res != query.end()) ParseResolution(res->second, &request.nx, &request.ny);
  const auto w = query.find("w");
  if (w != query.end() && !w->second.empty()) {
    request.w = ParseDouble(w->second, "w");
  }
  return request;
}

FieldRequest FieldRequestFromJson(const json& doc) {
  FieldRequest request;
  const auto& bbox = doc.value("bbox", json());
  if (bbox.is_string()) {
    request.bbox = ParseBoundingBox(bbox.get<std::string>());
  } else if (bbox.is_array() && bbox.size() == 4 &&
             std::all_of(bbox.begin(), bbox.end(),
                         [](const json& v) { return v.is_number(); })) {
    request.bbox = {bbox[0].get<double>(), bbox[1].get<double>(),
                    bbox[2].get<double>(), bbox[3].get<double>()};
  } else {
    throw ValidationError("/bbox", "must be [xmin, ymin, xmax, ymax]");
  }
  if (doc.contains("res")) {
    const auto& res = doc["res"];
    if (res.is_string()) {
      ParseResolution(res.get<std::string>(), &request.nx, &request.ny);
    } else if (res.is_array() && res.size() == 2 &&
               res[0].is_number_integer() && res[1].is_number_integer()) {
      request.nx = res[0].get<int>();
      request.ny = res[1].get<int>();
    } else {
      throw ValidationError("/res", "must be [nx, ny]");
    }
  }
  if (doc.contains("w") && !doc["w"].is_null()) {
    if (!doc["w"].is_number()) throw ValidationError("/w", "must be a number");
    request.w = doc["w"].get<double>();
  }
  return request;
}

}  // namespace

Router::Router(SessionManager& sessions, std::string scenario_base_dir,
               bool start_runners)
    : sessions_(sessions),
      base_dir_(std::move(scenario_base_dir)),
      start_runners_(start_runners) {}

HttpResponse Router::Handle(const HttpRequest& request) {
  std::map<std::string, std::string> query;
  const std::string path = SplitTarget(request.target, &query);
  const std::string& method = request.method;
  try {
    if (method == "OPTIONS") return {204, "text/plain", ""};
    if (path == "/health") {
      if (method != "GET") return MethodNotAllowed(method, path);
      json body = Envelope("health");
      body["status"] = "ok";
      body["sessions"] = sessions_.List().size();
      return JsonResponse(200, body);
    }
    if (path == "/sessions" || path == "/sessions/") {
      if (method == "POST") {
        const json doc = ParseJsonText(request.body, "request body");
        auto session = sessions_.Create(ScenarioFromJson(doc, base_dir_),
                                        start_runners_);
        spdlog::info("created session {}", session->id());
        return JsonResponse(201, session->Info());
      }
      if (method == "GET") {
        json body = Envelope("sessions");
        body["sessions"] = json::array();
        for (const auto& s : sessions_.List()) {
          body["sessions"].push_back(s->Info());
        }
        return JsonResponse(200, body);
      }
      return MethodNotAllowed(method, path);
    }
    constexpr std::string_view kPrefix = "/sessions/";
    if (path.starts_with(kPrefix)) {
      const std::string tail = path.substr(kPrefix.size());
      const auto slash = tail.find('/');
      const std::string id = tail.substr(0, slash);
      const std::string rest =
          slash == std::string::npos ? std::string() : tail.substr(slash);
      return HandleSession(method, id, rest, query, request.body);
    }
    return ErrorResponse(404, "not_found", "no route for " + path);
  } catch (const std::exception& e) {
    return JsonResponse(StatusFor(e), ErrorToJson(e));
  }
}

HttpResponse Router::HandleSession(
    const std::string& method, const std::string& id, const std::string& rest,
    const std::map<std::string, std::string>& query, const std::string& body) {
  const std::string path = "/sessions/" + id + rest;
  if (rest.empty() || rest == "/") {
    if (method == "GET") return JsonResponse(200, sessions_.Get(id)->Info());
    if (method == "DELETE") {
      sessions_.Remove(id);
      spdlog::info("deleted session {}", id);
      json out = Envelope("deleted");
      out["id"] = id;
      return JsonResponse(200, out);
    }
    return MethodNotAllowed(method, path);
  }
  auto session = sessions_.Get(id);
  if (rest == "/snapshot") {
    if (method != "GET") return MethodNotAllowed(method, path);
    return JsonResponse(200, session->Snapshot());
  }
  if (rest == "/edits") {
    if (method == "GET") {
      const auto log = session->edit_log();
      return JsonResponse(200, EditLogToJson(log));
    }
    if (method != "POST") return MethodNotAllowed(method, path);
    const json doc = ParseJsonText(body, "request body");
    if (doc.is_array()) {
      std::vector<EditCommand> edits;
      for (size_t i = 0; i < doc.size(); ++i) {
        try {
          edits.push_back(EditFromJson(doc[i]));
        } catch (const ValidationError& e) {
          std::vector<FieldIssue> issues;
          for (const auto& issue : e.issues()) {
            issues.push_back({"/" + std::to_string(i) + issue.path,
                              issue.message});
          }
          throw ValidationError(std::move(issues));
        }
      }
      json out = Envelope("acks");
      out["session"] = id;
      out["acks"] = json::array();
      for (const auto& edit : edits) {
        out["acks"].push_back(session->ApplyEdit(edit).ToJson());
      }
      return JsonResponse(200, out);
    }
    json ack = session->ApplyEdit(EditFromJson(doc)).ToJson();
    ack["session"] = id;
    return JsonResponse(200, ack);
  }
  if (rest == "/step") {
    if (method != "POST") return MethodNotAllowed(method, path);
    const auto n = query.find("n");
    const std::int64_t steps =
        n == query.end() ? 1 : ParseCount(n->second, "n");
    json out = Envelope("stepped");
    out["session"] = id;
    out["steps"] = session->Advance(steps);
    out["step"] = session->step_count();
    return JsonResponse(200, out);
  }
  if (rest == "/log.csv") {
    if (method != "GET") return MethodNotAllowed(method, path);
    return {200, "text/csv", session->LogCsv()};
  }
  if (rest == "/field") {
    if (method != "GET") return MethodNotAllowed(method, path);
    return {200, "text/csv",
            FieldGridCsv(session->Field(FieldRequestFromQuery(query)))};
  }
  if (rest == "/stream") {
    return ErrorResponse(426, "upgrade_required",
                         "open " + path + " as a WebSocket");
  }
  return ErrorResponse(404, "not_found", "no route for " + path);
}

json Router::HandleStreamMessage(Session& session, const std::string& text) {
  json request_id;
  try {
    const json doc = ParseJsonText(text, "stream message");
    if (!doc.is_object()) throw ValidationError("", "message must be an object");
    if (doc.contains("request_id")) request_id = doc["request_id"];
    const std::string type =
        doc.contains("type") && doc["type"].is_string()
            ? doc["type"].get<std::string>()
            : std::string("edit");
    json reply;
    if (type == "edit") {
      reply = session.ApplyEdit(EditFromJson(doc.contains("edit") ? doc["edit"]
                                                                  : doc))
                  .ToJson();
      reply["session"] = session.id();
    } else if (type == "field_request") {
      reply = session.FieldMessage(FieldRequestFromJson(doc));
    } else if (type == "snapshot_request") {
      reply = session.Snapshot();
    } else {
      throw ValidationError("/type", "unknown message type '" + type + "'");
    }
    if (!request_id.is_null()) reply["request_id"] = request_id;
    return reply;
  } catch (const std::exception& e) {
    json error = ErrorToJson(e);
    error["session"] = session.id();
    if (!request_id.is_null()) error["request_id"] = request_id;
    return error;
  }
}

// ---------------------------------------------------------------------------
// Transport

namespace {

class SubscriberRegistry {
 public:
  void Add(const std::shared_ptr<Subscriber>& s) {
    std::lock_guard lock(mu_);
    std::erase_if(subs_, [](const auto& w) { return w.expired(); });
    subs_.push_back(s);
  }
  void CloseAll() {
    std::vector<std::weak_ptr<Subscriber>> subs;
    {
      std::lock_guard lock(mu_);
      subs.swap(subs_);
    }
    for (auto& w : subs) {
      if (auto s = w.lock()) s->Close();
    }
  }

 private:
  std::mutex mu_;
  std::vector<std::weak_ptr<Subscriber>> subs_;
};

void SetCommonHeaders(http::response<http::string_body>& res) {
  res.set(http::field::server, "gvfnav");
  res.set(http::field::access_control_allow_origin, "*");
  res.set(http::field::access_control_allow_methods,
          "GET, POST, DELETE, OPTIONS");
  res.set(http::field::access_control_allow_headers, "Content-Type");
}

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket&& socket, Router& router,
               std::shared_ptr<Session> session, SubscriberRegistry& registry)
      : ws_(std::move(socket)),
        router_(router),
        session_(std::move(session)),
        registry_(registry) {}

  ~WsConnection() {
    if (subscriber_) subscriber_->Close();
  }

  void Run(http::request<http::string_body> request) {
    ws_.set_option(
        websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.set_option(websocket::stream_base::decorator(
        [](websocket::response_type& res) {
          res.set(http::field::server, "gvfnav");
        }));
    ws_.async_accept(request, beast::bind_front_handler(
                                  &WsConnection::OnAccept, shared_from_this()));
  }

 private:
  void OnAccept(beast::error_code ec) {
    if (ec) {
      spdlog::warn("websocket accept failed: {}", ec.message());
      return;
    }
    subscriber_ = session_->Subscribe();
    registry_.Add(subscriber_);
    std::weak_ptr<WsConnection> weak = shared_from_this();
    subscriber_->set_notify([weak] {
      if (auto self = weak.lock()) {
        net::post(self->ws_.get_executor(), [self] { self->Flush(); });
      }
    });
    spdlog::debug("stream opened on session {}", session_->id());
    Flush();
    DoRead();
  }

  void Flush() {
    if (writing_ || done_) return;
    auto message = subscriber_->TryPop();
    if (!message) {
      if (subscriber_->closed()) {
        done_ = true;
        ws_.async_close(websocket::close_code::normal,
                        [self = shared_from_this()](beast::error_code) {});
      }
      return;
    }
    outgoing_ = std::move(*message);
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(outgoing_),
                    beast::bind_front_handler(&WsConnection::OnWrite,
                                              shared_from_this()));
  }

  void OnWrite(beast::error_code ec, std::size_t) {
    writing_ = false;
    if (ec) return Shutdown();
    Flush();
  }

  void DoRead() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsConnection::OnRead,
                                                      shared_from_this()));
  }

  void OnRead(beast::error_code ec, std::size_t) {
    if (ec) return Shutdown();
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    subscriber_->Push(router_.HandleStreamMessage(*session_, text).dump());
    DoRead();
  }

  void Shutdown() {
    if (done_) return;
    done_ = true;
    if (subscriber_) session_->Unsubscribe(subscriber_);
    spdlog::debug("stream closed on session {}", session_->id());
  }

  websocket::stream<beast::tcp_stream> ws_;
  Router& router_;
  std::shared_ptr<Session> session_;
  SubscriberRegistry& registry_;
  std::shared_ptr<Subscriber> subscriber_;
  beast::flat_buffer buffer_;
  std::string outgoing_;
  bool writing_ = false;
  bool done_ = false;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket&& socket, Router& router,
                 SubscriberRegistry& registry)
      : stream_(std::move(socket)), router_(router), registry_(registry) {}

  void Run() {
    net::dispatch(stream_.get_executor(),
                  beast::bind_front_handler(&HttpConnection::DoRead,
                                            shared_from_this()));
  }

 private:
  void DoRead() {
    request_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, request_,
                     beast::bind_front_handler(&HttpConnection::OnRead,
                                               shared_from_this()));
  }

  void OnRead(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;

    const std::string target(request_.target());
    if (websocket::is_upgrade(request_)) {
      std::map<std::string, std::string> query;
      const std::string path = SplitTarget(target, &query);
      constexpr std::string_view kPrefix = "/sessions/";
      constexpr std::string_view kSuffix = "/stream";
      if (path.starts_with(kPrefix) && path.ends_with(kSuffix) &&
          path.size() > kPrefix.size() + kSuffix.size()) {
        const std::string id = path.substr(
            kPrefix.size(), path.size() - kPrefix.size() - kSuffix.size());
        std::shared_ptr<Session> session;
        try {
          session = router_.sessions().Get(id);
        } catch (const std::exception& e) {
          return Write({StatusFor(e), "application/json",
                        ErrorToJson(e).dump()});
        }
        stream_.expires_never();
        std::make_shared<WsConnection>(stream_.release_socket(), router_,
                                       std::move(session), registry_)
            ->Run(std::move(request_));
        return;
      }
    }
    Write(router_.Handle({std::string(request_.method_string()), target,
                          request_.body()}));
  }

  void Write(const HttpResponse& r) {
    auto res = std::make_shared<http::response<http::string_body>>(
        static_cast<http::status>(r.status), request_.version());
    SetCommonHeaders(*res);
    res->set(http::field::content_type, r.content_type);
    res->keep_alive(request_.keep_alive());
    res->body() = r.body;
    res->prepare_payload();
    response_ = res;
    http::async_write(stream_, *res,
                      beast::bind_front_handler(&HttpConnection::OnWrite,
                                                shared_from_this(),
                                                res->need_eof()));
  }

  void OnWrite(bool close, beast::error_code ec, std::size_t) {
    if (ec) return;
    if (close) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    response_.reset();
    DoRead();
  }

  beast::tcp_stream stream_;
  Router& router_;
  SubscriberRegistry& registry_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  std::shared_ptr<http::response<http::string_body>> response_;
};

class Listener : public std::enable_shared_from_this<Listener> {
 public:
  Listener(net::io_context& ioc, Router& router, SubscriberRegistry& registry)
      : ioc_(ioc),
        acceptor_(net::make_strand(ioc)),
        router_(router),
        registry_(registry) {}

  void Bind(const tcp::endpoint& endpoint) {
    beast::error_code ec;
    acceptor_.open(endpoint.protocol(), ec);
    if (!ec) acceptor_.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acceptor_.bind(endpoint, ec);
    if (!ec) acceptor_.listen(net::socket_base::max_listen_connections, ec);
    if (ec) {
      throw ConfigurationError("cannot listen on " +
                               endpoint.address().to_string() + ":" +
                               std::to_string(endpoint.port()) + ": " +
                               ec.message());
    }
  }

  std::uint16_t port() const { return acceptor_.local_endpoint().port(); }

  void Accept() {
    acceptor_.async_accept(
        net::make_strand(ioc_),
        beast::bind_front_handler(&Listener::OnAccept, shared_from_this()));
  }

  void Close() {
    net::post(acceptor_.get_executor(), [self = shared_from_this()] {
      beast::error_code ec;
      self->acceptor_.close(ec);
    });
  }

 private:
  void OnAccept(beast::error_code ec, tcp::socket socket) {
    if (ec == net::error::operation_aborted) return;
    if (!ec) {
      std::make_shared<HttpConnection>(std::move(socket), router_, registry_)
          ->Run();
    }
    if (acceptor_.is_open()) Accept();
  }

  net::io_context& ioc_;
  tcp::acceptor acceptor_;
  Router& router_;
  SubscriberRegistry& registry_;
};

}  // namespace

struct Server::Impl {
  Impl(SessionManager& sessions, ServerOptions opts)
      : options(std::move(opts)),
        ioc(std::max(1, options.threads)),
        router(sessions, options.scenario_base_dir, options.start_runners) {}

  ServerOptions options;
  net::io_context ioc;
  Router router;
  SubscriberRegistry registry;
  std::shared_ptr<Listener> listener;
  std::vector<std::thread> threads;
  std::uint16_t port = 0;
  std::mutex mu;
  std::condition_variable cv;
  bool running = false;
};

Server::Server(SessionManager& sessions, ServerOptions options)
    : impl_(std::make_unique<Impl>(sessions, std::move(options))) {}

Server::~Server() { Stop(); }

void Server::Start() {
  std::lock_guard lock(impl_->mu);
  if (impl_->running) return;
  beast::error_code ec;
  const auto address = net::ip::make_address(impl_->options.address, ec);
  if (ec) {
    throw ConfigurationError("invalid address '" + impl_->options.address +
                             "'");
  }
  impl_->listener = std::make_shared<Listener>(impl_->ioc, impl_->router,
                                               impl_->registry);
  impl_->listener->Bind({address, impl_->options.port});
  impl_->port = impl_->listener->port();
  impl_->listener->Accept();
  impl_->ioc.restart();
  for (int i = 0; i < std::max(1, impl_->options.threads); ++i) {
    impl_->threads.emplace_back([this] { impl_->ioc.run(); });
  }
  impl_->running = true;
  spdlog::info("listening on http://{}:{}", impl_->options.address,
               impl_->port);
}

std::uint16_t Server::port() const { return impl_->port; }

void Server::Stop() {
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(impl_->mu);
    if (!impl_->running) return;
    impl_->running = false;
    threads.swap(impl_->threads);
  }
  impl_->registry.CloseAll();
  if (impl_->listener) impl_->listener->Close();
  impl_->ioc.stop();
  for (auto& t : threads) t.join();
  impl_->listener.reset();
  impl_->cv.notify_all();
}

void Server::Wait() {
  std::unique_lock lock(impl_->mu);
  impl_->cv.wait(lock, [&] { return !impl_->running; });
}

}  // namespace gvfnav::gcs
