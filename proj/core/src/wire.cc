// Copyright 2026 The msrec Authors.
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

#include "msrec/wire.h"

#include <arpa/inet.h>
#include <glog/logging.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <json.hpp>

#include "msrec/status.h"

namespace msrec {
namespace {

using nlohmann::json;

json ParseObject(std::string_view line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ProtocolError("message is not valid JSON");
  if (!j.is_object()) throw ProtocolError("message must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string()) {
    throw ProtocolError("message lacks a string 'type'");
  }
  return j;
}

std::string Dump(const json& j) {
  // nlohmann writes the shortest decimal that round-trips each double.
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

void SendAll(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::string("send failed: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

// Reads one '\n'-terminated line. Returns false on orderly EOF with an empty
// buffer.
bool ReadLine(int fd, std::string& buffer, std::string& line) {
  for (;;) {
    const std::size_t nl = buffer.find('\n');
    if (nl != std::string::npos) {
      line.assign(buffer, 0, nl);
      buffer.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    if (buffer.size() > kMaxMessageBytes) {
      throw ProtocolError("message exceeds " +
                          std::to_string(kMaxMessageBytes) + " bytes");
    }
    char chunk[65536];
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::string("recv failed: ") + std::strerror(errno));
    }
    if (n == 0) {
      if (buffer.empty()) return false;
      throw ProtocolError("connection closed mid-message");
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

}  // namespace

std::string EncodeQuery(const QueryMessage& query) {
  json j = {{"type", "query"}, {"signal", query.signal}};
  if (query.seed) j["seed"] = *query.seed;
  return Dump(j);
}

QueryMessage DecodeQuery(std::string_view line) {
  const json j = ParseObject(line);
  if (j["type"] != "query") {
    throw ProtocolError("expected a 'query' message, got '" +
                        j["type"].get<std::string>() + "'");
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "type" && key != "signal" && key != "seed") {
      throw ProtocolError("unexpected field '" + key + "' in query");
    }
  }
  if (!j.contains("signal") || !j["signal"].is_array()) {
    throw ProtocolError("query lacks a 'signal' array");
  }
  QueryMessage q;
  for (const json& v : j["signal"]) {
    if (!v.is_number()) throw ProtocolError("signal entries must be numbers");
    q.signal.push_back(v.get<double>());
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw ProtocolError("'seed' must be an unsigned integer");
    }
    q.seed = j["seed"].get<std::uint64_t>();
  }
  return q;
}

std::string EncodeResults(const ServerResponse& response) {
  json j = {{"type", "results"}, {"ids", response.ids}};
  if (response.frugal) {
    const FrugalModel& m = *response.frugal;
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.w_l.rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(m.w_l.cols()));
      for (Eigen::Index c = 0; c < m.w_l.cols(); ++c) {
        row[static_cast<std::size_t>(c)] = m.w_l(r, c);
      }
      rows.push_back(std::move(row));
    }
    j["frugal"] = {{"d", m.d}, {"k", m.k}, {"p", m.p}, {"w_l", rows}};
  } else {
    j["frugal"] = nullptr;
  }
  return Dump(j);
}

std::string EncodeError(std::string_view code, std::string_view message) {
  return Dump(json{{"type", "error"},
                   {"code", std::string(code)},
                   {"message", std::string(message)}});
}

ServerResponse DecodeResults(std::string_view line) {
  const json j = ParseObject(line);
  if (j["type"] == "error") {
    throw ProtocolError("server error [" + j.value("code", "?") +
                        "]: " + j.value("message", ""));
  }
  if (j["type"] != "results") throw ProtocolError("expected 'results'");
  if (!j.contains("ids") || !j["ids"].is_array()) {
    throw ProtocolError("results lack an 'ids' array");
  }
  ServerResponse out;
  try {
    out.ids = j["ids"].get<std::vector<ResultId>>();
    if (j.contains("frugal") && !j["frugal"].is_null()) {
      const json& f = j["frugal"];
      FrugalModel m;
      m.d = f.at("d").get<std::size_t>();
      m.k = f.at("k").get<std::size_t>();
      m.p = f.at("p").get<std::size_t>();
      m.result_ids = out.ids;
      const json& rows = f.at("w_l");
      if (!rows.is_array() || rows.size() != 1 + m.d + m.k) {
        throw ProtocolError("w_l must have 1 + d + k rows");
      }
      m.w_l.resize(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(m.p));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto row = rows[r].get<std::vector<double>>();
        if (row.size() != m.p) throw ProtocolError("w_l rows must have p columns");
        for (std::size_t c = 0; c < m.p; ++c) {
          m.w_l(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              row[c];
        }
      }
      m.Validate();
      out.frugal = std::move(m);
    }
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed results: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ProtocolError(std::string("malformed frugal model: ") + e.what());
  }
  return out;
}

RequestHandler::RequestHandler(ServerContext context, ServerLog log)
    : context_(std::move(context)), log_(std::move(log)) {
  if (!context_.model || !context_.train || !context_.catalog) {
    throw InvalidArgument("ServerContext: model, train and catalog required");
  }
  context_.spec.Validate(context_.catalog->size());
}

std::string RequestHandler::Handle(std::string_view line) {
  QueryMessage query;
  try {
    query = DecodeQuery(line);
  } catch (const ProtocolError& e) {
    return EncodeError("bad_request", e.what());
  }
  if (query.signal.size() != context_.train->dimension()) {
    return EncodeError("bad_signal",
                       "signal has " + std::to_string(query.signal.size()) +
                           " entries, expected " +
                           std::to_string(context_.train->dimension()));
  }
  const std::uint64_t seed =
      query.seed ? *query.seed
                 : DeriveSeed(context_.seed, counter_.fetch_add(1));
  std::string response;
  try {
    Rng rng(seed);
    const ServerResponse r =
        ServeSignal(context_.spec, *context_.model, *context_.train,
                    *context_.catalog, query.signal, rng);
    response = EncodeResults(r);
    if (log_) {
      json entry = {{"event", "query"},
                    {"signal", query.signal},
                    {"ids", r.ids},
                    {"frugal", r.frugal.has_value()}};
      std::lock_guard<std::mutex> lock(log_mu_);
      log_(Dump(entry));
    }
  } catch (const Error& e) {
    response = EncodeError("server_failure", e.what());
  }
  return response;
}

Server::Server(ServerContext context, ServerLog log)
    : handler_(std::move(context), std::move(log)) {}

Server::~Server() { Stop(); }

void Server::Listen(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(),
                             service.c_str(), &hints, &res);
      rc != 0) {
    throw ProtocolError("cannot resolve " + host + ": " + gai_strerror(rc));
  }
  const int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd < 0) {
    ::freeaddrinfo(res);
    throw ProtocolError(std::string("socket: ") + std::strerror(errno));
  }
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd, res->ai_addr, res->ai_addrlen) < 0 || ::listen(fd, 64) < 0) {
    const std::string err = std::strerror(errno);
    ::freeaddrinfo(res);
    ::close(fd);
    throw ProtocolError("cannot listen on " + host + ":" + service + ": " +
                        err);
  }
  ::freeaddrinfo(res);
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  listen_fd_ = fd;
}

void Server::Start() {
  accept_thread_ = std::jthread([this] { Run(); });
}

void Server::Run() {
  if (listen_fd_ < 0) throw ProtocolError("Server::Run before Listen");
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      if (stopping_) break;
      LOG(WARNING) << "accept failed: " << std::strerror(errno);
      break;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    std::lock_guard<std::mutex> lock(conn_mu_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    conn_fds_.push_back(fd);
    conn_threads_.emplace_back([this, fd] { ServeConnection(fd); });
  }
}

void Server::ServeConnection(int fd) {
  std::string buffer, line;
  try {
    while (ReadLine(fd, buffer, line)) {
      SendAll(fd, handler_.Handle(line) + "\n");
    }
  } catch (const ProtocolError& e) {
    // Oversized or truncated input: answer if possible, then drop the peer.
    try {
      SendAll(fd, EncodeError("bad_request", e.what()) + "\n");
    } catch (const ProtocolError&) {
    }
  }
  std::lock_guard<std::mutex> lock(conn_mu_);
  auto it = std::find(conn_fds_.begin(), conn_fds_.end(), fd);
  if (it != conn_fds_.end()) {
    conn_fds_.erase(it);
    ::close(fd);
  }
}

void Server::Stop() {
  if (stopping_.exchange(true)) return;
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::jthread> threads;
  {
    std::lock_guard<std::mutex> lock(conn_mu_);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
    threads = std::move(conn_threads_);
  }
  threads.clear();  // joins
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
}

AgentClient::AgentClient(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res);
      rc != 0) {
    throw ProtocolError("cannot resolve " + host + ": " + gai_strerror(rc));
  }
  fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd_ < 0 || ::connect(fd_, res->ai_addr, res->ai_addrlen) < 0) {
    const std::string err = std::strerror(errno);
    ::freeaddrinfo(res);
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
    throw ProtocolError("cannot connect to " + host + ":" + service + ": " +
                        err);
  }
  ::freeaddrinfo(res);
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

AgentClient::~AgentClient() {
  if (fd_ >= 0) ::close(fd_);
}

std::string AgentClient::RoundTrip(std::string_view line) {
  std::string out(line);
  if (capture_) capture_(out);
  out.push_back('\n');
  SendAll(fd_, out);
  std::string response;
  if (!ReadLine(fd_, buffer_, response)) {
    throw ProtocolError("server closed the connection");
  }
  return response;
}

TrialRecord AgentClient::RunTrial(const AlgorithmSpec& spec,
                                  const ScoringModel& model,
                                  const Catalog& catalog, const User& user,
                                  std::uint64_t trial_seed) {
  Rng agent(AgentStreamSeed(trial_seed));
  QueryMessage query;
  query.signal = LaplaceMechanism(user.feature, spec.noise, agent);
  query.seed = ServerStreamSeed(trial_seed);
  const ServerResponse response = DecodeResults(RoundTrip(EncodeQuery(query)));
  TrialRecord rec = CompleteTrial(spec, model, catalog, user, response);
  rec.seed = trial_seed;
  return rec;
}

TrialRecord QueryAgent(const std::string& host, std::uint16_t port,
                       const AlgorithmSpec& spec, const ScoringModel& model,
                       const Catalog& catalog, const User& user,
                       std::uint64_t trial_seed) {
  AgentClient client(host, port);
  return client.RunTrial(spec, model, catalog, user, trial_seed);
}

}  // namespace msrec
