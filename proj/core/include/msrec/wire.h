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

// Agent/server protocol: newline-delimited JSON over TCP.
//
//   agent -> server  {"type":"query","signal":[f64,...],"seed":u64}
//   server -> agent  {"type":"results","ids":[int,...],
//                     "frugal":{"d":int,"k":int,"p":int,
//                               "w_l":[[f64,...],...]}}     (or null)
//   server -> agent  {"type":"error","code":str,"message":str}
//
// "seed" is optional and seeds the server's posterior draws for that query;
// it is independent of the user's feature. Without it the server derives a
// seed from its own base seed and a request counter. Floats are written in
// the shortest form that parses back exactly. The agent never sends its
// true feature or its final pick. One request line gets one response line;
// a connection may carry any number of requests.

#ifndef MSREC_WIRE_H_
#define MSREC_WIRE_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "msrec/pipeline.h"

namespace msrec {

// Longest accepted message line, in bytes.
inline constexpr std::size_t kMaxMessageBytes = 16 << 20;

struct QueryMessage {
  std::vector<double> signal;
  std::optional<std::uint64_t> seed;
};

std::string EncodeQuery(const QueryMessage& query);
// Throws ProtocolError on malformed input.
QueryMessage DecodeQuery(std::string_view line);

std::string EncodeResults(const ServerResponse& response);
std::string EncodeError(std::string_view code, std::string_view message);
// Throws ProtocolError on malformed input or on an error response (the
// message carries the server's code and text).
ServerResponse DecodeResults(std::string_view line);

// Everything the server holds. The pointees must outlive the server.
struct ServerContext {
  AlgorithmSpec spec;
  const ScoringModel* model = nullptr;
  const TrainingSet* train = nullptr;
  const Catalog* catalog = nullptr;
  std::uint64_t seed = 0;
};

// Receives one JSON line per handled request. Only server-visible data is
// logged: the received signal and the server's own answer.
using ServerLog = std::function<void(const std::string&)>;

// Stateless apart from the request counter; safe to call concurrently.
class RequestHandler {
 public:
  RequestHandler(ServerContext context, ServerLog log = {});

  // Returns the response line (without the trailing newline). Never throws
  // for bad input: malformed requests produce an error response.
  std::string Handle(std::string_view line);

 private:
  ServerContext context_;
  ServerLog log_;
  std::mutex log_mu_;
  std::atomic<std::uint64_t> counter_{0};
};

// Accepts connections on a background thread; one thread per connection,
// requests on a connection are handled in order.
class Server {
 public:
  Server(ServerContext context, ServerLog log = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and listens. Port 0 picks an ephemeral port. Throws ProtocolError.
  void Listen(const std::string& host, std::uint16_t port);
  std::uint16_t port() const { return port_; }

  // Runs the accept loop on a background thread.
  void Start();
  // Blocks in the accept loop until Stop() is called from another thread.
  void Run();
  void Stop();

 private:
  void ServeConnection(int fd);

  RequestHandler handler_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::jthread accept_thread_;
  std::mutex conn_mu_;
  std::vector<int> conn_fds_;
  std::vector<std::jthread> conn_threads_;
};

// A persistent agent-side connection.
class AgentClient {
 public:
  // Throws ProtocolError when the connection fails.
  AgentClient(const std::string& host, std::uint16_t port);
  ~AgentClient();
  AgentClient(const AgentClient&) = delete;
  AgentClient& operator=(const AgentClient&) = delete;

  // Sends one line, returns the response line.
  std::string RoundTrip(std::string_view line);

  // Observes every outgoing line (for wire audits).
  void set_capture(std::function<void(const std::string&)> capture) {
    capture_ = std::move(capture);
  }

  // Runs the agent side of one trial: noises the user's feature with the
  // agent substream of `trial_seed`, asks the server (passing the server
  // substream seed), then picks b_f locally. `spec` must match the server's
  // configuration; the model and catalog are used only for evaluation and
  // the local pick.
  TrialRecord RunTrial(const AlgorithmSpec& spec, const ScoringModel& model,
                       const Catalog& catalog, const User& user,
                       std::uint64_t trial_seed);

 private:
  int fd_ = -1;
  std::string buffer_;
  std::function<void(const std::string&)> capture_;
};

// One-shot convenience: connect, run one trial, disconnect.
TrialRecord QueryAgent(const std::string& host, std::uint16_t port,
                       const AlgorithmSpec& spec, const ScoringModel& model,
                       const Catalog& catalog, const User& user,
                       std::uint64_t trial_seed);

}  // namespace msrec

#endif  // MSREC_WIRE_H_
