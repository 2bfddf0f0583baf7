#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "msgames/strategy_lab.hpp"

namespace msgames {

struct ServiceOptions {
  std::string persistDir;     // empty = in memory only
  std::size_t boardCap = 8;   // engine Duplicator's copy limit per reply
  Budget budget = Budget::fromEnvironment();
};

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

class Session;

// HTTP/JSON session service. handle() serves one request and is what the HTTP
// server calls; it can also be driven directly.
//   POST /sessions             create a game
//   GET  /sessions/{id}        full state
//   POST /sessions/{id}/move   human move, answered by the engine
//   POST /sessions/{id}/hint   suggested move for the human
//   POST /sessions/{id}/undo   take back the last human move
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();

  ServiceResponse handle(const std::string& method, const std::string& path, const std::string& body);

  // Blocks serving HTTP on host:port (port 0 picks a free port, reported
  // through `onListen` before serving starts).
  void serve(const std::string& host, int port, const std::function<void(int port)>& onListen = {});
  void stop();

 private:
  std::shared_ptr<Session> find(const std::string& id);
  void persist(const Session& s) const;
  void restore();

  ServiceOptions options_;
  std::mutex mapMutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t nextId_ = 1;
  void* server_ = nullptr;  // httplib::Server while serving
};

}  // namespace msgames
