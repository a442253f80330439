#pragma once

#include <memory>
#include <string>

#include "dwb/api.hpp"

namespace httplib {
class Server;
}

namespace dwb::http {

/// Routes the JSON API onto a cpp-httplib server. Handlers run on the
/// server's worker threads; the Workbench provides the synchronization.
class Service {
 public:
  explicit Service(api::Workbench& workbench);
  ~Service();

  /// Binds to an OS-chosen port and returns it, or -1 on failure.
  int bind_any(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  api::Workbench& workbench_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace dwb::http
