#pragma once

#include <string>
#include <thread>

#include <httplib.h>

namespace testing {

/// httplib server on an ephemeral loopback port, serving until destroyed.
class LocalServer {
  public:
    LocalServer() = default;
    ~LocalServer() { stop(); }
    LocalServer(LocalServer const&) = delete;
    auto operator=(LocalServer const&) -> LocalServer& = delete;

    [[nodiscard]] auto server() -> httplib::Server& { return server_; }

    void start()
    {
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    void stop()
    {
        if (thread_.joinable()) {
            server_.stop();
            thread_.join();
        }
    }

    [[nodiscard]] auto url(std::string const& path) const -> std::string
    {
        return "http://127.0.0.1:" + std::to_string(port_) + path;
    }

  private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace testing
