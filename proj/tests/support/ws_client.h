// Copyright 2026 The Harvest Runtime Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HARVEST_TESTS_SUPPORT_WS_CLIENT_H_
#define HARVEST_TESTS_SUPPORT_WS_CLIENT_H_

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <nlohmann/json.hpp>

namespace harvest::testing {

// Loopback WebSocket client for gateway tests. One io thread reads every
// frame into an inbox; sends are queued on the same thread.
class WsClient {
 public:
  WsClient() : ws_(ioc_) {}
  ~WsClient() { Shutdown(); }

  // Returns false when the TCP connect or the upgrade fails.
  bool Connect(unsigned short port) {
    namespace net = boost::asio;
    boost::beast::error_code ec;
    net::ip::tcp::resolver resolver(ioc_);
    const auto results = resolver.resolve("127.0.0.1", std::to_string(port), ec);
    if (ec) return false;
    boost::beast::get_lowest_layer(ws_).connect(*results.begin(), ec);
    if (ec) return false;
    ws_.handshake("127.0.0.1:" + std::to_string(port), "/", ec);
    if (ec) return false;
    ws_.text(true);
    Read();
    thread_ = std::thread([this] { ioc_.run(); });
    return true;
  }

  void Send(std::string text) {
    boost::asio::post(ioc_, [this, text = std::move(text)]() mutable {
      out_.push_back(std::move(text));
      if (out_.size() == 1) Write();
    });
  }

  // Next frame matching `pred`, skipping (and keeping) others. Frames that
  // were skipped stay available to later calls.
  std::optional<nlohmann::json> WaitFor(const std::function<bool(const nlohmann::json&)>& pred,
                                        std::chrono::milliseconds timeout =
                                            std::chrono::milliseconds(3000)) {
    std::unique_lock lock(mu_);
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      for (std::size_t i = cursor_; i < inbox_.size(); ++i) {
        if (pred(inbox_[i])) {
          cursor_ = i + 1;
          return inbox_[i];
        }
      }
      if (closed_) return std::nullopt;
      if (cv_.wait_until(lock, deadline) == std::cv_status::timeout) return std::nullopt;
    }
  }

  std::optional<nlohmann::json> WaitType(const std::string& type,
                                         std::chrono::milliseconds timeout =
                                             std::chrono::milliseconds(3000)) {
    return WaitFor([&](const nlohmann::json& j) { return j.value("type", "") == type; }, timeout);
  }

  bool WaitClosed(std::chrono::milliseconds timeout = std::chrono::milliseconds(3000)) {
    std::unique_lock lock(mu_);
    return cv_.wait_for(lock, timeout, [this] { return closed_; });
  }

  bool closed() const {
    std::lock_guard lock(mu_);
    return closed_;
  }

  std::vector<nlohmann::json> Inbox() const {
    std::lock_guard lock(mu_);
    return {inbox_.begin(), inbox_.end()};
  }

  void Close() {
    std::promise<void> done;
    boost::asio::post(ioc_, [this, &done] {
      ws_.async_close(boost::beast::websocket::close_code::normal,
                      [&done](boost::beast::error_code) { done.set_value(); });
    });
    done.get_future().wait_for(std::chrono::seconds(2));
  }

  void Shutdown() {
    if (thread_.joinable()) {
      boost::asio::post(ioc_, [this] {
        boost::beast::error_code ec;
        boost::beast::get_lowest_layer(ws_).socket().close(ec);
      });
      ioc_.stop();
      thread_.join();
    }
  }

 private:
  void Read() {
    ws_.async_read(buffer_, [this](boost::beast::error_code ec, std::size_t) {
      if (ec) {
        std::lock_guard lock(mu_);
        closed_ = true;
        cv_.notify_all();
        return;
      }
      const std::string text = boost::beast::buffers_to_string(buffer_.data());
      buffer_.consume(buffer_.size());
      {
        std::lock_guard lock(mu_);
        inbox_.push_back(nlohmann::json::parse(text, nullptr, false));
        cv_.notify_all();
      }
      Read();
    });
  }

  void Write() {
    ws_.async_write(boost::asio::buffer(out_.front()),
                    [this](boost::beast::error_code ec, std::size_t) {
                      out_.pop_front();
                      if (!ec && !out_.empty()) Write();
                    });
  }

  boost::asio::io_context ioc_;
  boost::beast::websocket::stream<boost::beast::tcp_stream> ws_;
  boost::beast::flat_buffer buffer_;
  std::deque<std::string> out_;
  std::thread thread_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<nlohmann::json> inbox_;
  std::size_t cursor_ = 0;
  bool closed_ = false;
};

}  // namespace harvest::testing

#endif  // HARVEST_TESTS_SUPPORT_WS_CLIENT_H_
