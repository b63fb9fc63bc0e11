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


#include "harvest/teleop/gateway.h"

#include <algorithm>
#include <chrono>
#include <deque>
#include <future>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "harvest/common/error.h"
#include "harvest/runtime/timing.h"
#include "harvest/teleop/protocol.h"

namespace harvest::teleop {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr std::size_t kSampleWindow = 4096;
constexpr std::size_t kMaxQueuedFrames = 64;

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void PushSample(std::deque<double>& d, double v) {
  d.push_back(v);
  if (d.size() > kSampleWindow) d.pop_front();
}

std::optional<double> P95(const std::deque<double>& d) {
  if (d.empty()) return std::nullopt;
  const std::vector<double> v(d.begin(), d.end());
  return runtime::Percentile(v, 0.95);
}

}  // namespace

void GatewayConfig::Validate() const {
  session.Validate();
  if (max_frame_bytes < 256) throw ValidationError("max frame size must be at least 256 bytes");
}

class Connection;

class Gateway::Impl {
 public:
  Impl(GatewayConfig config, TeleopRuntime& runtime)
      : config_(std::move(config)),
        runtime_(runtime),
        session_(config_.session),
        acceptor_(ioc_) {}

  ~Impl() { Stop(); }

  unsigned short Start();
  void Stop();
  GatewayStats Stats() const;
  Phase phase() const {
    std::lock_guard lock(mu_);
    return session_.phase();
  }

  // Network-thread entry points.
  void OnOpen(const std::shared_ptr<Connection>& c);
  void OnClosed(const Connection* c);
  void HandleFrame(Connection& c, const std::string& text);
  void SendTelemetry(Connection& c);
  std::chrono::nanoseconds TelemetryPeriod() const {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::duration<double>(runtime_.period()));
  }
  std::size_t max_frame_bytes() const { return config_.max_frame_bytes; }
  void CountRefused() {
    std::lock_guard lock(mu_);
    ++stats_.refused_connections;
  }

 private:
  void DoAccept();
  void Publish();
  void Error(Connection& c, std::string_view code, std::string_view message,
             std::optional<std::uint64_t> seq);

  const GatewayConfig config_;
  TeleopRuntime& runtime_;

  mutable std::mutex mu_;  // session, episode control, stats, samples
  Session session_;
  EpisodeControl episode_;
  std::uint64_t last_seq_ = 0;
  std::uint64_t sent_scene_revision_ = 0;
  bool hello_done_ = false;
  GatewayStats stats_;
  std::deque<double> processing_ms_;
  std::deque<double> rtt_ms_;
  std::optional<double> last_rtt_ms_;

  net::io_context ioc_;
  tcp::acceptor acceptor_;
  std::weak_ptr<Connection> active_;
  std::thread thread_;
  bool running_ = false;
};

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, Gateway::Impl& gw, bool refuse)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), gw_(gw), refuse_(refuse) {}

  void Start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.read_message_max(gw_.max_frame_bytes());
    ws_.async_accept(beast::bind_front_handler(&Connection::OnAccept, shared_from_this()));
  }

  void Send(std::string text, bool droppable = false) {
    if (closed_ || closing_) return;
    if (droppable && queue_.size() >= kMaxQueuedFrames) return;
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) DoWrite();
  }

  // Flushes queued frames, then closes with a policy status.
  void CloseAfterFlush() {
    close_after_flush_ = true;
    if (queue_.empty()) DoClose();
  }

  void Abort() {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
    Closed();
  }

 private:
  void OnAccept(beast::error_code ec) {
    if (ec) return Closed();
    if (refuse_) {
      Send(EncodeError("busy", "another operator is connected"));
      CloseAfterFlush();
      return;
    }
    gw_.OnOpen(shared_from_this());
    ScheduleTelemetry(Clock::now());
    DoRead();
  }

  void DoRead() {
    ws_.async_read(buffer_, beast::bind_front_handler(&Connection::OnRead, shared_from_this()));
  }

  void OnRead(beast::error_code ec, std::size_t) {
    if (ec == websocket::error::message_too_big) {
      Send(EncodeError("malformed", "frame exceeds the size limit"));
      CloseAfterFlush();
      return;
    }
    if (ec) return Closed();
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    if (!ws_.got_text()) {
      Send(EncodeError("malformed", "binary frames are not supported"));
    } else {
      gw_.HandleFrame(*this, text);
    }
    if (!closed_ && !closing_) DoRead();
  }

  void DoWrite() {
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()),
                    beast::bind_front_handler(&Connection::OnWrite, shared_from_this()));
  }

  void OnWrite(beast::error_code ec, std::size_t) {
    if (ec) return Closed();
    queue_.pop_front();
    if (!queue_.empty()) return DoWrite();
    if (close_after_flush_) DoClose();
  }

  void DoClose() {
    if (closing_ || closed_) return;
    closing_ = true;
    timer_.cancel();
    ws_.async_close(websocket::close_code::policy_error,
                    [self = shared_from_this()](beast::error_code) { self->Closed(); });
  }

  void ScheduleTelemetry(Clock::time_point last) {
    const Clock::time_point next = last + gw_.TelemetryPeriod();
    timer_.expires_at(next);
    timer_.async_wait([self = shared_from_this(), next](beast::error_code ec) {
      if (ec || self->closed_ || self->closing_) return;
      self->gw_.SendTelemetry(*self);
      self->ScheduleTelemetry(std::max(next, Clock::now() - self->gw_.TelemetryPeriod()));
    });
  }

  void Closed() {
    if (closed_) return;
    closed_ = true;
    timer_.cancel();
    if (!refuse_) gw_.OnClosed(this);
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  Gateway::Impl& gw_;
  const bool refuse_;
  bool closed_ = false;
  bool closing_ = false;
  bool close_after_flush_ = false;
};

unsigned short Gateway::Impl::Start() {
  if (running_) throw ValidationError("gateway already started");
  beast::error_code ec;
  const auto address = net::ip::make_address(config_.address, ec);
  if (ec) throw ValidationError("invalid bind address '" + config_.address + "'");
  const tcp::endpoint endpoint(address, config_.port);
  acceptor_.open(endpoint.protocol());
  acceptor_.set_option(net::socket_base::reuse_address(true));
  acceptor_.bind(endpoint, ec);
  if (ec) throw RuntimeFault("cannot bind " + config_.address + ":" +
                             std::to_string(config_.port) + ": " + ec.message());
  acceptor_.listen();
  const unsigned short port = acceptor_.local_endpoint().port();
  DoAccept();
  running_ = true;
  thread_ = std::thread([this] { ioc_.run(); });
  return port;
}

void Gateway::Impl::Stop() {
  if (!running_) return;
  running_ = false;
  std::promise<void> done;
  net::post(ioc_, [this, &done] {
    beast::error_code ec;
    acceptor_.close(ec);
    if (auto c = active_.lock()) c->Abort();
    done.set_value();
  });
  done.get_future().wait();
  ioc_.stop();
  thread_.join();
}

void Gateway::Impl::DoAccept() {
  acceptor_.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec == net::error::operation_aborted) return;
    if (!ec) {
      const bool refuse = !active_.expired();
      if (refuse) CountRefused();
      auto c = std::make_shared<Connection>(std::move(socket), *this, refuse);
      if (!refuse) active_ = c;
      c->Start();
    }
    DoAccept();
  });
}

void Gateway::Impl::Publish() {
  runtime_.cell().Write({session_.Target(), episode_});
}

void Gateway::Impl::Error(Connection& c, std::string_view code, std::string_view message,
                          std::optional<std::uint64_t> seq) {
  ++stats_.errors;
  c.Send(EncodeError(code, message, seq));
}

void Gateway::Impl::OnOpen(const std::shared_ptr<Connection>& c) {
  std::lock_guard lock(mu_);
  hello_done_ = false;
  last_seq_ = 0;
  c->Send(EncodeHello(runtime_.Hello(config_.session)));
  sent_scene_revision_ = runtime_.scene_revision();
  c->Send(EncodeScene(runtime_.Scene(), sent_scene_revision_));
  c->Send(EncodeSessionEvent(session_.phase(), session_.episode_id(), 0));
}

void Gateway::Impl::OnClosed(const Connection* c) {
  if (auto a = active_.lock(); a && a.get() != c) return;
  active_.reset();
  std::lock_guard lock(mu_);
  session_.Disconnect(runtime_.Now());
  hello_done_ = false;
  Publish();
}

void Gateway::Impl::HandleFrame(Connection& c, const std::string& text) {
  const Clock::time_point t0 = Clock::now();
  std::lock_guard lock(mu_);
  ++stats_.frames;
  ClientFrame frame;
  try {
    frame = ParseClientFrame(text);
  } catch (const ValidationError& e) {
    Error(c, "malformed", e.what(), std::nullopt);
    PushSample(processing_ms_, MsSince(t0));
    return;
  }
  if (const auto* hello = std::get_if<ClientHello>(&frame)) {
    if (hello_done_) {
      Error(c, "protocol", "hello already received", std::nullopt);
    } else if (hello->version != kProtocolVersion) {
      Error(c, "version", "server speaks version " + std::to_string(kProtocolVersion),
            std::nullopt);
      c.CloseAfterFlush();
    } else if (!config_.token.empty() && hello->token != config_.token) {
      Error(c, "unauthorized", "token rejected", std::nullopt);
      c.CloseAfterFlush();
    } else {
      hello_done_ = true;
    }
    PushSample(processing_ms_, MsSince(t0));
    return;
  }
  const CommandFrame& f = std::get<CommandFrame>(frame);
  if (!hello_done_) {
    Error(c, "handshake_required", "send a hello frame first", f.seq);
    PushSample(processing_ms_, MsSince(t0));
    return;
  }
  const double now = runtime_.Now();
  if (f.ack && *f.ack <= now) {
    last_rtt_ms_ = (now - *f.ack) * 1000.0;
    PushSample(rtt_ms_, *last_rtt_ms_);
  }
  last_seq_ = std::max(last_seq_, f.seq);
  const Effect e = session_.HandleCommand(f.command, now, f.seq);
  if (!e.accepted) {
    Error(c, e.error_code, e.message, f.seq);
    PushSample(processing_ms_, MsSince(t0));
    return;
  }
  if (e.estop) runtime_.RaiseEStop();
  if (e.ended_episode) {
    ++episode_.generation;
    episode_.id.reset();
  }
  if (e.started_episode) {
    ++episode_.generation;
    episode_.id = e.started_episode;
  }
  if (e.mark_retry) ++episode_.retry_marks;
  Publish();
  if (e.phase_changed || e.started_episode || e.ended_episode) {
    c.Send(EncodeSessionEvent(session_.phase(), session_.episode_id(), f.seq));
  }
  PushSample(processing_ms_, MsSince(t0));
}

void Gateway::Impl::SendTelemetry(Connection& c) {
  Telemetry t = runtime_.Snapshot();
  {
    std::lock_guard lock(mu_);
    if (t.scene_revision != sent_scene_revision_) {
      sent_scene_revision_ = t.scene_revision;
      c.Send(EncodeScene(runtime_.Scene(), t.scene_revision));
    }
    t.phase = session_.phase();
    t.episode = session_.episode_id();
    t.ack_seq = last_seq_;
    t.rtt_last_ms = last_rtt_ms_;
    t.rtt_p95_ms = P95(rtt_ms_);
    ++stats_.telemetry_sent;
  }
  c.Send(EncodeTelemetry(t), true);
}

GatewayStats Gateway::Impl::Stats() const {
  std::lock_guard lock(mu_);
  GatewayStats s = stats_;
  s.processing_p95_ms = P95(processing_ms_);
  if (!processing_ms_.empty()) {
    s.processing_max_ms = *std::max_element(processing_ms_.begin(), processing_ms_.end());
  }
  s.rtt_p95_ms = P95(rtt_ms_);
  s.rtt_samples = rtt_ms_.size();
  return s;
}

Gateway::Gateway(GatewayConfig config, TeleopRuntime& runtime) {
  config.Validate();
  impl_ = std::make_unique<Impl>(std::move(config), runtime);
}

Gateway::~Gateway() = default;

unsigned short Gateway::Start() { return impl_->Start(); }
void Gateway::Stop() { impl_->Stop(); }
GatewayStats Gateway::Stats() const { return impl_->Stats(); }
Phase Gateway::phase() const { return impl_->phase(); }

}  // namespace harvest::teleop
