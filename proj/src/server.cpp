#include "sonarnav/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <deque>
#include <iostream>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "sonarnav/wire.hpp"

namespace sonarnav {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

class Client;

// Lines received from clients, drained by the control loop.
struct Inbox {
  std::mutex mu;
  std::vector<std::pair<std::weak_ptr<Client>, std::string>> lines;  // empty line = new connection

  void push(std::weak_ptr<Client> c, std::string line) {
    std::lock_guard lock(mu);
    lines.emplace_back(std::move(c), std::move(line));
  }
  std::vector<std::pair<std::weak_ptr<Client>, std::string>> drain() {
    std::lock_guard lock(mu);
    return std::exchange(lines, {});
  }
};

struct Hub;

class Client : public std::enable_shared_from_this<Client> {
 public:
  Client(tcp::socket socket, Hub& hub, Inbox& inbox, std::size_t queue_limit)
      : ws_(std::move(socket)), hub_(hub), inbox_(inbox), limit_(queue_limit) {}

  void start();
  // Must run on the io thread.
  void send(std::shared_ptr<const std::string> msg);

 private:
  void read();
  void write();
  void close();

  websocket::stream<beast::tcp_stream> ws_;
  Hub& hub_;
  Inbox& inbox_;
  std::size_t limit_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  bool writing_{false};
  bool open_{false};
  std::string partial_;
};

struct Hub {
  std::set<std::shared_ptr<Client>> clients;  // io thread only
};

void Client::start() {
  ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
  ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
    if (ec) return self->close();
    self->open_ = true;
    self->ws_.text(true);
    self->inbox_.push(self, std::string{});
    self->read();
  });
}

void Client::read() {
  ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
    if (ec) return self->close();
    self->partial_ += beast::buffers_to_string(self->buffer_.data());
    self->buffer_.consume(self->buffer_.size());
    // A frame may carry several lines; an unterminated frame counts as one line.
    std::size_t start = 0;
    for (std::size_t nl; (nl = self->partial_.find('\n', start)) != std::string::npos; start = nl + 1) {
      std::string line = self->partial_.substr(start, nl - start);
      if (!line.empty() && line != "\r") self->inbox_.push(self, std::move(line));
    }
    std::string rest = self->partial_.substr(start);
    self->partial_.clear();
    if (!rest.empty()) self->inbox_.push(self, std::move(rest));
    self->read();
  });
}

void Client::send(std::shared_ptr<const std::string> msg) {
  if (!open_) return;
  queue_.push_back(std::move(msg));
  // Drop the oldest pending messages, keeping the one being written.
  const std::size_t keep_front = writing_ ? 1 : 0;
  while (queue_.size() > limit_ + keep_front) queue_.erase(queue_.begin() + static_cast<std::ptrdiff_t>(keep_front));
  if (!writing_) write();
}

void Client::write() {
  if (queue_.empty() || !open_) {
    writing_ = false;
    return;
  }
  writing_ = true;
  auto msg = queue_.front();
  ws_.async_write(asio::buffer(*msg), [self = shared_from_this(), msg](beast::error_code ec, std::size_t) {
    if (ec) return self->close();
    self->queue_.pop_front();
    self->write();
  });
}

void Client::close() {
  open_ = false;
  queue_.clear();
  hub_.clients.erase(shared_from_this());
}

void accept_loop(tcp::acceptor& acceptor, Hub& hub, Inbox& inbox, std::size_t limit) {
  acceptor.async_accept([&acceptor, &hub, &inbox, limit](beast::error_code ec, tcp::socket socket) {
    if (!ec) {
      auto c = std::make_shared<Client>(std::move(socket), hub, inbox, limit);
      hub.clients.insert(c);
      c->start();
    }
    if (acceptor.is_open()) accept_loop(acceptor, hub, inbox, limit);
  });
}

}  // namespace

void serve(LiveSession& session, const ServeOptions& options, const std::atomic<bool>& stop,
           const std::function<void(unsigned short)>& on_listen) {
  asio::io_context ioc;
  Hub hub;
  Inbox inbox;
  tcp::acceptor acceptor(ioc, tcp::endpoint(asio::ip::make_address("0.0.0.0"), options.port));
  if (on_listen) on_listen(acceptor.local_endpoint().port());
  accept_loop(acceptor, hub, inbox, options.client_queue);

  auto guard = asio::make_work_guard(ioc);
  std::thread io([&ioc] { ioc.run(); });

  auto post_to = [&](std::weak_ptr<Client> w, const nlohmann::json& j) {
    auto msg = std::make_shared<const std::string>(to_line(j));
    asio::post(ioc, [w = std::move(w), msg] {
      if (auto c = w.lock()) c->send(msg);
    });
  };
  auto broadcast = [&](const nlohmann::json& j) {
    auto msg = std::make_shared<const std::string>(to_line(j));
    asio::post(ioc, [&hub, msg] {
      for (const auto& c : std::vector(hub.clients.begin(), hub.clients.end())) c->send(msg);
    });
  };

  using clock = std::chrono::steady_clock;
  const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(1.0 / options.tick_hz));
  auto next = clock::now();
  while (!stop.load()) {
    for (auto& [client, line] : inbox.drain()) {
      if (line.empty()) {
        post_to(client, session.config_message());
        continue;
      }
      LiveSession::Reply r = session.handle(line);
      post_to(client, r.to_client);
      if (r.broadcast) broadcast(*r.broadcast);
    }
    broadcast(session.tick());
    next += period;
    const auto now = clock::now();
    if (next < now) next = now;
    std::this_thread::sleep_until(next);
  }

  asio::post(ioc, [&] {
    beast::error_code ec;
    acceptor.close(ec);
    for (const auto& c : std::vector(hub.clients.begin(), hub.clients.end())) (void)c;
    hub.clients.clear();
  });
  guard.reset();
  ioc.stop();
  io.join();
}

}  // namespace sonarnav
