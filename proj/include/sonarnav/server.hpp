#pragma once

#include <atomic>
#include <functional>

#include "sonarnav/live.hpp"

namespace sonarnav {

struct ServeOptions {
  unsigned short port{8765};  // 0 picks a free port
  double tick_hz{10.0};
  std::size_t client_queue{64};  // per-client bound; oldest messages are dropped first
};

/// Runs the live session behind a WebSocket endpoint carrying NDJSON messages
/// until `stop` becomes true. `on_listen` receives the bound port.
void serve(LiveSession& session, const ServeOptions& options, const std::atomic<bool>& stop,
           const std::function<void(unsigned short)>& on_listen = {});

}  // namespace sonarnav
