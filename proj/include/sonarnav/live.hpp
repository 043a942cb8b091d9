#pragma once

// Live teleoperation session: a wall-clock driven simulation whose input
// velocities come from operator commands. Transport-agnostic; the WebSocket
// server feeds it lines and broadcasts what it returns.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "sonarnav/scenario.hpp"
#include "sonarnav/sim.hpp"

namespace sonarnav {

class LiveSession {
 public:
  LiveSession(Scenario scenario, bool fast_sonar, std::filesystem::path scenario_dir = {}, std::uint64_t seed = 0);

  struct Reply {
    nlohmann::json to_client;                 // ack or error
    std::optional<nlohmann::json> broadcast;  // config after a scenario change
  };
  /// Handles one client line. Never throws for client mistakes.
  Reply handle(const std::string& line);

  /// Advances one step when running and returns the state message.
  nlohmann::json tick();

  nlohmann::json config_message() const;

  bool running() const { return running_; }
  const Simulation& simulation() const { return *sim_; }
  VelocityCommand operator_command() const { return operator_; }

 private:
  void restart();

  Scenario scenario_;
  bool fast_;
  std::filesystem::path scenario_dir_;
  std::uint64_t seed_;
  std::unique_ptr<Simulation> sim_;
  bool running_{true};
  std::optional<VelocityCommand> pending_;
  VelocityCommand operator_;
  std::uint64_t seq_{0};
  std::uint64_t ack_seq_{0};
};

}  // namespace sonarnav
