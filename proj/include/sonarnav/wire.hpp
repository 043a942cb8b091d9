#pragma once

// Newline-delimited JSON messages exchanged with live clients. See
// docs/wire_protocol.md for the field-by-field description.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sonarnav/controller.hpp"
#include "sonarnav/energyscape.hpp"
#include "sonarnav/masks.hpp"
#include "sonarnav/scenario.hpp"

namespace sonarnav {

class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kOperatorVMax = 0.3;      // m/s
inline constexpr double kOperatorOmegaMax = 1.0;  // rad/s
inline constexpr std::size_t kMaxPayloadRows = 100;
inline constexpr std::size_t kMaxPayloadCols = 64;

struct CommandMessage {
  VelocityCommand cmd;
};

struct ControlMessage {
  enum class Action { start, pause, reset, select_scenario };
  Action action{Action::start};
  std::string scenario;  // for select_scenario
};

using ClientMessage = std::variant<CommandMessage, ControlMessage>;

/// Parses one client line. Throws WireError with a human-readable reason.
ClientMessage parse_client_message(const std::string& line);

const char* to_string(ControlMessage::Action a);

/// Operator commands clamped to the platform limits; non-finite values become 0.
VelocityCommand clamp_command(VelocityCommand cmd, double V_max = kOperatorVMax,
                              double omega_max = kOperatorOmegaMax);

/// Max-pooled copy of a range-major matrix.
struct Pooled {
  std::size_t rows{0}, cols{0};
  std::size_t row_factor{1}, col_factor{1};
  std::vector<float> data;
};

/// Pools with the smallest integer factors that bring the shape within max_rows x max_cols.
Pooled max_pool(const std::vector<float>& values, std::size_t n_rows, std::size_t n_cols,
                std::size_t max_rows = kMaxPayloadRows, std::size_t max_cols = kMaxPayloadCols);
Pooled downsample(const Energyscape& e, std::size_t max_rows = kMaxPayloadRows,
                  std::size_t max_cols = kMaxPayloadCols);
/// Ternary pooling: a cell takes the value of its first non-zero voxel in storage order.
Pooled downsample(const TernaryMask& m, std::size_t max_rows = kMaxPayloadRows,
                  std::size_t max_cols = kMaxPayloadCols);

nlohmann::json pooled_json(const Pooled& p, const Grid& grid, int decimals = 6);

nlohmann::json ack_message(const std::string& ref, std::uint64_t seq, nlohmann::json extra = nlohmann::json::object());
nlohmann::json error_message(const std::string& message, const std::string& ref = {});

/// One message per line: compact JSON followed by '\n'.
std::string to_line(const nlohmann::json& j);

}  // namespace sonarnav
