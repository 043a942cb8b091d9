#include "sonarnav/wire.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sonarnav {

using nlohmann::json;

const char* to_string(ControlMessage::Action a) {
  switch (a) {
    case ControlMessage::Action::start: return "start";
    case ControlMessage::Action::pause: return "pause";
    case ControlMessage::Action::reset: return "reset";
    case ControlMessage::Action::select_scenario: return "select_scenario";
  }
  return "start";
}

ClientMessage parse_client_message(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error&) {
    throw WireError("malformed JSON");
  }
  if (!j.is_object()) throw WireError("message must be a JSON object");
  auto type_it = j.find("type");
  if (type_it == j.end() || !type_it->is_string()) throw WireError("missing string field 'type'");
  const std::string type = type_it->get<std::string>();

  if (type == "command") {
    auto num = [&](const char* key) {
      auto it = j.find(key);
      if (it == j.end() || !it->is_number()) throw WireError(std::string("command needs numeric '") + key + "'");
      return it->get<double>();
    };
    return CommandMessage{{num("V"), num("omega")}};
  }
  if (type == "control") {
    auto it = j.find("action");
    if (it == j.end() || !it->is_string()) throw WireError("control needs string 'action'");
    const std::string a = it->get<std::string>();
    ControlMessage m;
    if (a == "start") m.action = ControlMessage::Action::start;
    else if (a == "pause") m.action = ControlMessage::Action::pause;
    else if (a == "reset") m.action = ControlMessage::Action::reset;
    else if (a == "select_scenario") {
      m.action = ControlMessage::Action::select_scenario;
      auto s = j.find("scenario");
      if (s == j.end() || !s->is_string() || s->get<std::string>().empty())
        throw WireError("select_scenario needs string 'scenario'");
      m.scenario = s->get<std::string>();
    } else {
      throw WireError("unknown control action '" + a + "'");
    }
    return m;
  }
  throw WireError("unsupported message type '" + type + "'");
}

VelocityCommand clamp_command(VelocityCommand cmd, double V_max, double omega_max) {
  if (!std::isfinite(cmd.V)) cmd.V = 0.0;
  if (!std::isfinite(cmd.omega)) cmd.omega = 0.0;
  return {std::clamp(cmd.V, -V_max, V_max), std::clamp(cmd.omega, -omega_max, omega_max)};
}

namespace {

std::size_t factor_for(std::size_t n, std::size_t limit) {
  if (limit == 0) throw std::invalid_argument("max_pool: limit must be > 0");
  return std::max<std::size_t>(1, (n + limit - 1) / limit);
}

template <typename Combine>
Pooled pool(std::size_t n_rows, std::size_t n_cols, std::size_t max_rows, std::size_t max_cols, float init,
            Combine combine) {
  Pooled p;
  p.row_factor = factor_for(n_rows, max_rows);
  p.col_factor = factor_for(n_cols, max_cols);
  p.rows = (n_rows + p.row_factor - 1) / p.row_factor;
  p.cols = (n_cols + p.col_factor - 1) / p.col_factor;
  p.data.assign(p.rows * p.cols, init);
  for (std::size_t i = 0; i < n_rows; ++i)
    for (std::size_t j = 0; j < n_cols; ++j) {
      float& cell = p.data[(i / p.row_factor) * p.cols + j / p.col_factor];
      cell = combine(cell, i * n_cols + j);
    }
  return p;
}

}  // namespace

Pooled max_pool(const std::vector<float>& values, std::size_t n_rows, std::size_t n_cols, std::size_t max_rows,
                std::size_t max_cols) {
  if (values.size() != n_rows * n_cols) throw std::invalid_argument("max_pool: size mismatch");
  return pool(n_rows, n_cols, max_rows, max_cols, -std::numeric_limits<float>::infinity(),
              [&](float cell, std::size_t k) { return std::max(cell, values[k]); });
}

Pooled downsample(const Energyscape& e, std::size_t max_rows, std::size_t max_cols) {
  return max_pool(e.energy, e.grid.n_range, e.grid.n_angle, max_rows, max_cols);
}

Pooled downsample(const TernaryMask& m, std::size_t max_rows, std::size_t max_cols) {
  return pool(m.grid.n_range, m.grid.n_angle, max_rows, max_cols, 0.0f,
              [&](float cell, std::size_t k) { return cell != 0.0f ? cell : static_cast<float>(m.values[k]); });
}

json pooled_json(const Pooled& p, const Grid& grid, int decimals) {
  const double scale = std::pow(10.0, decimals);
  json data = json::array();
  for (float v : p.data) data.push_back(std::round(static_cast<double>(v) * scale) / scale);
  return {{"rows", p.rows},
          {"cols", p.cols},
          {"range_bin_m", grid.range_bin * static_cast<double>(p.row_factor)},
          {"angle_min_deg", grid.angle_min_deg},
          {"angle_step_deg", grid.angle_step_deg * static_cast<double>(p.col_factor)},
          {"data", data}};
}

json ack_message(const std::string& ref, std::uint64_t seq, json extra) {
  json j{{"type", "ack"}, {"ref", ref}, {"seq", seq}};
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

json error_message(const std::string& message, const std::string& ref) {
  json j{{"type", "error"}, {"message", message}};
  if (!ref.empty()) j["ref"] = ref;
  return j;
}

std::string to_line(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace) + "\n"; }

}  // namespace sonarnav
