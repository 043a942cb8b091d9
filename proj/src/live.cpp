#include "sonarnav/live.hpp"

#include "sonarnav/wire.hpp"

namespace sonarnav {

using nlohmann::json;

namespace {

json cmd_json(VelocityCommand c) { return {{"V", c.V}, {"omega", c.omega}}; }

}  // namespace

LiveSession::LiveSession(Scenario scenario, bool fast_sonar, std::filesystem::path scenario_dir, std::uint64_t seed)
    : scenario_(std::move(scenario)), fast_(fast_sonar), scenario_dir_(std::move(scenario_dir)), seed_(seed) {
  restart();
}

void LiveSession::restart() {
  sim_ = std::make_unique<Simulation>(scenario_, seed_ ? seed_ : scenario_.seed, fast_, "live");
  sim_->set_live(true);
  sim_->render();
  pending_.reset();
  operator_ = {};
}

LiveSession::Reply LiveSession::handle(const std::string& line) {
  Reply r;
  ClientMessage msg;
  try {
    msg = parse_client_message(line);
  } catch (const WireError& e) {
    r.to_client = error_message(e.what());
    return r;
  }
  if (const auto* c = std::get_if<CommandMessage>(&msg)) {
    const VelocityCommand clamped = clamp_command(c->cmd);
    pending_ = clamped;
    r.to_client = ack_message("command", ++ack_seq_, {{"applied", cmd_json(clamped)}, {"step", sim_->step_index()}});
    return r;
  }
  const auto& ctl = std::get<ControlMessage>(msg);
  switch (ctl.action) {
    case ControlMessage::Action::start: running_ = true; break;
    case ControlMessage::Action::pause: running_ = false; break;
    case ControlMessage::Action::reset: restart(); break;
    case ControlMessage::Action::select_scenario: {
      const std::string& name = ctl.scenario;
      if (name.find('/') != std::string::npos || name.find('\\') != std::string::npos || name.find("..") != std::string::npos) {
        r.to_client = error_message("scenario names may not contain path separators", "control");
        return r;
      }
      std::filesystem::path p = scenario_dir_ / name;
      if (p.extension() != ".json") p += ".json";
      try {
        scenario_ = load_scenario(p);
      } catch (const ScenarioError& e) {
        r.to_client = error_message(e.what(), "control");
        return r;
      }
      restart();
      r.broadcast = config_message();
      break;
    }
  }
  r.to_client = ack_message("control", ++ack_seq_, {{"action", to_string(ctl.action)}, {"running", running_}});
  return r;
}

json LiveSession::tick() {
  if (pending_) {
    operator_ = *pending_;
    pending_.reset();
  }
  if (running_ && !sim_->finished()) sim_->step(operator_);

  const Simulation& s = *sim_;
  const RobotState& rb = s.robot();
  json j{{"type", "state"},
         {"seq", ++seq_},
         {"step", s.step_index()},
         {"t", s.time()},
         {"scenario", s.scenario().name},
         {"running", running_},
         {"outcome", to_string(s.outcome())},
         {"robot", {{"x", rb.pose.x}, {"y", rb.pose.y}, {"yaw", rb.pose.yaw}, {"radius", rb.radius}}},
         {"operator_cmd", cmd_json(operator_)}};
  const auto& traj = s.report().trajectory;
  if (!traj.empty()) {
    j["cmd_in"] = cmd_json(traj.back().cmd_in);
    j["cmd_out"] = cmd_json(traj.back().cmd_out);
    j["layer"] = to_string(traj.back().layer);
  } else {
    j["cmd_in"] = cmd_json({});
    j["cmd_out"] = cmd_json({});
    j["layer"] = to_string(Layer::PASS);
  }
  j["collisions"] = s.report().collisions.size();
  j["min_clearance"] = s.report().min_clearance;
  json obstacles = json::array();
  for (const auto& d : s.world().dynamic) {
    const Vec2 p = d.position();
    obstacles.push_back({{"x", p.x}, {"y", p.y}, {"radius", d.radius}});
  }
  j["dynamic"] = obstacles;
  json scapes = json::array();
  for (const auto& e : s.energyscapes()) {
    json pj = pooled_json(downsample(e), e.grid, 5);
    pj["sensor"] = e.sensor_index;
    scapes.push_back(std::move(pj));
  }
  j["energyscapes"] = scapes;
  return j;
}

json LiveSession::config_message() const {
  const Simulation& s = *sim_;
  json j{{"type", "config"}, {"scenario", to_json(s.scenario())}, {"dt", s.scenario().sim.dt_s}};
  j["limits"] = {{"V_max", kOperatorVMax}, {"omega_max", kOperatorOmegaMax}};
  json masks = json::array();
  const ControllerMasks& m = s.masks();
  for (std::size_t k = 0; k < m.n_sensors; ++k) {
    json per{{"sensor", k}};
    per["CA"] = pooled_json(downsample(m.ca[k]), m.grid, 0);
    per["OA"] = pooled_json(downsample(m.oa[k]), m.grid, 0);
    per["RCF"] = pooled_json(downsample(m.rcf[k]), m.grid, 0);
    masks.push_back(std::move(per));
  }
  j["masks"] = masks;
  return j;
}

}  // namespace sonarnav
