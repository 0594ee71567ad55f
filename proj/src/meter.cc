// Copyright 2026 The MiNER Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "miner/meter.h"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "miner/errors.h"

namespace miner {

namespace {
constexpr double kJoulesPerKwh = 3.6e6;
}  // namespace

double steady_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

ResourceReport& ResourceReport::operator+=(const ResourceReport& other) {
  wall_seconds += other.wall_seconds;
  energy_kwh += other.energy_kwh;
  kg_co2e += other.kg_co2e;
  measured_power = measured_power || other.measured_power;
  return *this;
}

nlohmann::ordered_json ResourceReport::to_json(bool with_energy) const {
  nlohmann::ordered_json j;
  j["wall_seconds"] = wall_seconds;
  if (with_energy) {
    j["energy_kWh"] = energy_kwh;
    j["kg_CO2e"] = kg_co2e;
    j["power_source"] = measured_power ? "counters" : "configured";
  }
  return j;
}

void MeterConfig::validate() const {
  if (!carbon_intensity) throw ConfigError("meter: carbon_intensity is required");
  if (!(*carbon_intensity > 0)) throw ConfigError("meter: carbon_intensity must be positive");
  if (!(average_watts >= 0)) throw ConfigError("meter: average_watts must be non-negative");
  if (!(interval_ms > 0)) throw ConfigError("meter: interval_ms must be positive");
}

nlohmann::ordered_json MeterConfig::to_json() const {
  nlohmann::ordered_json j;
  j["average_watts"] = average_watts;
  j["carbon_intensity"] = carbon_intensity ? nlohmann::ordered_json(*carbon_intensity) : nullptr;
  j["interval_ms"] = interval_ms;
  j["use_counters"] = use_counters;
  return j;
}

MeterConfig MeterConfig::from_json(const nlohmann::json& j) {
  MeterConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "average_watts") {
      c.average_watts = value.get<double>();
    } else if (key == "carbon_intensity") {
      if (!value.is_null()) c.carbon_intensity = value.get<double>();
    } else if (key == "interval_ms") {
      c.interval_ms = value.get<double>();
    } else if (key == "use_counters") {
      c.use_counters = value.get<bool>();
    } else {
      throw ConfigError("meter: unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

namespace {

class RaplCounter : public EnergyCounter {
 public:
  struct Domain {
    std::filesystem::path energy;
    double range_uj = 0;
    double last_uj = 0;
  };

  explicit RaplCounter(std::vector<Domain> domains) : domains_(std::move(domains)) {}

  // Accumulates deltas so that counter wrap-around is handled.
  double joules() override {
    for (auto& d : domains_) {
      double now = read(d.energy);
      double delta = now - d.last_uj;
      if (delta < 0) delta += d.range_uj;
      total_uj_ += delta;
      d.last_uj = now;
    }
    return total_uj_ * 1e-6;
  }

  static double read(const std::filesystem::path& p) {
    std::ifstream in(p);
    double v = 0;
    in >> v;
    return v;
  }

 private:
  std::vector<Domain> domains_;
  double total_uj_ = 0;
};

}  // namespace

std::unique_ptr<EnergyCounter> open_rapl_counter() {
  namespace fs = std::filesystem;
  const fs::path root = "/sys/class/powercap";
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return nullptr;
  std::vector<RaplCounter::Domain> domains;
  for (const auto& entry : fs::directory_iterator(root, ec)) {
    std::string name = entry.path().filename().string();
    // Top-level package domains only ("intel-rapl:0"), sub-domains are
    // already included in the package reading.
    if (name.rfind("intel-rapl:", 0) != 0 || name.find(':', 11) != std::string::npos) continue;
    std::ifstream probe(entry.path() / "energy_uj");
    double uj = 0;
    if (!(probe >> uj)) continue;
    RaplCounter::Domain d;
    d.energy = entry.path() / "energy_uj";
    d.range_uj = RaplCounter::read(entry.path() / "max_energy_range_uj");
    d.last_uj = uj;
    domains.push_back(d);
  }
  if (domains.empty()) return nullptr;
  return std::make_unique<RaplCounter>(std::move(domains));
}

ResourceMeter::ResourceMeter(MeterConfig config, Clock clock,
                             std::unique_ptr<EnergyCounter> counter)
    : config_(std::move(config)), clock_(std::move(clock)), counter_(std::move(counter)) {
  config_.validate();
  if (!clock_) clock_ = steady_seconds;
  if (config_.use_counters && !counter_) {
    counter_ = open_rapl_counter();
    if (!counter_) log_warning("energy counters unavailable; using configured average watts");
  }
  if (!config_.use_counters) counter_.reset();
}

ResourceReport ResourceMeter::report_for(double seconds) const {
  ResourceReport r;
  r.wall_seconds = seconds;
  r.energy_kwh = config_.average_watts * seconds / kJoulesPerKwh;
  r.kg_co2e = r.energy_kwh * *config_.carbon_intensity;
  return r;
}

ResourceReport ResourceMeter::measure(const std::function<void()>& thunk) {
  double joules_before = 0;
  if (counter_) {
    std::lock_guard<std::mutex> lock(counter_mu_);
    joules_before = counter_->joules();
  }
  double start = clock_();
  thunk();
  double seconds = clock_() - start;
  if (!counter_) return report_for(seconds);
  double joules;
  {
    std::lock_guard<std::mutex> lock(counter_mu_);
    joules = counter_->joules() - joules_before;
  }
  ResourceReport r;
  r.wall_seconds = seconds;
  r.energy_kwh = joules / kJoulesPerKwh;
  r.kg_co2e = r.energy_kwh * *config_.carbon_intensity;
  r.measured_power = true;
  return r;
}

void MeterLog::add(const std::string& key, const ResourceReport& report) {
  std::lock_guard<std::mutex> lock(mu_);
  entries_.emplace_back(key, report);
}

std::vector<std::pair<std::string, ResourceReport>> MeterLog::entries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_;
}

ResourceReport MeterLog::total() const {
  std::lock_guard<std::mutex> lock(mu_);
  ResourceReport total;
  for (const auto& [key, r] : entries_) total += r;
  return total;
}

}  // namespace miner
