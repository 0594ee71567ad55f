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

// Wall-time, energy and carbon accounting for measured computations.

#ifndef MINER_METER_H_
#define MINER_METER_H_

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace miner {

struct ResourceReport {
  double wall_seconds = 0.0;
  double energy_kwh = 0.0;
  double kg_co2e = 0.0;
  bool measured_power = false;  // energy came from hardware counters

  ResourceReport& operator+=(const ResourceReport& other);
  // Energy fields are omitted when `with_energy` is false.
  nlohmann::ordered_json to_json(bool with_energy = true) const;
};

struct MeterConfig {
  double average_watts = 0.0;
  std::optional<double> carbon_intensity;  // kg CO2e per kWh; required
  double interval_ms = 100.0;
  bool use_counters = true;

  // Throws ConfigError: missing or non-positive intensity, negative watts,
  // non-positive interval.
  void validate() const;
  nlohmann::ordered_json to_json() const;
  static MeterConfig from_json(const nlohmann::json& j);
};

// Cumulative energy counter in joules (e.g. RAPL).
class EnergyCounter {
 public:
  virtual ~EnergyCounter() = default;
  virtual double joules() = 0;
};

// Sums every package domain under /sys/class/powercap; nullptr when none is
// readable.
std::unique_ptr<EnergyCounter> open_rapl_counter();

class ResourceMeter {
 public:
  using Clock = std::function<double()>;  // seconds, monotone

  // Falls back to configured watts (with a warning) when counters are
  // requested but unavailable.
  explicit ResourceMeter(MeterConfig config, Clock clock = nullptr,
                         std::unique_ptr<EnergyCounter> counter = nullptr);

  ResourceReport measure(const std::function<void()>& thunk);
  // Report for a known duration under the configured power model.
  ResourceReport report_for(double seconds) const;
  const MeterConfig& config() const { return config_; }
  bool has_counters() const { return counter_ != nullptr; }

 private:
  MeterConfig config_;
  Clock clock_;
  std::unique_ptr<EnergyCounter> counter_;
  std::mutex counter_mu_;
};

// Thread-safe collection of per-item reports.
class MeterLog {
 public:
  void add(const std::string& key, const ResourceReport& report);
  std::vector<std::pair<std::string, ResourceReport>> entries() const;
  ResourceReport total() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::pair<std::string, ResourceReport>> entries_;
};

double steady_seconds();

}  // namespace miner

#endif  // MINER_METER_H_
