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

#ifndef MINER_DATETIME_H_
#define MINER_DATETIME_H_

#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>

#include "miner/text.h"

namespace miner {

enum class DatetimeFormat {
  // dates
  kLongPt,   // 12 de março de 2020
  kLongEn,   // 12 March 2020
  kUsEn,     // March 12, 2020
  kSlash,    // 12/03/2020
  kDash,     // 12-03-2020
  kDot,      // 12.03.2020
  kIso,      // 2020-03-12
  // times
  kColon,    // 10:00
  kHour,     // 10h00, 10h
  kAmPm,     // 10:00 a.m.
};

struct DatetimeValue {
  bool is_time = false;
  int year = 0, month = 0, day = 0;
  int hour = 0, minute = 0;
  DatetimeFormat format = DatetimeFormat::kIso;
  bool padded = true;        // two-digit day / hour in numeric formats
  bool capitalized = false;  // month name starts uppercase
  bool bare_hour = false;    // "10h" without minutes
};

int days_in_month(int year, int month);

// Strict parse of a whole date or time mention. Spelled-out forms
// ("doze de março", "às dez horas") return nullopt.
std::optional<DatetimeValue> parse_datetime(std::string_view surface);
std::string render_datetime(const DatetimeValue& value, Language lang);

enum class DatetimeRule {
  kFormatVariant,
  kDayShift,
  kMonthShift,
  kYearShift,
  kHourShift,
  kMinuteShift,
};

using DatetimeVariants = std::set<DatetimeRule>;
DatetimeVariants all_datetime_rules();
std::string_view rule_name(DatetimeRule rule);
DatetimeRule parse_rule(std::string_view name);

// Varies a date/time mention in format or content. The output always parses
// and stays within calendar/clock ranges. Unparseable input is returned
// verbatim (with a warning).
std::string perturb_datetime(std::string_view surface, const DatetimeVariants& rules,
                             std::mt19937_64& rng, Language lang);

}  // namespace miner

#endif  // MINER_DATETIME_H_
