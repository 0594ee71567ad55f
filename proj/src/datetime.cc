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

#include "miner/datetime.h"

#include <array>
#include <regex>
#include <vector>

#include <fmt/core.h>

#include "miner/errors.h"

namespace miner {

namespace {

constexpr std::array<const char*, 12> kMonthsPt = {
    "janeiro", "fevereiro", "março",    "abril",   "maio",     "junho",
    "julho",   "agosto",    "setembro", "outubro", "novembro", "dezembro"};
constexpr std::array<const char*, 12> kMonthsEn = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

int month_from_name(std::string_view word, bool* capitalized, bool* english) {
  std::string folded = fold_diacritics(word);
  for (int i = 0; i < 12; ++i) {
    bool pt = folded == fold_diacritics(kMonthsPt[i]);
    bool en = folded == kMonthsEn[i];
    if (pt || en) {
      *capitalized = !word.empty() && word[0] >= 'A' && word[0] <= 'Z';
      *english = en && !pt;
      return i + 1;
    }
  }
  return 0;
}

bool valid_date(const DatetimeValue& v) {
  return v.year >= 1000 && v.year <= 9999 && v.month >= 1 && v.month <= 12 &&
         v.day >= 1 && v.day <= days_in_month(v.year, v.month);
}

bool valid_time(const DatetimeValue& v) {
  return v.hour >= 0 && v.hour <= 23 && v.minute >= 0 && v.minute <= 59;
}

std::string capitalize(std::string word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] -= 32;
  return word;
}

std::string month_name(int month, Language lang, bool capitalized) {
  std::string name = lang == Language::kPt ? kMonthsPt[month - 1] : kMonthsEn[month - 1];
  if (lang == Language::kEn || capitalized) name = capitalize(name);
  return name;
}

}  // namespace

int days_in_month(int year, int month) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) return 0;
  if (month == 2) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays[month - 1];
}

std::optional<DatetimeValue> parse_datetime(std::string_view raw) {
  static const std::regex long_pt(R"(^(\d{1,2}) de (\S+) de (\d{4})$)",
                                  std::regex::icase);
  static const std::regex numeric(R"(^(\d{1,2})([/.\-])(\d{1,2})\2(\d{4})$)");
  static const std::regex iso(R"(^(\d{4})-(\d{1,2})-(\d{1,2})$)");
  static const std::regex long_en(R"(^(\d{1,2}) (\S+),? (\d{4})$)");
  static const std::regex us_en(R"(^(\S+) (\d{1,2}),? (\d{4})$)");
  static const std::regex colon(R"(^(\d{1,2}):(\d{2})$)");
  static const std::regex hour(R"(^(\d{1,2})[hH](\d{2})?$)");
  static const std::regex ampm(R"(^(\d{1,2}):(\d{2}) ?([aApP])\.?[mM]\.?$)");

  std::string s = trim(raw);
  std::smatch m;
  DatetimeValue v;
  bool cap = false, english = false;
  if (std::regex_match(s, m, long_pt)) {
    v.day = std::stoi(m[1]);
    v.month = month_from_name(m[2].str(), &cap, &english);
    v.year = std::stoi(m[3]);
    v.format = DatetimeFormat::kLongPt;
    v.capitalized = cap;
    v.padded = m[1].length() == 2;
  } else if (std::regex_match(s, m, numeric)) {
    v.day = std::stoi(m[1]);
    v.month = std::stoi(m[3]);
    v.year = std::stoi(m[4]);
    char sep = m[2].str()[0];
    v.format = sep == '/' ? DatetimeFormat::kSlash
               : sep == '-' ? DatetimeFormat::kDash
                            : DatetimeFormat::kDot;
    v.padded = m[1].length() == 2;
  } else if (std::regex_match(s, m, iso)) {
    v.year = std::stoi(m[1]);
    v.month = std::stoi(m[2]);
    v.day = std::stoi(m[3]);
    v.format = DatetimeFormat::kIso;
  } else if (std::regex_match(s, m, long_en)) {
    v.day = std::stoi(m[1]);
    v.month = month_from_name(m[2].str(), &cap, &english);
    v.year = std::stoi(m[3]);
    v.format = DatetimeFormat::kLongEn;
    v.capitalized = true;
    v.padded = m[1].length() == 2;
  } else if (std::regex_match(s, m, us_en)) {
    v.month = month_from_name(m[1].str(), &cap, &english);
    v.day = std::stoi(m[2]);
    v.year = std::stoi(m[3]);
    v.format = DatetimeFormat::kUsEn;
    v.capitalized = true;
  } else if (std::regex_match(s, m, colon)) {
    v.is_time = true;
    v.hour = std::stoi(m[1]);
    v.minute = std::stoi(m[2]);
    v.format = DatetimeFormat::kColon;
    v.padded = m[1].length() == 2;
  } else if (std::regex_match(s, m, hour)) {
    v.is_time = true;
    v.hour = std::stoi(m[1]);
    v.bare_hour = !m[2].matched;
    v.minute = m[2].matched ? std::stoi(m[2]) : 0;
    v.format = DatetimeFormat::kHour;
    v.padded = m[1].length() == 2;
  } else if (std::regex_match(s, m, ampm)) {
    v.is_time = true;
    int h = std::stoi(m[1]);
    if (h < 1 || h > 12) return std::nullopt;
    bool pm = m[3].str()[0] == 'p' || m[3].str()[0] == 'P';
    v.hour = (h % 12) + (pm ? 12 : 0);
    v.minute = std::stoi(m[2]);
    v.format = DatetimeFormat::kAmPm;
  } else {
    return std::nullopt;
  }
  if (v.is_time ? !valid_time(v) : !valid_date(v)) return std::nullopt;
  return v;
}

std::string render_datetime(const DatetimeValue& v, Language lang) {
  auto day = [&] { return v.padded ? fmt::format("{:02d}", v.day) : std::to_string(v.day); };
  switch (v.format) {
    case DatetimeFormat::kLongPt:
      return fmt::format("{} de {} de {}", v.day, month_name(v.month, Language::kPt, v.capitalized),
                         v.year);
    case DatetimeFormat::kLongEn:
      return fmt::format("{} {} {}", v.day, month_name(v.month, Language::kEn, true), v.year);
    case DatetimeFormat::kUsEn:
      return fmt::format("{} {}, {}", month_name(v.month, Language::kEn, true), v.day, v.year);
    case DatetimeFormat::kSlash:
      return fmt::format("{}/{:02d}/{}", day(), v.month, v.year);
    case DatetimeFormat::kDash:
      return fmt::format("{}-{:02d}-{}", day(), v.month, v.year);
    case DatetimeFormat::kDot:
      return fmt::format("{}.{:02d}.{}", day(), v.month, v.year);
    case DatetimeFormat::kIso:
      return fmt::format("{}-{:02d}-{:02d}", v.year, v.month, v.day);
    case DatetimeFormat::kColon:
      return v.padded ? fmt::format("{:02d}:{:02d}", v.hour, v.minute)
                      : fmt::format("{}:{:02d}", v.hour, v.minute);
    case DatetimeFormat::kHour: {
      std::string h = v.padded ? fmt::format("{:02d}", v.hour) : std::to_string(v.hour);
      if (v.bare_hour && v.minute == 0) return h + "h";
      return fmt::format("{}h{:02d}", h, v.minute);
    }
    case DatetimeFormat::kAmPm: {
      int h12 = v.hour % 12 == 0 ? 12 : v.hour % 12;
      return fmt::format("{}:{:02d} {}", h12, v.minute, v.hour < 12 ? "a.m." : "p.m.");
    }
  }
  (void)lang;
  return {};
}

DatetimeVariants all_datetime_rules() {
  return {DatetimeRule::kFormatVariant, DatetimeRule::kDayShift,
          DatetimeRule::kMonthShift,    DatetimeRule::kYearShift,
          DatetimeRule::kHourShift,     DatetimeRule::kMinuteShift};
}

std::string_view rule_name(DatetimeRule rule) {
  switch (rule) {
    case DatetimeRule::kFormatVariant: return "format";
    case DatetimeRule::kDayShift: return "day_shift";
    case DatetimeRule::kMonthShift: return "month_shift";
    case DatetimeRule::kYearShift: return "year_shift";
    case DatetimeRule::kHourShift: return "hour_shift";
    case DatetimeRule::kMinuteShift: return "minute_shift";
  }
  return "";
}

DatetimeRule parse_rule(std::string_view name) {
  for (DatetimeRule r : all_datetime_rules()) {
    if (rule_name(r) == name) return r;
  }
  throw ConfigError("unknown datetime rule '" + std::string(name) + "'");
}

namespace {

int uniform_other(std::mt19937_64& rng, int lo, int hi, int current) {
  if (hi <= lo) return lo;
  int v = lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo));
  return v >= current ? v + 1 : v;  // skip `current` in [lo, hi]
}

std::vector<DatetimeFormat> formats_for(bool is_time, Language lang) {
  if (is_time) {
    return lang == Language::kPt
               ? std::vector<DatetimeFormat>{DatetimeFormat::kColon, DatetimeFormat::kHour}
               : std::vector<DatetimeFormat>{DatetimeFormat::kColon, DatetimeFormat::kAmPm};
  }
  if (lang == Language::kPt) {
    return {DatetimeFormat::kLongPt, DatetimeFormat::kSlash, DatetimeFormat::kDash,
            DatetimeFormat::kDot, DatetimeFormat::kIso};
  }
  return {DatetimeFormat::kLongEn, DatetimeFormat::kUsEn, DatetimeFormat::kSlash,
          DatetimeFormat::kDash, DatetimeFormat::kIso};
}

DatetimeValue apply_rule(DatetimeValue v, DatetimeRule rule, std::mt19937_64& rng,
                         Language lang) {
  switch (rule) {
    case DatetimeRule::kFormatVariant: {
      auto formats = formats_for(v.is_time, lang);
      std::vector<DatetimeFormat> others;
      for (auto f : formats) {
        if (f != v.format) others.push_back(f);
      }
      v.format = others[rng() % others.size()];
      v.bare_hour = false;
      break;
    }
    case DatetimeRule::kDayShift:
      v.day = uniform_other(rng, 1, days_in_month(v.year, v.month), v.day);
      break;
    case DatetimeRule::kMonthShift:
      v.month = uniform_other(rng, 1, 12, v.month);
      v.day = std::min(v.day, days_in_month(v.year, v.month));
      break;
    case DatetimeRule::kYearShift: {
      int delta = 1 + static_cast<int>(rng() % 3);
      v.year += (rng() % 2 == 0) ? delta : -delta;
      v.day = std::min(v.day, days_in_month(v.year, v.month));
      break;
    }
    case DatetimeRule::kHourShift:
      v.hour = uniform_other(rng, 0, 23, v.hour);
      if (v.format == DatetimeFormat::kHour || v.format == DatetimeFormat::kColon) {
        v.padded = v.padded || v.hour >= 10;
      }
      break;
    case DatetimeRule::kMinuteShift:
      v.minute = uniform_other(rng, 0, 59, v.minute);
      v.bare_hour = false;
      break;
  }
  return v;
}

}  // namespace

std::string perturb_datetime(std::string_view surface, const DatetimeVariants& rules,
                             std::mt19937_64& rng, Language lang) {
  auto parsed = parse_datetime(surface);
  if (!parsed) {
    log_warning("unparseable date/time '" + std::string(surface) + "' left unchanged");
    return std::string(surface);
  }
  std::vector<DatetimeRule> applicable;
  for (DatetimeRule r : rules) {
    bool time_rule = r == DatetimeRule::kHourShift || r == DatetimeRule::kMinuteShift;
    bool date_rule = r == DatetimeRule::kDayShift || r == DatetimeRule::kMonthShift ||
                     r == DatetimeRule::kYearShift;
    if ((parsed->is_time && date_rule) || (!parsed->is_time && time_rule)) continue;
    applicable.push_back(r);
  }
  if (applicable.empty()) return std::string(surface);
  // Formats from the other language are normalized into this language's set.
  auto formats = formats_for(parsed->is_time, lang);
  bool native = false;
  for (auto f : formats) native |= f == parsed->format;
  for (int attempt = 0; attempt < 16; ++attempt) {
    DatetimeRule rule = applicable[rng() % applicable.size()];
    DatetimeValue v = apply_rule(*parsed, rule, rng, lang);
    if (!native && rule != DatetimeRule::kFormatVariant) v.format = formats.front();
    std::string out = render_datetime(v, lang);
    if (out != surface && parse_datetime(out)) return out;
  }
  return std::string(surface);
}

}  // namespace miner
