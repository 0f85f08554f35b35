// Copyright 2026 The climnet Authors
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

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "climnet/community.hpp"
#include "climnet/csv.hpp"
#include "climnet/temporal_graph.hpp"
#include "climnet/util.hpp"

namespace climnet {

using Date = std::chrono::year_month_day;

/// Parses a strict ISO-8601 calendar date, YYYY-MM-DD.
inline std::optional<Date> parse_iso_date(std::string_view s) {
  s = trim(s);
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  std::int64_t y = 0, m = 0, d = 0;
  if (!parse_int64(s.substr(0, 4), y) || !parse_int64(s.substr(5, 2), m) || !parse_int64(s.substr(8, 2), d))
    return std::nullopt;
  Date date{std::chrono::year{static_cast<int>(y)}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

inline std::string format_iso_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

/// Seconds since the Unix epoch of 00:00:00 UTC on `d`.
inline std::int64_t epoch_seconds(const Date& d) {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::sys_days{d}.time_since_epoch()).count();
}

struct CopEvent {
  std::string name;
  Date start;
  Date end;
  std::string location;

  bool operator==(const CopEvent&) const = default;
};

struct EventRowError {
  std::size_t row = 0;  // 1-based line number in the events file
  std::string reason;
};

struct EventLoad {
  std::vector<CopEvent> events;  // sorted by start date
  std::vector<EventRowError> errors;
};

inline constexpr std::string_view kEventsHeader = "name,start,end,location";

/// Reads a "name,start,end,location" calendar. Rows with unparsable dates or
/// an end before the start are reported individually and left out.
inline EventLoad load_events(std::istream& in) {
  EventLoad out;
  std::string line;
  std::size_t row = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    if (!header) {
      if (trim(line) != kEventsHeader) throw CsvError("events file must start with header '" + std::string(kEventsHeader) + "'");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    try {
      f = split_csv_line(line);
    } catch (const CsvError& e) {
      out.errors.push_back({row, e.what()});
      continue;
    }
    if (f.size() != 4) {
      out.errors.push_back({row, "expected 4 fields, got " + std::to_string(f.size())});
      continue;
    }
    auto start = parse_iso_date(f[1]);
    auto end = parse_iso_date(f[2]);
    if (std::string(trim(f[0])).empty()) {
      out.errors.push_back({row, "empty event name"});
    } else if (!start) {
      out.errors.push_back({row, "unparsable start date '" + f[1] + "'"});
    } else if (!end) {
      out.errors.push_back({row, "unparsable end date '" + f[2] + "'"});
    } else if (std::chrono::sys_days{*end} < std::chrono::sys_days{*start}) {
      out.errors.push_back({row, "end date before start date"});
    } else if (epoch_seconds(*start) < 0) {
      out.errors.push_back({row, "start date before 1970-01-01"});
    } else {
      out.events.push_back({std::string(trim(f[0])), *start, *end, std::string(trim(f[3]))});
    }
  }
  if (in.bad()) throw IoError("read failure in events file");
  std::stable_sort(out.events.begin(), out.events.end(), [](const CopEvent& a, const CopEvent& b) {
    return std::chrono::sys_days{a.start} < std::chrono::sys_days{b.start};
  });
  return out;
}

inline constexpr std::string_view kBundledCopEventsCsv = R"(name,start,end,location
COP13,2007-12-03,2007-12-17,"Bali, Indonesia"
COP14,2008-12-01,2008-12-12,"Poznan, Poland"
COP15,2009-12-07,2009-12-18,"Copenhagen, Denmark"
COP16,2010-11-28,2010-12-10,"Cancun, Mexico"
COP17,2011-11-28,2011-12-09,"Durban, South Africa"
COP18,2012-11-26,2012-12-07,"Doha, Qatar"
COP19,2013-11-11,2013-11-23,"Warsaw, Poland"
COP20,2014-12-01,2014-12-12,"Lima, Peru"
COP21,2015-11-30,2015-12-12,"Paris, France"
COP22,2016-11-07,2016-11-18,"Marrakech, Morocco"
COP23,2017-11-06,2017-11-17,"Bonn, Germany"
COP24,2018-12-03,2018-12-14,"Katowice, Poland"
COP25,2019-12-02,2019-12-13,"Madrid, Spain"
)";

/// The UN climate conferences COP13 to COP25.
inline const std::vector<CopEvent>& bundled_cop_events() {
  static const std::vector<CopEvent> events = [] {
    std::istringstream in{std::string(kBundledCopEventsCsv)};
    return load_events(in).events;
  }();
  return events;
}

struct WindowPosition {
  WeekIndex week = 0;
  std::int64_t offset = 0;              // week - anchor_week
  const Snapshot* snapshot = nullptr;  // null when the graph has no snapshot that week
};

/// Weeks anchor - w .. anchor + w around an event. Positions borrow snapshots
/// from the graph the window was taken from, which must outlive it.
struct EventWindow {
  CopEvent event;
  WeekIndex anchor_week = 0;
  std::vector<WindowPosition> positions;
};

inline WeekIndex anchor_week(const CopEvent& e) { return week_of(epoch_seconds(e.start)); }

inline EventWindow event_window(const TemporalGraph& g, const CopEvent& e, std::int64_t w = 10) {
  if (w < 0) throw std::invalid_argument("event_window: half-width must be >= 0");
  EventWindow win{e, anchor_week(e), {}};
  win.positions.reserve(static_cast<std::size_t>(2 * w + 1));
  for (std::int64_t off = -w; off <= w; ++off) {
    const WeekIndex week = win.anchor_week + off;
    win.positions.push_back({week, off, g.find(week)});
  }
  return win;
}

struct WindowReportRow {
  WeekIndex week = 0;
  std::int64_t offset = 0;
  struct Metrics {
    std::size_t num_nodes = 0;
    std::size_t num_edges = 0;
    double density = 0.0;
    std::size_t num_communities = 0;
    double modularity = 0.0;
  };
  std::optional<Metrics> metrics;  // empty for missing weeks
};

inline std::vector<WindowReportRow> window_report(const EventWindow& win, std::uint64_t seed) {
  std::vector<WindowReportRow> rows;
  rows.reserve(win.positions.size());
  for (const auto& pos : win.positions) {
    WindowReportRow row{pos.week, pos.offset, std::nullopt};
    if (pos.snapshot != nullptr && pos.snapshot->adjacency.total_weight() > 0.0) {
      const auto st = snapshot_stats(*pos.snapshot);
      const auto lv = louvain(*pos.snapshot, seed);
      row.metrics = WindowReportRow::Metrics{st.num_nodes, st.num_edges, st.density,
                                             lv.final_partition.num_communities, lv.final_partition.modularity};
    }
    rows.push_back(row);
  }
  return rows;
}

inline constexpr std::string_view kWindowReportHeader =
    "event,week,offset,num_nodes,num_edges,density,num_communities,modularity";

inline void write_window_report(std::ostream& out, const CopEvent& e, const std::vector<WindowReportRow>& rows) {
  out << kWindowReportHeader << '\n';
  for (const auto& r : rows) {
    out << csv_escape(e.name) << ',' << r.week << ',' << r.offset << ',';
    if (r.metrics) {
      const auto& m = *r.metrics;
      out << m.num_nodes << ',' << m.num_edges << ',' << format_double(m.density) << ',' << m.num_communities << ','
          << format_double(m.modularity) << '\n';
    } else {
      out << ",,,,\n";
    }
  }
}

}  // namespace climnet
