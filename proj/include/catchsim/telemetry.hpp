// Copyright 2026 The catchsim Authors
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

#ifndef CATCHSIM__TELEMETRY_HPP_
#define CATCHSIM__TELEMETRY_HPP_

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "catchsim/errors.hpp"
#include "catchsim/supervisor.hpp"

namespace catchsim
{

// One row per control tick. Reference columns are NaN while no position
// reference exists (before a catch).
struct TelemetryRecord
{
  double time{0.0};
  double robot_pos{0.0};
  double robot_vel{0.0};
  double planarizer_pos{0.0};
  double planarizer_vel{0.0};
  double deflection{0.0};
  double spring_force{0.0};
  double force_raw{0.0};
  double force_filtered{0.0};
  double motor_cmd{0.0};
  Mode mode{Mode::Shadowing};
  double ref_pos{std::numeric_limits<double>::quiet_NaN()};
  double ref_vel{std::numeric_limits<double>::quiet_NaN()};
  std::string event;   // ';'-separated tags, empty for most rows
};

inline constexpr std::string_view kTelemetryHeader =
  "t,y_r,v_r,y_p,v_p,dy,F_sp,F_raw,F_filt,v_motor_cmd,mode,y_des,v_des,event";

inline constexpr std::string_view kTelemetryUnits =
  "# units: t[s] y_r[m] v_r[m/s] y_p[m] v_p[m/s] dy[m] F_sp[N] F_raw[N] F_filt[N] "
  "v_motor_cmd[m/s] mode[-] y_des[m] v_des[m/s] event[-]";

namespace detail
{

inline void put_number(std::string & out, double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  out += buf;
}

}  // namespace detail

/// Serializes telemetry as CSV. `metadata` lines are emitted as `# ` comments
/// after the units line; the header row follows.
inline void write_csv(
  std::ostream & out, std::span<const TelemetryRecord> rows, std::span<const std::string> metadata = {})
{
  out << "# catchsim telemetry\n" << kTelemetryUnits << '\n';
  for (const auto & m : metadata) {out << "# " << m << '\n';}
  out << kTelemetryHeader << '\n';
  std::string line;
  for (const auto & r : rows) {
    line.clear();
    for (double v : {r.time, r.robot_pos, r.robot_vel, r.planarizer_pos, r.planarizer_vel, r.deflection,
        r.spring_force, r.force_raw, r.force_filtered, r.motor_cmd})
    {
      detail::put_number(line, v);
      line += ',';
    }
    line += to_string(r.mode);
    line += ',';
    detail::put_number(line, r.ref_pos);
    line += ',';
    detail::put_number(line, r.ref_vel);
    line += ',';
    line += r.event;
    line += '\n';
    out << line;
  }
}

inline void write_csv(
  std::span<const TelemetryRecord> rows, const std::string & path,
  std::span<const std::string> metadata = {})
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {throw IoError("cannot write '" + path + "'");}
  write_csv(out, rows, metadata);
  if (!out) {throw IoError("write failed for '" + path + "'");}
}

inline std::vector<TelemetryRecord> parse_csv(std::string_view text)
{
  std::vector<TelemetryRecord> rows;
  bool header_seen = false;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) {end = text.size();}
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {line.remove_suffix(1);}
    if (line.empty() || line.front() == '#') {continue;}
    if (!header_seen) {
      if (line != kTelemetryHeader) {throw IoError("telemetry header mismatch on line " + std::to_string(line_no));}
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t f0 = 0;
    while (true) {
      const auto comma = line.find(',', f0);
      fields.emplace_back(line.substr(f0, comma == std::string_view::npos ? std::string_view::npos : comma - f0));
      if (comma == std::string_view::npos) {break;}
      f0 = comma + 1;
    }
    if (fields.size() != 14) {
      throw IoError("line " + std::to_string(line_no) + ": expected 14 fields, got " + std::to_string(fields.size()));
    }
    auto num = [&](std::size_t i) {
        char * endp = nullptr;
        const double v = std::strtod(fields[i].c_str(), &endp);
        if (fields[i].empty() || *endp != '\0') {
          throw IoError("line " + std::to_string(line_no) + ": bad number '" + fields[i] + "'");
        }
        return v;
      };
    TelemetryRecord r;
    r.time = num(0);
    r.robot_pos = num(1);
    r.robot_vel = num(2);
    r.planarizer_pos = num(3);
    r.planarizer_vel = num(4);
    r.deflection = num(5);
    r.spring_force = num(6);
    r.force_raw = num(7);
    r.force_filtered = num(8);
    r.motor_cmd = num(9);
    const auto mode = mode_from_string(fields[10]);
    if (!mode) {throw IoError("line " + std::to_string(line_no) + ": unknown mode '" + fields[10] + "'");}
    r.mode = *mode;
    r.ref_pos = num(11);
    r.ref_vel = num(12);
    r.event = fields[13];
    rows.push_back(std::move(r));
  }
  if (!header_seen) {throw IoError("telemetry has no header row");}
  return rows;
}

inline std::vector<TelemetryRecord> read_csv(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {throw IoError("cannot open '" + path + "'");}
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace catchsim

#endif  // CATCHSIM__TELEMETRY_HPP_
