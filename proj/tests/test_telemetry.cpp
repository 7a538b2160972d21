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

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "catchsim/telemetry.hpp"

namespace
{

namespace fs = std::filesystem;
using catchsim::Mode;
using catchsim::TelemetryRecord;

fs::path scratch(const std::string & name)
{
  const auto dir = fs::temp_directory_path() / ("catchsim_telemetry_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::create_directories(dir);
  return dir / name;
}

std::vector<TelemetryRecord> random_rows(std::size_t n)
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Mode modes[] = {Mode::Shadowing, Mode::ForceControl, Mode::Recovery, Mode::Hold};
  std::vector<TelemetryRecord> rows;
  for (std::size_t i = 0; i < n; ++i) {
    TelemetryRecord r;
    r.time = static_cast<double>(i) * 1e-3;
    r.robot_pos = u(rng);
    r.robot_vel = u(rng);
    r.planarizer_pos = u(rng);
    r.planarizer_vel = u(rng);
    r.deflection = u(rng);
    r.spring_force = u(rng);
    r.force_raw = u(rng);
    r.force_filtered = u(rng);
    r.motor_cmd = u(rng);
    r.mode = modes[i % 4];
    if (i % 3 != 0) {
      r.ref_pos = u(rng);
      r.ref_vel = u(rng);
    }
    if (i % 17 == 0) {r.event = "failure=ground_proximity;mode=recovery";}
    rows.push_back(r);
  }
  return rows;
}

void expect_close(double a, double b)
{
  if (std::isnan(a)) {
    EXPECT_TRUE(std::isnan(b));
  } else {
    EXPECT_NEAR(a, b, 1e-9);
  }
}

TEST(TelemetryCsv, RoundTripHundredRows)
{
  const auto rows = random_rows(100);
  const auto path = scratch("round_trip.csv").string();
  const std::vector<std::string> meta{"scenario = unit", "seed = 8"};
  catchsim::write_csv(rows, path, meta);
  const auto back = catchsim::read_csv(path);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    expect_close(back[i].time, rows[i].time);
    expect_close(back[i].robot_pos, rows[i].robot_pos);
    expect_close(back[i].robot_vel, rows[i].robot_vel);
    expect_close(back[i].planarizer_pos, rows[i].planarizer_pos);
    expect_close(back[i].planarizer_vel, rows[i].planarizer_vel);
    expect_close(back[i].deflection, rows[i].deflection);
    expect_close(back[i].spring_force, rows[i].spring_force);
    expect_close(back[i].force_raw, rows[i].force_raw);
    expect_close(back[i].force_filtered, rows[i].force_filtered);
    expect_close(back[i].motor_cmd, rows[i].motor_cmd);
    EXPECT_EQ(back[i].mode, rows[i].mode);
    expect_close(back[i].ref_pos, rows[i].ref_pos);
    expect_close(back[i].ref_vel, rows[i].ref_vel);
    EXPECT_EQ(back[i].event, rows[i].event);
  }
  fs::remove(path);
}

TEST(TelemetryCsv, EmptyTelemetryIsHeaderOnly)
{
  std::ostringstream out;
  catchsim::write_csv(out, std::vector<TelemetryRecord>{});
  std::istringstream in(out.str());
  std::string line;
  std::vector<std::string> data_lines;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() != '#') {data_lines.push_back(line);}
  }
  ASSERT_EQ(data_lines.size(), 1U);
  EXPECT_EQ(data_lines[0], catchsim::kTelemetryHeader);
  EXPECT_TRUE(catchsim::parse_csv(out.str()).empty());
}

TEST(TelemetryCsv, HeaderNamesEveryColumnAndUnitsAreDocumented)
{
  std::ostringstream out;
  catchsim::write_csv(out, random_rows(1));
  const auto text = out.str();
  EXPECT_NE(text.find(catchsim::kTelemetryUnits), std::string::npos);
  EXPECT_LT(text.find(catchsim::kTelemetryUnits), text.find(catchsim::kTelemetryHeader));
  EXPECT_EQ(std::count(catchsim::kTelemetryHeader.begin(), catchsim::kTelemetryHeader.end(), ','), 13);
}

TEST(TelemetryCsv, EventsSurviveVerbatim)
{
  std::vector<TelemetryRecord> rows(3);
  rows[0].event = "";
  rows[1].event = "violation=accel_bound;violation=lift_off";
  rows[2].event = "travel_limit";
  std::ostringstream out;
  catchsim::write_csv(out, rows);
  const auto back = catchsim::parse_csv(out.str());
  ASSERT_EQ(back.size(), 3U);
  for (std::size_t i = 0; i < 3; ++i) {EXPECT_EQ(back[i].event, rows[i].event);}
}

TEST(TelemetryCsv, NumbersUseNineSignificantDigits)
{
  std::vector<TelemetryRecord> rows(1);
  rows[0].robot_pos = 0.123456789123;
  std::ostringstream out;
  catchsim::write_csv(out, rows);
  EXPECT_NE(out.str().find(",0.123456789,"), std::string::npos);
}

TEST(TelemetryCsv, BadInputIsIoError)
{
  EXPECT_THROW(catchsim::parse_csv("no header here\n"), catchsim::IoError);
  EXPECT_THROW(catchsim::parse_csv(std::string(catchsim::kTelemetryHeader) + "\n1,2,3\n"), catchsim::IoError);
  EXPECT_THROW(catchsim::parse_csv(""), catchsim::IoError);
  EXPECT_THROW(catchsim::read_csv("/nonexistent/telemetry.csv"), catchsim::IoError);
  const std::vector<TelemetryRecord> none;
  EXPECT_THROW(catchsim::write_csv(none, "/nonexistent/dir/telemetry.csv"), catchsim::IoError);
}

}  // namespace
