#include <doctest.h>

#include <sstream>

#include "orthoreg/schedule.hpp"

using namespace orthoreg;

TEST_CASE("lambda plan") {
  const ScheduleConfig cfg;
  CHECK(lambda_at(cfg, 0) == 0.1);
  CHECK(lambda_at(cfg, 19) == 0.1);
  CHECK(lambda_at(cfg, 20) == 1e-3);
  CHECK(lambda_at(cfg, 49) == 1e-3);
  CHECK(lambda_at(cfg, 50) == 1e-4);
  CHECK(lambda_at(cfg, 69) == 1e-4);
  CHECK(lambda_at(cfg, 70) == 1e-6);
  CHECK(lambda_at(cfg, 119) == 1e-6);
  CHECK(lambda_at(cfg, 120) == 0.0);
  CHECK(lambda_at(cfg, 125) == 0.0);
}

TEST_CASE("weight decay plan per kind") {
  const ScheduleConfig cfg;
  CHECK(weight_decay_at(cfg, RegKind::SRIP, 100) == 1e-8);
  CHECK(weight_decay_at(cfg, RegKind::SO, 19) == 1e-8);
  CHECK(weight_decay_at(cfg, RegKind::SO, 25) == 1e-4);
  CHECK(weight_decay_at(cfg, RegKind::DSO, 0) == 1e-8);
  CHECK(weight_decay_at(cfg, RegKind::DSO, 20) == 5e-4);
  for (RegKind k : {RegKind::None, RegKind::MC, RegKind::SR, RegKind::SelectiveSO})
    CHECK(weight_decay_at(cfg, k, 150) == 1e-8);
}

TEST_CASE("lambda is non-increasing over the default plan") {
  const ScheduleConfig cfg;
  for (int e = 1; e < 300; ++e) CHECK(lambda_at(cfg, e) <= lambda_at(cfg, e - 1));
}

TEST_CASE("schedule_csv rows") {
  const std::string csv = schedule_csv(ScheduleConfig{}, RegKind::SO, 200);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "epoch,lambda,weight_decay");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 200);
  CHECK(rows[0] == "0,0.1,1e-08");
  CHECK(rows[20] == "20,0.001,1e-04");
  CHECK(rows[70] == "70,1e-06,1e-04");
  CHECK(rows[199] == "199,0,1e-04");
}

TEST_CASE("breakpoint parsing") {
  CHECK(parse_breakpoints("20:1e-3, 50:1e-4") == std::vector<Breakpoint>{{20, 1e-3}, {50, 1e-4}});
  CHECK(parse_breakpoints("none").empty());
  CHECK(parse_breakpoints("").empty());
  CHECK_THROWS_AS(parse_breakpoints("20-1e-3"), std::invalid_argument);
  const ScheduleConfig cfg;
  CHECK(parse_breakpoints(format_breakpoints(cfg.lambda_breakpoints)) == cfg.lambda_breakpoints);
}

TEST_CASE("validation") {
  ScheduleConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.lambda_breakpoints = {{50, 1e-3}, {20, 1e-4}};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.lambda_breakpoints = {{20, 0.5}};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.lambda_breakpoints = {{-1, 0.01}};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
