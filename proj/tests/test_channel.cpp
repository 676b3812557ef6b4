#include <cmath>

#include "doctest.h"
#include "secbeam/channel.hpp"
#include "secbeam/channel_io.hpp"
#include "secbeam/errors.hpp"

using namespace secbeam;

TEST_CASE("db conversion round-trips") {
  CHECK(db_to_linear(9.0) == doctest::Approx(7.9433).epsilon(1e-4));
  for (double db : {-10.0, 0.0, 3.0, 9.0, 12.5}) {
    CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
  }
}

TEST_CASE("built-in reference instance") {
  const auto one = paper_instance(1);
  CHECK(one.n() == 2);
  CHECK(one.k() == 1);
  CHECK(one.j() == 1);
  CHECK(one.noise_power() == 1.0);
  CHECK(one.power_budget() == doctest::Approx(std::pow(10.0, 0.9)).epsilon(1e-12));
  CHECK(one.user(0).squaredNorm() == doctest::Approx(7.309).epsilon(1e-3));

  const auto three = paper_instance(3);
  CHECK(three.j() == 3);
  CHECK(three.eve(2)(0) == Complex(-0.2784, -1.3995));
  CHECK(three.eve(2)(1) == Complex(-1.4867, 0.9877));

  CHECK_THROWS_AS(paper_instance(4), std::invalid_argument);
  CHECK_THROWS_AS(paper_instance(0), std::invalid_argument);
}

TEST_CASE("instance validation") {
  ChannelVector h(2);
  h << Complex(1.0, 0.0), Complex(0.0, 0.0);
  CHECK_THROWS_AS(SystemInstance(2, {}, {h}, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SystemInstance(2, {h}, {}, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SystemInstance(2, {h}, {h}, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SystemInstance(2, {h}, {h}, 1.0, -1.0), std::invalid_argument);
  ChannelVector h3(3);
  h3.setZero();
  CHECK_THROWS_AS(SystemInstance(2, {h3}, {h}, 1.0, 1.0), std::invalid_argument);

  const SystemInstance ok(2, {h}, {h}, 1.0, 1.0);
  CHECK_THROWS_AS(ok.user(1), std::invalid_argument);
  CHECK_THROWS_AS(ok.eve(-1), std::invalid_argument);
}

TEST_CASE("config parsing") {
  const std::string doc = R"({
    "n_antennas": 2,
    "noise_power": 1.0,
    "power_budget_db": 9.0,
    "users": [[[2.0824, -1.7215], [0.0788, -0.0583]]],
    "eves": [[[-0.3989, -0.0923], [-0.677, 0.3371]]]
  })";
  const auto inst = parse_instance(doc);
  CHECK(inst.power_budget() == doctest::Approx(7.9433).epsilon(1e-4));
  CHECK(inst.n() == 2);
  CHECK(inst.user(0)(0) == Complex(2.0824, -1.7215));

  // round trip reproduces the instance exactly
  const auto again = parse_instance(serialize_instance(inst));
  CHECK(again.power_budget() == inst.power_budget());
  CHECK(again.noise_power() == inst.noise_power());
  CHECK(again.user(0) == inst.user(0));
  CHECK(again.eve(0) == inst.eve(0));
}

TEST_CASE("config parse errors name the offending key") {
  const std::string wrong_len = R"({
    "n_antennas": 2, "noise_power": 1.0, "power_budget_db": 9.0,
    "users": [[[1, 0], [0, 1], [1, 1]]],
    "eves": [[[1, 0], [0, 1]]]
  })";
  CHECK_THROWS_WITH_AS(parse_instance(wrong_len),
                       doctest::Contains("users[0]"), ParseError);

  CHECK_THROWS_WITH_AS(parse_instance(R"({"noise_power": 1.0, "power_budget_db": 9.0,
                       "users": [[[1,0],[0,1]]], "eves": [[[1,0],[0,1]]]})"),
                       doctest::Contains("n_antennas"), ParseError);

  const std::string both_power = R"({
    "n_antennas": 2, "noise_power": 1.0,
    "power_budget_db": 9.0, "power_budget_linear": 5.0,
    "users": [[[1, 0], [0, 1]]], "eves": [[[1, 0], [0, 1]]]
  })";
  CHECK_THROWS_AS(parse_instance(both_power), ParseError);

  const std::string bad_noise = R"({
    "n_antennas": 2, "noise_power": -1.0, "power_budget_db": 9.0,
    "users": [[[1, 0], [0, 1]]], "eves": [[[1, 0], [0, 1]]]
  })";
  CHECK_THROWS_WITH_AS(parse_instance(bad_noise), doctest::Contains("noise_power"), ParseError);

  CHECK_THROWS_AS(parse_instance("not json"), ParseError);
  CHECK_THROWS_AS(load_instance_file("/nonexistent/path.json"), ParseError);
}

TEST_CASE("random instances are deterministic with the right statistics") {
  const auto a = random_instance(7, 2, 1, 1);
  const auto b = random_instance(7, 2, 1, 1);
  CHECK(a.user(0) == b.user(0));
  CHECK(a.eve(0) == b.eve(0));
  CHECK(a.noise_power() == 1.0);
  CHECK(a.power_budget() == 10.0);
  CHECK(a.user(0).allFinite());

  const auto c = random_instance(8, 2, 1, 1);
  CHECK(a.user(0) != c.user(0));

  CHECK_THROWS_AS(random_instance(1, 0, 1, 1), std::invalid_argument);

  // 10^4 entries: mean squared magnitude within 0.05 of 1
  const auto big = random_instance(123, 2, 2500, 2500);
  double sum = 0.0;
  long count = 0;
  for (const auto& v : big.users()) {
    sum += v.squaredNorm();
    count += v.size();
  }
  for (const auto& v : big.eves()) {
    sum += v.squaredNorm();
    count += v.size();
  }
  CHECK(count == 10000);
  CHECK(sum / static_cast<double>(count) == doctest::Approx(1.0).epsilon(0.05));
}
