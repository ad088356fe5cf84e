#include <doctest.h>

#include "sfwm/channels.hpp"
#include "sfwm/error.hpp"

using namespace sfwm;
using spectral::FrequencyGrid;

TEST_SUITE("channels") {
  TEST_CASE("brick-wall bank") {
    const FrequencyGrid g(0.0, 1.0, 20);
    const auto bank = ChannelBank::brick_wall(g, {"A", "B"}, {5.0, 12.0}, 4.0);
    CHECK(bank.size() == 2);
    CHECK(bank.find("B").center == 12.0);
    double sum = 0.0;
    for (double t : bank.find("A").transmittance) sum += t;
    CHECK(sum == doctest::Approx(4.0));
    CHECK_THROWS_AS(bank.find("C"), Error);
  }

  TEST_CASE("arm transmittance is the clipped channel sum") {
    const FrequencyGrid g(0.0, 1.0, 10);
    ChannelBank bank(g);
    bank.add({"x", 2.0, std::vector<double>(10, 0.7)});
    bank.add({"y", 7.0, std::vector<double>(10, 0.6)});
    for (double t : bank.arm_transmittance()) CHECK(t == 1.0);
    const auto half = bank.scaled(0.5);
    for (double t : half.arm_transmittance()) CHECK(t == doctest::Approx(0.65));
  }

  TEST_CASE("invariants are enforced") {
    const FrequencyGrid g(0.0, 1.0, 4);
    ChannelBank bank(g);
    CHECK_THROWS_AS(bank.add({"x", 0.0, {0.1, 0.2}}), Error);
    CHECK_THROWS_AS(bank.add({"x", 0.0, {0.1, 0.2, 1.2, 0.0}}), Error);
    CHECK_THROWS_AS(bank.add({"x", 0.0, {0.1, -0.2, 0.2, 0.0}}), Error);
    bank.add({"x", 0.0, {0.1, 0.2, 0.3, 0.0}});
    CHECK_THROWS_AS(bank.add({"x", 1.0, {0.1, 0.2, 0.3, 0.0}}), Error);
    CHECK_THROWS_AS(bank.scaled(4.0), Error);
    CHECK_THROWS_AS(ChannelBank::brick_wall(g, {"a"}, {1.0, 2.0}, 1.0), Error);
  }

  TEST_CASE("all-pass bank") {
    const FrequencyGrid g(0.0, 1.0, 6);
    const auto bank = ChannelBank::all_pass(g, "open");
    CHECK(bank.size() == 1);
    for (double t : bank.find("open").transmittance) CHECK(t == 1.0);
  }
}
