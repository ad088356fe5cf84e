#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sfwm/spectral.hpp"

namespace sfwm {

struct Channel {
  std::string label;
  double center = 0.0;                // rad/s
  std::vector<double> transmittance;  // sampled on the owning bank's grid
};

/// DWDM channels sharing one sampling grid.
class ChannelBank {
 public:
  explicit ChannelBank(spectral::FrequencyGrid grid) : grid_(grid) {}

  /// Brick-wall passbands of full width `width` at each center, labeled in order.
  static ChannelBank brick_wall(const spectral::FrequencyGrid& grid,
                                const std::vector<std::string>& labels,
                                const std::vector<double>& centers, double width);
  /// A single unit-transmittance channel covering the whole grid.
  static ChannelBank all_pass(const spectral::FrequencyGrid& grid, std::string label = "all");

  void add(Channel channel);

  const spectral::FrequencyGrid& grid() const noexcept { return grid_; }
  const std::vector<Channel>& channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return channels_.size(); }
  const Channel& find(std::string_view label) const;

  /// Transmittance of the whole arm: channel sum clipped to 1.
  std::vector<double> arm_transmittance() const;

  /// Same bank multiplied by a constant factor (must keep values in [0, 1]).
  ChannelBank scaled(double factor) const;

 private:
  spectral::FrequencyGrid grid_;
  std::vector<Channel> channels_;
};

}  // namespace sfwm
