#include "sfwm/channels.hpp"

#include <algorithm>
#include <cmath>

#include "sfwm/error.hpp"

namespace sfwm {

ChannelBank ChannelBank::brick_wall(const spectral::FrequencyGrid& grid,
                                    const std::vector<std::string>& labels,
                                    const std::vector<double>& centers, double width) {
  require(labels.size() == centers.size(), ErrorKind::InvalidParameter,
          "channel labels and centers differ in length");
  require(width > 0.0, ErrorKind::InvalidParameter, "channel width must be positive");
  ChannelBank bank(grid);
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const spectral::Band band{centers[c] - 0.5 * width, centers[c] + 0.5 * width};
    bank.add({labels[c], centers[c], spectral::brick_wall(grid, band)});
  }
  return bank;
}

ChannelBank ChannelBank::all_pass(const spectral::FrequencyGrid& grid, std::string label) {
  ChannelBank bank(grid);
  const double center = 0.5 * (grid.start() + grid.last());
  bank.add({std::move(label), center, std::vector<double>(grid.size(), 1.0)});
  return bank;
}

void ChannelBank::add(Channel channel) {
  require(channel.transmittance.size() == grid_.size(), ErrorKind::InvalidParameter,
          "channel '" + channel.label + "' does not match the bank grid");
  for (double t : channel.transmittance) {
    require(t >= 0.0 && t <= 1.0 && std::isfinite(t), ErrorKind::InvalidParameter,
            "channel '" + channel.label + "' transmittance outside [0, 1]");
  }
  for (const auto& existing : channels_) {
    require(existing.label != channel.label, ErrorKind::InvalidParameter,
            "duplicate channel label '" + channel.label + "'");
  }
  channels_.push_back(std::move(channel));
}

const Channel& ChannelBank::find(std::string_view label) const {
  for (const auto& c : channels_)
    if (c.label == label) return c;
  fail(ErrorKind::InvalidParameter, "no channel labeled '" + std::string(label) + "'");
}

std::vector<double> ChannelBank::arm_transmittance() const {
  std::vector<double> t(grid_.size(), 0.0);
  for (const auto& c : channels_)
    for (std::size_t k = 0; k < t.size(); ++k) t[k] += c.transmittance[k];
  for (double& v : t) v = std::min(v, 1.0);
  return t;
}

ChannelBank ChannelBank::scaled(double factor) const {
  ChannelBank out(grid_);
  for (Channel c : channels_) {
    for (double& t : c.transmittance) t *= factor;
    out.add(std::move(c));
  }
  return out;
}

}  // namespace sfwm
