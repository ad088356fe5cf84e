#pragma once

#include <numbers>
#include <string>
#include <string_view>

namespace sfwm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Angular frequency (rad/s) of a DWDM channel label on the 100 GHz ITU grid.
/// "Cnn" sits at 190.0 + 0.1*nn THz; half channels such as "C34.5" are accepted.
double itu_channel(std::string_view label);

inline double hz_to_angular(double hz) { return kTwoPi * hz; }
inline double angular_to_hz(double omega) { return omega / kTwoPi; }

/// Wavelength in nm <-> angular frequency in rad/s.
double wavelength_nm_to_angular(double wavelength_nm);
double angular_to_wavelength_nm(double omega);

/// Parses "200 GHz", "1.5THz", "3e9 Hz" or "C34" into rad/s. A bare number is
/// taken to be rad/s already.
double parse_angular_frequency(std::string_view text);

/// Fixed nine-significant-digit rendering used for every emitted number.
std::string format_number(double value);

}  // namespace sfwm
