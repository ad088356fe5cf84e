#include "sfwm/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "sfwm/error.hpp"

namespace sfwm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  std::string buffer(s);
  char* end = nullptr;
  out = std::strtod(buffer.c_str(), &end);
  return end != buffer.c_str() && *end == '\0' && std::isfinite(out);
}

}  // namespace

double itu_channel(std::string_view label) {
  label = trim(label);
  require(label.size() >= 2 && (label[0] == 'C' || label[0] == 'c'), ErrorKind::InvalidParameter,
          "not an ITU channel label: '" + std::string(label) + "'");
  double number = 0.0;
  require(parse_double(label.substr(1), number) && number >= 0.0, ErrorKind::InvalidParameter,
          "not an ITU channel label: '" + std::string(label) + "'");
  const double twice = 2.0 * number;
  require(std::abs(twice - std::round(twice)) < 1e-9, ErrorKind::InvalidParameter,
          "ITU channel must be an integer or half channel: '" + std::string(label) + "'");
  return hz_to_angular((190.0 + 0.1 * number) * 1e12);
}

double wavelength_nm_to_angular(double wavelength_nm) {
  return kTwoPi * kSpeedOfLight / (wavelength_nm * 1e-9);
}

double angular_to_wavelength_nm(double omega) { return kTwoPi * kSpeedOfLight / omega * 1e9; }

double parse_angular_frequency(std::string_view text) {
  text = trim(text);
  require(!text.empty(), ErrorKind::Parse, "empty frequency");
  if (text[0] == 'C' || text[0] == 'c') return itu_channel(text);
  if (text.ends_with("rad/s")) {
    double value = 0.0;
    require(parse_double(trim(text.substr(0, text.size() - 5)), value), ErrorKind::Parse,
            "bad frequency '" + std::string(text) + "'");
    return value;
  }

  std::size_t unit_start = text.size();
  while (unit_start > 0 && std::isalpha(static_cast<unsigned char>(text[unit_start - 1]))) --unit_start;
  std::string_view number = trim(text.substr(0, unit_start));
  std::string_view unit = text.substr(unit_start);

  double value = 0.0;
  require(parse_double(number, value), ErrorKind::Parse, "bad frequency '" + std::string(text) + "'");
  if (unit.empty()) return value;
  double scale = 0.0;
  if (unit == "Hz") scale = 1.0;
  else if (unit == "kHz") scale = 1e3;
  else if (unit == "MHz") scale = 1e6;
  else if (unit == "GHz") scale = 1e9;
  else if (unit == "THz") scale = 1e12;
  else fail(ErrorKind::Parse, "unknown frequency unit '" + std::string(unit) + "'");
  return hz_to_angular(value * scale);
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

}  // namespace sfwm
