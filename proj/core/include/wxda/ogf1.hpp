#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wxda/grid.hpp"
#include "wxda/tensor.hpp"

namespace wxda {

// Self-describing binary gridded field format.
//
//   bytes 0..7    magic "OGF1GRID"
//   bytes 8..11   header length, little-endian uint32
//   header        UTF-8 "key=value" lines plus one "channel <i> <name>"
//                 line per channel
//   payload       n_time * C * n_lat * n_lon float32, little-endian,
//                 row-major within a channel, channel-major within a frame,
//                 frames in chronological order
//
// Header keys: block (state|values|mask|confidence), kind, valid_time,
// n_time, n_lat, n_lon, resolution, window_start, window_hours, channels.
struct Ogf1Header {
  std::string block = "state";
  std::string kind = "analysis";
  Timestamp valid_time = 0;
  int n_time = 1;
  int n_lat = 0;
  int n_lon = 0;
  double resolution = 0.0;
  Timestamp window_start = 0;
  int window_hours = 0;
  std::vector<std::string> channel_names;

  std::size_t payload_size() const {
    return static_cast<std::size_t>(n_time) * channel_names.size() * n_lat *
           n_lon;
  }
};

void write_ogf1(const std::filesystem::path& path, const Ogf1Header& header,
                std::span<const float> payload);

struct Ogf1File {
  Ogf1Header header;
  std::vector<float> payload;
};

Ogf1File read_ogf1(const std::filesystem::path& path);

void write_state(const std::filesystem::path& path, const StateField& field);
StateField read_state(const std::filesystem::path& path);

// A tensor is stored as three sibling files: <base>.ogf1 for values plus
// <base>.mask.ogf1 and <base>.conf.ogf1 companions.
void write_tensor(const std::filesystem::path& base_path,
                  const GriddedObsTensor& tensor);
GriddedObsTensor read_tensor(const std::filesystem::path& base_path);

}  // namespace wxda
