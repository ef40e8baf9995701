#include "wxda/ogf1.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "wxda/errors.hpp"

static_assert(sizeof(float) == 4, "32-bit IEEE float storage required");
static_assert(std::endian::native == std::endian::little,
              "OGF1 writer assumes a little-endian host");

namespace wxda {

namespace {

constexpr char kMagic[8] = {'O', 'G', 'F', '1', 'G', 'R', 'I', 'D'};

std::string build_header_text(const Ogf1Header& h) {
  std::ostringstream os;
  os << "block=" << h.block << "\n";
  os << "kind=" << h.kind << "\n";
  os << "valid_time=" << format_iso8601(h.valid_time) << "\n";
  os << "n_time=" << h.n_time << "\n";
  os << "n_lat=" << h.n_lat << "\n";
  os << "n_lon=" << h.n_lon << "\n";
  os << "resolution=" << h.resolution << "\n";
  os << "window_start=" << format_iso8601(h.window_start) << "\n";
  os << "window_hours=" << h.window_hours << "\n";
  os << "channels=" << h.channel_names.size() << "\n";
  for (std::size_t i = 0; i < h.channel_names.size(); ++i) {
    os << "channel " << i << " " << h.channel_names[i] << "\n";
  }
  return os.str();
}

int to_int(const std::string& v, const char* what) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw FormatError(std::string("bad OGF1 header value for ") + what);
  }
  return out;
}

Ogf1Header parse_header_text(const std::string& text) {
  Ogf1Header h;
  std::istringstream is(text);
  std::string line;
  std::size_t declared_channels = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("channel ", 0) == 0) {
      std::istringstream ls(line);
      std::string tag, name;
      std::size_t idx = 0;
      ls >> tag >> idx >> name;
      if (!ls || name.empty()) throw FormatError("bad OGF1 channel line");
      if (idx != h.channel_names.size()) {
        throw FormatError("OGF1 channel lines out of order");
      }
      h.channel_names.push_back(name);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("bad OGF1 header line");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "block") h.block = value;
    else if (key == "kind") h.kind = value;
    else if (key == "valid_time") h.valid_time = parse_iso8601(value);
    else if (key == "n_time") h.n_time = to_int(value, "n_time");
    else if (key == "n_lat") h.n_lat = to_int(value, "n_lat");
    else if (key == "n_lon") h.n_lon = to_int(value, "n_lon");
    else if (key == "resolution") h.resolution = std::stod(value);
    else if (key == "window_start") h.window_start = parse_iso8601(value);
    else if (key == "window_hours") h.window_hours = to_int(value, "window_hours");
    else if (key == "channels") declared_channels = to_int(value, "channels");
    // Unknown keys are ignored so the format can grow.
  }
  if (h.channel_names.size() != declared_channels) {
    throw FormatError("OGF1 channel count mismatch");
  }
  if (h.n_time < 1 || h.n_lat < 1 || h.n_lon < 1) {
    throw FormatError("OGF1 dims must be positive");
  }
  return h;
}

}  // namespace

void write_ogf1(const std::filesystem::path& path, const Ogf1Header& header,
                std::span<const float> payload) {
  if (payload.size() != header.payload_size()) {
    throw LayoutError("OGF1 payload size does not match header dims");
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  const std::string text = build_header_text(header);
  const std::uint32_t len = static_cast<std::uint32_t>(text.size());
  os.write(kMagic, 8);
  os.write(reinterpret_cast<const char*>(&len), 4);
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  os.write(reinterpret_cast<const char*>(payload.data()),
           static_cast<std::streamsize>(payload.size() * sizeof(float)));
  if (!os) throw DataError("write failed for " + path.string());
}

Ogf1File read_ogf1(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) {
    throw FormatError(path.string() + ": not an OGF1 file");
  }
  std::uint32_t len = 0;
  is.read(reinterpret_cast<char*>(&len), 4);
  if (!is) throw FormatError(path.string() + ": truncated header length");
  std::string text(len, '\0');
  is.read(text.data(), len);
  if (!is) throw FormatError(path.string() + ": truncated header");
  Ogf1File f;
  f.header = parse_header_text(text);
  f.payload.resize(f.header.payload_size());
  is.read(reinterpret_cast<char*>(f.payload.data()),
          static_cast<std::streamsize>(f.payload.size() * sizeof(float)));
  if (!is) throw FormatError(path.string() + ": truncated payload");
  return f;
}

void write_state(const std::filesystem::path& path, const StateField& field) {
  Ogf1Header h;
  h.block = "state";
  h.kind = std::string(field_kind_name(field.kind()));
  h.valid_time = field.valid_time();
  h.n_time = 1;
  h.n_lat = field.grid().n_lat;
  h.n_lon = field.grid().n_lon;
  h.resolution = field.grid().resolution;
  h.channel_names = field.registry().names();
  // In-memory state is double; the wire format is float32.
  std::vector<float> payload(field.data().size());
  for (std::size_t i = 0; i < payload.size(); ++i) {
    payload[i] = static_cast<float>(field.data()[i]);
  }
  write_ogf1(path, h, payload);
}

StateField read_state(const std::filesystem::path& path) {
  Ogf1File f = read_ogf1(path);
  if (f.header.block != "state") {
    throw FormatError(path.string() + ": expected a state block, found '" +
                      f.header.block + "'");
  }
  auto registry = ChannelRegistry::from_names(f.header.channel_names);
  if (!registry) {
    throw FormatError(path.string() + ": channel names are not registry keys");
  }
  auto kind = field_kind_from_name(f.header.kind);
  if (!kind) throw FormatError(path.string() + ": unknown field kind");
  GridSpec grid;
  grid.n_lat = f.header.n_lat;
  grid.n_lon = f.header.n_lon;
  grid.resolution = f.header.resolution;
  StateField field(grid, std::move(*registry), f.header.valid_time, *kind);
  std::copy(f.payload.begin(), f.payload.end(), field.data().begin());
  return field;
}

namespace {

Ogf1Header tensor_header(const GriddedObsTensor& t, const std::string& block) {
  Ogf1Header h;
  h.block = block;
  h.kind = "analysis";
  h.valid_time = t.window_start();
  h.n_time = t.n_time();
  h.n_lat = t.grid().n_lat;
  h.n_lon = t.grid().n_lon;
  h.resolution = t.grid().resolution;
  h.window_start = t.window_start();
  h.window_hours = t.window_hours();
  h.channel_names = t.channels();
  return h;
}

std::filesystem::path companion(const std::filesystem::path& base,
                                const char* tag) {
  std::filesystem::path p = base;
  p.replace_extension();
  p += std::string(".") + tag + ".ogf1";
  return p;
}

}  // namespace

void write_tensor(const std::filesystem::path& base_path,
                  const GriddedObsTensor& tensor) {
  std::filesystem::path values_path = base_path;
  if (values_path.extension() != ".ogf1") values_path += ".ogf1";
  write_ogf1(values_path, tensor_header(tensor, "values"), tensor.values);
  write_ogf1(companion(values_path, "mask"), tensor_header(tensor, "mask"),
             tensor.mask);
  write_ogf1(companion(values_path, "conf"),
             tensor_header(tensor, "confidence"), tensor.confidence);
}

GriddedObsTensor read_tensor(const std::filesystem::path& base_path) {
  std::filesystem::path values_path = base_path;
  if (values_path.extension() != ".ogf1") values_path += ".ogf1";
  Ogf1File values = read_ogf1(values_path);
  Ogf1File mask = read_ogf1(companion(values_path, "mask"));
  Ogf1File conf = read_ogf1(companion(values_path, "conf"));
  if (values.header.block != "values") {
    throw FormatError(values_path.string() + ": expected a values block");
  }
  GridSpec grid;
  grid.n_lat = values.header.n_lat;
  grid.n_lon = values.header.n_lon;
  grid.resolution = values.header.resolution;
  GriddedObsTensor t(grid, values.header.n_time, values.header.channel_names,
                     values.header.window_start, values.header.window_hours);
  if (mask.payload.size() != values.payload.size() ||
      conf.payload.size() != values.payload.size()) {
    throw LayoutError("tensor companion blocks disagree on shape");
  }
  t.values = std::move(values.payload);
  t.mask = std::move(mask.payload);
  t.confidence = std::move(conf.payload);
  return t;
}

}  // namespace wxda
