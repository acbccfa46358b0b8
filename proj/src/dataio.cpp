#include "csibreath/dataio.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace csibreath {

namespace {

constexpr char kMagic[4] = {'C', 'S', 'I', 'R'};
constexpr std::uint8_t kLittleEndian = 1;
constexpr std::uint8_t kComplexFloat32 = 1;

template <typename T>
void put_le(std::string& buf, T value) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(U); ++b) buf.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

template <typename T>
T get_le(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) bits |= U(p[b]) << (8 * b);
  return std::bit_cast<T>(bits);
}

// Shortest text that parses back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

const char* to_string(FormatErrc code) {
  switch (code) {
    case FormatErrc::io: return "io error";
    case FormatErrc::bad_magic: return "bad magic";
    case FormatErrc::unsupported_version: return "unsupported version";
    case FormatErrc::invalid_header: return "invalid header";
    case FormatErrc::truncated_payload: return "truncated payload";
    case FormatErrc::trailing_data: return "trailing data";
    case FormatErrc::non_finite: return "non-finite sample";
  }
  return "format error";
}

// ---------------------------------------------------------------------------
// Recordings

void write_recording(const CsiSampleSet& set, std::ostream& out) {
  const RadioMeta& meta = set.meta();
  std::string buf;
  buf.reserve(kRecordingHeaderSize + std::size_t(set.data().size()) * 8);
  buf.append(kMagic, 4);
  buf.push_back(static_cast<char>(kRecordingVersion));
  buf.push_back(static_cast<char>(kLittleEndian));
  buf.push_back(static_cast<char>(kComplexFloat32));
  buf.push_back('\0');
  for (Index dim : {meta.num_snapshots, meta.num_tx, meta.num_rx, meta.num_subcarriers}) {
    if (dim > Index(std::numeric_limits<std::uint32_t>::max())) {
      throw FormatError(FormatErrc::invalid_header, "dimension exceeds 32 bits");
    }
    put_le(buf, static_cast<std::uint32_t>(dim));
  }
  put_le(buf, meta.snapshot_rate_hz);
  put_le(buf, meta.subcarrier_spacing_hz);
  put_le(buf, meta.carrier_freq_hz);
  for (const Complex& z : set.data().flat()) {
    const auto re = static_cast<float>(z.real());
    const auto im = static_cast<float>(z.imag());
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw FormatError(FormatErrc::non_finite, "sample does not fit in float32");
    }
    put_le(buf, re);
    put_le(buf, im);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FormatError(FormatErrc::io, "write failed");
}

void write_recording(const CsiSampleSet& set, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(FormatErrc::io, "cannot open '" + path + "' for writing");
  write_recording(set, out);
}

CsiSampleSet read_recording(std::istream& in) {
  unsigned char header[kRecordingHeaderSize];
  in.read(reinterpret_cast<char*>(header), kRecordingHeaderSize);
  const auto header_bytes = static_cast<std::size_t>(in.gcount());
  if (header_bytes >= 4 && std::memcmp(header, kMagic, 4) != 0) {
    throw FormatError(FormatErrc::bad_magic, "file does not start with \"CSIR\"");
  }
  if (header_bytes < kRecordingHeaderSize) {
    throw FormatError(FormatErrc::invalid_header, "header is " + std::to_string(header_bytes) + " bytes, expected " +
                                                      std::to_string(kRecordingHeaderSize));
  }
  if (header[4] != kRecordingVersion) {
    throw FormatError(FormatErrc::unsupported_version, "version " + std::to_string(header[4]));
  }
  if (header[5] != kLittleEndian || header[6] != kComplexFloat32) {
    throw FormatError(FormatErrc::invalid_header, "unsupported byte order or sample layout");
  }

  RadioMeta meta;
  meta.num_snapshots = get_le<std::uint32_t>(header + 8);
  meta.num_tx = get_le<std::uint32_t>(header + 12);
  meta.num_rx = get_le<std::uint32_t>(header + 16);
  meta.num_subcarriers = get_le<std::uint32_t>(header + 20);
  meta.snapshot_rate_hz = get_le<double>(header + 24);
  meta.subcarrier_spacing_hz = get_le<double>(header + 32);
  meta.carrier_freq_hz = get_le<double>(header + 40);
  try {
    meta.validate();
  } catch (const ValidationError& e) {
    throw FormatError(FormatErrc::invalid_header, e.what());
  }

  const Index entries = meta.num_snapshots * meta.num_tx * meta.num_rx * meta.num_subcarriers;
  const auto expected = static_cast<std::size_t>(entries) * 8;
  std::string payload(expected, '\0');
  in.read(payload.data(), static_cast<std::streamsize>(expected));
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got != expected) {
    throw FormatError(FormatErrc::truncated_payload,
                      "expected " + std::to_string(expected) + " payload bytes, found " + std::to_string(got));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError(FormatErrc::trailing_data, "bytes after the declared payload");
  }

  Tensor4<Complex> data({meta.num_snapshots, meta.num_tx, meta.num_rx, meta.num_subcarriers});
  const auto* p = reinterpret_cast<const unsigned char*>(payload.data());
  for (Index k = 0; k < entries; ++k, p += 8) {
    const float re = get_le<float>(p);
    const float im = get_le<float>(p + 4);
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw FormatError(FormatErrc::non_finite, "entry " + std::to_string(k) + " is NaN or infinite");
    }
    data.flat()[k] = Complex(re, im);
  }
  return CsiSampleSet(meta, std::move(data));
}

CsiSampleSet read_recording(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(FormatErrc::io, "cannot open '" + path + "'");
  return read_recording(in);
}

// ---------------------------------------------------------------------------
// Reduction and windows

CsiSampleSet reduce_dataset(const CsiSampleSet& set, Index keep_tx, Index stride, BandHalf half) {
  const RadioMeta& meta = set.meta();
  if (keep_tx < 0 || keep_tx >= meta.num_tx) {
    throw ValidationError("keep_tx " + std::to_string(keep_tx) + " out of range [0, " + std::to_string(meta.num_tx) +
                          ")");
  }
  if (stride < 1) throw ValidationError("subcarrier stride must be >= 1");

  const Index M = meta.num_subcarriers;
  Index first = 0;
  Index span = M;
  if (half == BandHalf::upper) {
    span = (M + 1) / 2;
    first = M - span;
  } else if (half == BandHalf::lower) {
    span = M - (M + 1) / 2;
  }
  const Index kept = (span + stride - 1) / stride;

  RadioMeta out_meta = meta;
  out_meta.num_tx = 1;
  out_meta.num_subcarriers = kept;
  out_meta.subcarrier_spacing_hz = meta.subcarrier_spacing_hz * double(stride);

  Tensor4<Complex> data({meta.num_snapshots, 1, meta.num_rx, kept});
  for (Index t = 0; t < meta.num_snapshots; ++t)
    for (Index j = 0; j < meta.num_rx; ++j)
      for (Index k = 0; k < kept; ++k) data(t, 0, j, k) = set(t, keep_tx, j, first + k * stride);
  return CsiSampleSet(out_meta, std::move(data));
}

std::vector<WindowSpan> sliding_windows(const RadioMeta& meta, double window_s, double step_s) {
  const double fs = meta.snapshot_rate_hz;
  const auto length = static_cast<Index>(std::floor(window_s * fs + 1e-9));
  const auto step = static_cast<Index>(std::floor(step_s * fs + 1e-9));
  if (length < 2) throw ValidationError("window must span at least 2 snapshots");
  if (step < 1) throw ValidationError("window step must span at least 1 snapshot");
  std::vector<WindowSpan> out;
  for (Index first = 0; first + length <= meta.num_snapshots; first += step) out.push_back({first, length});
  return out;
}

// ---------------------------------------------------------------------------
// Ground truth

void GroundTruthTrack::validate() const {
  if (time_s.size() != rate_hz.size()) throw ValidationError("truth track columns differ in length");
  if (time_s.empty()) throw ValidationError("truth track is empty");
  for (std::size_t k = 0; k < time_s.size(); ++k) {
    if (!std::isfinite(time_s[k]) || !(rate_hz[k] > 0.0) || !std::isfinite(rate_hz[k])) {
      throw ValidationError("truth row " + std::to_string(k) + " has an invalid time or rate");
    }
    if (k > 0 && !(time_s[k] > time_s[k - 1])) {
      throw ValidationError("truth times must be strictly increasing (row " + std::to_string(k) + ")");
    }
  }
}

double GroundTruthTrack::rate_at(double t) const {
  const auto it = std::lower_bound(time_s.begin(), time_s.end(), t);
  if (it == time_s.begin()) return rate_hz.front();
  if (it == time_s.end()) return rate_hz.back();
  const auto hi = static_cast<std::size_t>(it - time_s.begin());
  const std::size_t lo = hi - 1;
  return (t - time_s[lo] <= time_s[hi] - t) ? rate_hz[lo] : rate_hz[hi];
}

GroundTruthTrack GroundTruthTrack::constant(double rate_hz, double duration_s, double step_s) {
  GroundTruthTrack track;
  const auto rows = static_cast<std::size_t>(std::floor(duration_s / step_s + 1e-9)) + 1;
  for (std::size_t k = 0; k < rows; ++k) {
    track.time_s.push_back(double(k) * step_s);
    track.rate_hz.push_back(rate_hz);
  }
  return track;
}

GroundTruthTrack read_truth(std::istream& in, const std::string& source) {
  GroundTruthTrack track;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!header_seen && line.find("time_s") != std::string::npos) {
      header_seen = true;
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double t = 0.0;
    double r = 0.0;
    std::string extra;
    if (!(fields >> t >> r) || (fields >> extra)) {
      throw ConfigError(source, line_no, "expected two numeric columns time_s,rate_hz");
    }
    track.time_s.push_back(t);
    track.rate_hz.push_back(r);
  }
  try {
    track.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(source, line_no, e.what());
  }
  return track;
}

GroundTruthTrack read_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open truth file '" + path + "'");
  return read_truth(in, path);
}

void write_truth(const GroundTruthTrack& track, std::ostream& out) {
  out << "time_s,rate_hz\n";
  for (std::size_t k = 0; k < track.size(); ++k) {
    out << format_double(track.time_s[k]) << ',' << format_double(track.rate_hz[k]) << '\n';
  }
}

void write_truth(const GroundTruthTrack& track, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_truth(track, out);
}

// ---------------------------------------------------------------------------
// Scenario and system files

namespace {

const ConfigDocument::Section& required_section(const ConfigDocument& doc, std::string_view name) {
  const auto* s = doc.section(name);
  if (!s) throw ConfigError(doc.source(), 0, "missing [" + std::string(name) + "] section");
  if (doc.all(name).size() > 1) {
    throw ConfigError(doc.source(), doc.all(name)[1]->line, "section [" + std::string(name) + "] repeated");
  }
  return *s;
}

Index read_index(const SectionReader& r, std::string_view key) {
  const long long v = r.integer(key);
  if (v < 0) r.fail(r.line_of(key), "'" + std::string(key) + "' must be non-negative");
  return static_cast<Index>(v);
}

// "*" or absent selects every antenna; otherwise a single index.
std::optional<Index> antenna_filter(const SectionReader& r, std::string_view key) {
  const auto text = r.text(key);
  if (!text || *text == "*") return std::nullopt;
  return read_index(r, key);
}

}  // namespace

Scenario scenario_from_config(const ConfigDocument& doc) {
  for (const auto& section : doc.sections()) {
    static const std::vector<std::string> known = {"", "radio", "motion", "distortion", "path", "room"};
    if (std::find(known.begin(), known.end(), section.name) == known.end()) {
      throw ConfigError(doc.source(), section.line, "unknown section [" + section.name + "]");
    }
    if (section.name.empty() && !section.entries.empty()) {
      throw ConfigError(doc.source(), section.entries.front().line, "key outside of any section");
    }
  }

  Scenario s;
  {
    SectionReader r(doc, required_section(doc, "radio"));
    r.only({"snapshots", "num_tx", "num_rx", "subcarriers", "snapshot_rate_hz", "subcarrier_spacing_hz",
            "carrier_freq_hz"});
    s.meta.num_snapshots = read_index(r, "snapshots");
    s.meta.num_tx = read_index(r, "num_tx");
    s.meta.num_rx = read_index(r, "num_rx");
    s.meta.num_subcarriers = read_index(r, "subcarriers");
    s.meta.snapshot_rate_hz = r.number("snapshot_rate_hz");
    s.meta.subcarrier_spacing_hz = r.number("subcarrier_spacing_hz");
    s.meta.carrier_freq_hz = r.number("carrier_freq_hz");
    try {
      s.meta.validate();
    } catch (const ValidationError& e) {
      r.fail(required_section(doc, "radio").line, e.what());
    }
  }

  std::optional<double> room_phase0;
  const auto rooms = doc.all("room");
  const auto paths = doc.all("path");
  if (!rooms.empty() && !paths.empty()) {
    throw ConfigError(doc.source(), rooms.front()->line, "[room] and [path] sections are mutually exclusive");
  }
  if (rooms.size() > 1) throw ConfigError(doc.source(), rooms[1]->line, "section [room] repeated");
  if (!rooms.empty()) {
    SectionReader r(doc, *rooms.front());
    r.only({"seed", "chest_gain"});
    RoomGeometry room = make_room_geometry(s.meta, r.number("chest_gain", 0.15),
                                           static_cast<std::uint64_t>(r.integer("seed")));
    s.paths = std::move(room.paths);
    room_phase0 = room.phase0_rad;
  } else {
    if (paths.empty()) throw ConfigError(doc.source(), 0, "scenario needs [path] sections or a [room] section");
    s.paths.assign(static_cast<std::size_t>(s.meta.num_tx * s.meta.num_rx), {});
    for (const auto* section : paths) {
      SectionReader r(doc, *section);
      r.only({"tx", "rx", "gain", "phase_rad", "delay_s", "delay_ns", "dynamic"});
      PathSpec p;
      p.attenuation = std::polar(r.number("gain"), r.number("phase_rad", 0.0));
      if (section->find("delay_s") && section->find("delay_ns")) r.fail(section->line, "give delay_s or delay_ns, not both");
      p.delay_s = section->find("delay_ns") ? r.number("delay_ns") / 1e9 : r.number("delay_s");
      p.dynamic = r.boolean("dynamic", false);
      const auto tx = antenna_filter(r, "tx");
      const auto rx = antenna_filter(r, "rx");
      if ((tx && *tx >= s.meta.num_tx) || (rx && *rx >= s.meta.num_rx)) {
        r.fail(section->line, "antenna index out of range");
      }
      for (Index i = 0; i < s.meta.num_tx; ++i)
        for (Index j = 0; j < s.meta.num_rx; ++j)
          if ((!tx || *tx == i) && (!rx || *rx == j)) s.paths[static_cast<std::size_t>(i * s.meta.num_rx + j)].push_back(p);
    }
  }

  {
    SectionReader r(doc, required_section(doc, "motion"));
    r.only({"rate_hz", "delay_amplitude_s", "phase0_rad"});
    s.motion.rate_hz = r.number("rate_hz");
    s.motion.delay_amplitude_s = r.number("delay_amplitude_s", kDefaultChestDelayAmplitude);
    s.motion.phase0_rad = r.number("phase0_rad", room_phase0.value_or(0.0));
  }

  if (const auto* section = doc.section("distortion")) {
    if (doc.all("distortion").size() > 1) required_section(doc, "distortion");
    SectionReader r(doc, *section);
    r.only({"agc_min", "agc_max", "phase_slope_min", "phase_slope_max", "phase_intercept_min", "phase_intercept_max",
            "snr_db", "seed"});
    auto& d = s.distortion;
    d.agc = {r.number("agc_min", 1.0), r.number("agc_max", 1.0)};
    d.phase_slope = {r.number("phase_slope_min", 0.0), r.number("phase_slope_max", 0.0)};
    d.phase_intercept = {r.number("phase_intercept_min", 0.0), r.number("phase_intercept_max", 0.0)};
    const auto snr = r.text("snr_db");
    if (snr && *snr != "none") d.snr_db = r.number("snr_db");
    d.seed = static_cast<std::uint64_t>(r.integer("seed", 0));
  }

  try {
    s.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(doc.source(), 0, e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) { return scenario_from_config(ConfigDocument::load(path)); }

std::string scenario_to_config(const Scenario& s) {
  std::ostringstream os;
  const auto num = [](double v) { return format_double(v); };
  os << "[radio]\n"
     << "snapshots = " << s.meta.num_snapshots << "\n"
     << "num_tx = " << s.meta.num_tx << "\n"
     << "num_rx = " << s.meta.num_rx << "\n"
     << "subcarriers = " << s.meta.num_subcarriers << "\n"
     << "snapshot_rate_hz = " << num(s.meta.snapshot_rate_hz) << "\n"
     << "subcarrier_spacing_hz = " << num(s.meta.subcarrier_spacing_hz) << "\n"
     << "carrier_freq_hz = " << num(s.meta.carrier_freq_hz) << "\n\n";
  os << "[motion]\n"
     << "rate_hz = " << num(s.motion.rate_hz) << "\n"
     << "delay_amplitude_s = " << num(s.motion.delay_amplitude_s) << "\n"
     << "phase0_rad = " << num(s.motion.phase0_rad) << "\n\n";
  const auto& d = s.distortion;
  os << "[distortion]\n"
     << "agc_min = " << num(d.agc.min) << "\nagc_max = " << num(d.agc.max) << "\n"
     << "phase_slope_min = " << num(d.phase_slope.min) << "\nphase_slope_max = " << num(d.phase_slope.max) << "\n"
     << "phase_intercept_min = " << num(d.phase_intercept.min)
     << "\nphase_intercept_max = " << num(d.phase_intercept.max) << "\n"
     << "snr_db = " << (d.snr_db ? num(*d.snr_db) : std::string("none")) << "\n"
     << "seed = " << d.seed << "\n";
  for (Index i = 0; i < s.meta.num_tx; ++i)
    for (Index j = 0; j < s.meta.num_rx; ++j)
      for (const PathSpec& p : s.paths_for(i, j)) {
        os << "\n[path]\n"
           << "tx = " << i << "\nrx = " << j << "\n"
           << "gain = " << num(std::abs(p.attenuation)) << "\n"
           << "phase_rad = " << num(std::arg(p.attenuation)) << "\n"
           << "delay_s = " << num(p.delay_s) << "\n"
           << "dynamic = " << (p.dynamic ? "true" : "false") << "\n";
      }
  return os.str();
}

SystemConfig system_from_config(const ConfigDocument& doc) {
  const auto& section = required_section(doc, "system");
  SectionReader r(doc, section);
  r.only({"name", "q_threshold", "boi_low_hz", "boi_high_hz", "hampel_window_s", "hampel_threshold", "tau_max_ns", "tau_max_s",
          "psd_resolution_hz", "amplitude_half_width", "fit_window", "peak_min_prominence_std"});
  const auto name = r.text("name");
  if (!name) r.fail(section.line, "missing key 'name'");
  SystemConfig cfg;
  try {
    cfg = SystemConfig::defaults(*name);
  } catch (const ValidationError& e) {
    r.fail(r.line_of("name"), e.what());
  }
  cfg.q_threshold = r.number("q_threshold", cfg.q_threshold);
  cfg.boi.low_hz = r.number("boi_low_hz", cfg.boi.low_hz);
  cfg.boi.high_hz = r.number("boi_high_hz", cfg.boi.high_hz);
  cfg.hampel_window_s = r.number("hampel_window_s", cfg.hampel_window_s);
  cfg.hampel_threshold = r.number("hampel_threshold", cfg.hampel_threshold);
  if (section.find("tau_max_s") && section.find("tau_max_ns")) {
    r.fail(section.line, "give tau_max_s or tau_max_ns, not both");
  }
  if (section.find("tau_max_ns")) cfg.tau_max_s = r.number("tau_max_ns") / 1e9;
  if (section.find("tau_max_s")) cfg.tau_max_s = r.number("tau_max_s");
  cfg.psd_resolution_hz = r.number("psd_resolution_hz", cfg.psd_resolution_hz);
  cfg.amplitude_half_width = static_cast<Index>(r.integer("amplitude_half_width", cfg.amplitude_half_width));
  cfg.fit_window = static_cast<Index>(r.integer("fit_window", cfg.fit_window));
  cfg.peak_min_prominence_std = r.number("peak_min_prominence_std", cfg.peak_min_prominence_std);
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    r.fail(section.line, e.what());
  }
  return cfg;
}

SystemConfig load_system(const std::string& path) { return system_from_config(ConfigDocument::load(path)); }

std::string system_to_config(const SystemConfig& cfg) {
  std::ostringstream os;
  os << "[system]\n"
     << "name = " << cfg.name << "\n"
     << "q_threshold = " << format_double(cfg.q_threshold) << "\n"
     << "boi_low_hz = " << format_double(cfg.boi.low_hz) << "\n"
     << "boi_high_hz = " << format_double(cfg.boi.high_hz) << "\n"
     << "hampel_window_s = " << format_double(cfg.hampel_window_s) << "\n"
     << "hampel_threshold = " << format_double(cfg.hampel_threshold) << "\n";
  if (cfg.tau_max_s) os << "tau_max_s = " << format_double(*cfg.tau_max_s) << "\n";
  os << "psd_resolution_hz = " << format_double(cfg.psd_resolution_hz) << "\n"
     << "amplitude_half_width = " << cfg.amplitude_half_width << "\n"
     << "fit_window = " << cfg.fit_window << "\n"
     << "peak_min_prominence_std = " << format_double(cfg.peak_min_prominence_std) << "\n";
  return os.str();
}

}  // namespace csibreath
