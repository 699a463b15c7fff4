// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/bitstream.hpp"

#include <array>
#include <cstring>
#include <limits>

#include "issir/entropy.hpp"
#include "issir/error.hpp"

namespace issir {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'I', 'S', 'S', 'R'};

class Writer {
 public:
  template <typename T>
  void put(T v) {
    using U = std::make_unsigned_t<T>;
    U u = static_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bytes_.push_back(static_cast<std::uint8_t>(u & 0xFF));
      if constexpr (sizeof(T) > 1) u = static_cast<U>(u >> 8);
    }
  }
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      bytes_.push_back(static_cast<std::uint8_t>(v | 0x80));
      v >>= 7;
    }
    bytes_.push_back(static_cast<std::uint8_t>(v));
  }
  void append(std::span<const std::uint8_t> b) {
    bytes_.insert(bytes_.end(), b.begin(), b.end());
  }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> b, ErrorCode on_short)
      : bytes_(b), on_short_(on_short) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    using U = std::make_unsigned_t<T>;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      u = static_cast<U>(u | static_cast<U>(static_cast<U>(bytes_[pos_ + i]) << (8 * i)));
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      need(1);
      const std::uint8_t b = bytes_[pos_++];
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if (!(b & 0x80)) return v;
    }
    throw Error(ErrorCode::kCorruptPayload, "varint overflow");
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(on_short_, on_short_ == ErrorCode::kTruncated
                                 ? "truncated stream"
                                 : "malformed data");
    }
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  ErrorCode on_short_;
};

std::uint64_t zigzag(std::int64_t v) {
  return (static_cast<std::uint64_t>(v) << 1) ^
         static_cast<std::uint64_t>(v >> 63);
}
std::int64_t unzigzag(std::uint64_t v) {
  return static_cast<std::int64_t>(v >> 1) ^ -static_cast<std::int64_t>(v & 1);
}

// Per resolution the payload holds two planes, both band-major so that each
// band's history along time is contiguous. Levels: 0 for a silent band,
// 1 + zigzag(-index) otherwise, written as zigzag deltas to the previous row.
// Activity: alternating run lengths starting with an inactive run.
std::int64_t level_of(std::int32_t idx) {
  if (idx == kSilentIndex) return 0;
  return 1 + static_cast<std::int64_t>(zigzag(-static_cast<std::int64_t>(idx)));
}

void put_symbols(Writer& w, const QuantizedBands& q,
                 const std::vector<std::uint8_t>& activity) {
  const auto at = [&](int r, int b) {
    return static_cast<std::size_t>(r) * q.bands + b;
  };
  for (int b = 0; b < q.bands; ++b) {
    std::int64_t prev = 0;
    for (int r = 0; r < q.rows; ++r) {
      const std::int64_t level = level_of(q.indices[at(r, b)]);
      w.varint(zigzag(level - prev));
      prev = level;
    }
  }
  for (int b = 0; b < q.bands; ++b) {
    std::uint8_t current = 0;
    std::uint64_t run = 0;
    for (int r = 0; r < q.rows; ++r) {
      if (activity[at(r, b)] == current) {
        ++run;
        continue;
      }
      w.varint(run);
      current = activity[at(r, b)];
      run = 1;
    }
    w.varint(run);
  }
}

void get_symbols(Reader& rd, QuantizedBands& q,
                 std::vector<std::uint8_t>& activity) {
  const std::size_t n = static_cast<std::size_t>(q.rows) * q.bands;
  q.indices.assign(n, kSilentIndex);
  activity.assign(n, 0);
  const auto at = [&](int r, int b) {
    return static_cast<std::size_t>(r) * q.bands + b;
  };
  for (int b = 0; b < q.bands; ++b) {
    std::int64_t level = 0;
    for (int r = 0; r < q.rows; ++r) {
      level += unzigzag(rd.varint());
      if (level < 0) throw Error(ErrorCode::kCorruptPayload, "negative level");
      if (level == 0) continue;
      const std::int64_t idx = -unzigzag(static_cast<std::uint64_t>(level - 1));
      if (idx <= std::numeric_limits<std::int32_t>::min() ||
          idx > std::numeric_limits<std::int32_t>::max()) {
        throw Error(ErrorCode::kCorruptPayload, "index out of range");
      }
      q.indices[at(r, b)] = static_cast<std::int32_t>(idx);
    }
  }
  for (int b = 0; b < q.bands; ++b) {
    std::uint8_t current = 0;
    std::uint64_t filled = 0;
    const auto rows = static_cast<std::uint64_t>(q.rows);
    do {
      const std::uint64_t run = rd.varint();
      if (run > rows - filled) {
        throw Error(ErrorCode::kCorruptPayload, "activity run overflows band");
      }
      for (std::uint64_t k = 0; k < run; ++k) {
        activity[at(static_cast<int>(filled + k), b)] = current;
      }
      filled += run;
      current ^= 1;
    } while (filled < rows);
  }
}

}  // namespace

DualGridSpec SideInfoBundle::grid() const {
  const GridSpec large = GridSpec::make(large_window, overlap_divisor,
                                        static_cast<double>(sample_rate),
                                        static_cast<std::size_t>(signal_length));
  DualGridSpec g = DualGridSpec::uniform(large, small_window);
  g.transient_frames = transients;
  g.validate();
  return g;
}

CodecConfig SideInfoBundle::config() const {
  CodecConfig cfg;
  cfg.step_db = from_cdb(step_cdb);
  cfg.threshold_db = from_cdb(threshold_cdb);
  cfg.rho = rho_ppm / 1e6;
  cfg.bands_large = bands_large;
  cfg.bands_small = bands_small;
  cfg.large_window = large_window;
  cfg.small_window = small_window;
  cfg.overlap_divisor = overlap_divisor;
  cfg.dual = !transients.empty();
  cfg.backend = backend;
  return cfg;
}

void SideInfoBundle::validate() const {
  if (sources.empty()) throw Error(ErrorCode::kNoSources, "no sources");
  if (sources.size() > 0xFFFF) {
    throw Error(ErrorCode::kInvalidArgument, "too many sources");
  }
  if (sample_rate == 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  if (step_cdb < 1) {
    throw Error(ErrorCode::kInvalidArgument, "quantization step must be >= 1 cdB");
  }
  if (threshold_cdb > -2000) {
    throw Error(ErrorCode::kInvalidArgument, "threshold T must be <= -20 dB");
  }
  if (rho_ppm == 0 || rho_ppm >= 1000000) {
    throw Error(ErrorCode::kInvalidArgument, "rho must lie in (0, 1)");
  }
  if (backend != EntropyBackend::kStore && backend != EntropyBackend::kDeflate) {
    throw Error(ErrorCode::kUnsupportedFormat, "unknown entropy backend");
  }
  if (large_window > 0xFFFF || small_window > 0xFFFF) {
    throw Error(ErrorCode::kInvalidArgument, "window too long");
  }
  const DualGridSpec g = grid();
  if (bands_large < 1 || bands_large > g.large.num_bins() || bands_small < 1 ||
      bands_small > g.small.num_bins()) {
    throw Error(ErrorCode::kInvalidArgument, "band counts exceed bin counts");
  }
  const std::size_t min_gap = 2 * static_cast<std::size_t>(large_window);
  for (std::size_t i = 1; i < transients.size(); ++i) {
    if (g.large.frame_start(transients[i]) -
            g.large.frame_start(transients[i - 1]) < min_gap) {
      throw Error(ErrorCode::kSpacingViolation, "spacing violation");
    }
  }
  const int rows_large = g.large.num_frames();
  const int rows_small = g.num_small_frames();
  auto check = [](const QuantizedBands& q, int rows, int bands,
                  const std::vector<std::uint8_t>& bits) {
    const std::size_t n = static_cast<std::size_t>(rows) * bands;
    if (q.rows != rows || q.bands != bands || q.indices.size() != n ||
        bits.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "source block does not match the grid");
    }
    for (std::uint8_t b : bits) {
      if (b > 1) throw Error(ErrorCode::kInvalidArgument, "activity bit not 0/1");
    }
  };
  for (const auto& s : sources) {
    check(s.spectrogram.large, rows_large, bands_large, s.activity_large);
    check(s.spectrogram.small, rows_small, bands_small, s.activity_small);
  }
}

Bitstream serialize(const SideInfoBundle& bundle) {
  bundle.validate();

  Writer payload;
  for (const auto& s : bundle.sources) {
    put_symbols(payload, s.spectrogram.large, s.activity_large);
    put_symbols(payload, s.spectrogram.small, s.activity_small);
  }
  const auto coded = entropy_encode(payload.bytes(), bundle.backend);

  Writer header;
  header.put<std::uint8_t>(static_cast<std::uint8_t>(bundle.backend));
  header.put<std::uint8_t>(static_cast<std::uint8_t>(bundle.overlap_divisor));
  header.put<std::uint32_t>(bundle.sample_rate);
  header.put<std::uint64_t>(bundle.signal_length);
  header.put<std::uint16_t>(static_cast<std::uint16_t>(bundle.sources.size()));
  header.put<std::uint16_t>(static_cast<std::uint16_t>(bundle.large_window));
  header.put<std::uint16_t>(static_cast<std::uint16_t>(bundle.small_window));
  header.put<std::uint16_t>(static_cast<std::uint16_t>(bundle.bands_large));
  header.put<std::uint16_t>(static_cast<std::uint16_t>(bundle.bands_small));
  header.put<std::int32_t>(bundle.step_cdb);
  header.put<std::uint32_t>(bundle.rho_ppm);
  header.put<std::int32_t>(bundle.threshold_cdb);
  header.put<std::uint32_t>(static_cast<std::uint32_t>(bundle.transients.size()));
  for (int t : bundle.transients) header.put<std::int32_t>(t);
  for (const auto& s : bundle.sources) {
    header.put<std::int32_t>(s.spectrogram.large.norm_cdb);
    header.put<std::int32_t>(s.spectrogram.small.norm_cdb);
  }
  header.put<std::uint32_t>(static_cast<std::uint32_t>(payload.bytes().size()));
  header.put<std::uint32_t>(static_cast<std::uint32_t>(coded.size()));

  Writer out;
  out.append(kMagic);
  out.put<std::uint16_t>(kFormatVersion);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(header.bytes().size()));
  out.append(header.bytes());
  out.put<std::uint32_t>(crc32(header.bytes()));
  out.append(coded);
  out.put<std::uint32_t>(crc32(coded));
  return std::move(out.bytes());
}

SideInfoBundle deserialize(const Bitstream& stream) {
  Reader rd(stream, ErrorCode::kTruncated);
  const auto magic = rd.take(kMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) {
    throw Error(ErrorCode::kBadMagic, "bad magic");
  }
  const auto version = rd.get<std::uint16_t>();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "unsupported version " + std::to_string(version));
  }
  const auto header_len = rd.get<std::uint32_t>();
  const auto header_bytes = rd.take(header_len);
  if (rd.get<std::uint32_t>() != crc32(header_bytes)) {
    throw Error(ErrorCode::kChecksumMismatch, "header checksum mismatch");
  }

  Reader h(header_bytes, ErrorCode::kCorruptPayload);
  SideInfoBundle b;
  b.backend = static_cast<EntropyBackend>(h.get<std::uint8_t>());
  b.overlap_divisor = h.get<std::uint8_t>();
  b.sample_rate = h.get<std::uint32_t>();
  b.signal_length = h.get<std::uint64_t>();
  const int num_sources = h.get<std::uint16_t>();
  b.large_window = h.get<std::uint16_t>();
  b.small_window = h.get<std::uint16_t>();
  b.bands_large = h.get<std::uint16_t>();
  b.bands_small = h.get<std::uint16_t>();
  b.step_cdb = h.get<std::int32_t>();
  b.rho_ppm = h.get<std::uint32_t>();
  b.threshold_cdb = h.get<std::int32_t>();
  const auto num_transients = h.get<std::uint32_t>();
  if (num_transients > h.remaining() / 4) {
    throw Error(ErrorCode::kCorruptPayload, "transient count exceeds header");
  }
  b.transients.resize(num_transients);
  for (auto& t : b.transients) t = h.get<std::int32_t>();
  if (num_sources == 0) throw Error(ErrorCode::kNoSources, "no sources");
  b.sources.resize(static_cast<std::size_t>(num_sources));
  for (auto& s : b.sources) {
    s.spectrogram.large.norm_cdb = h.get<std::int32_t>();
    s.spectrogram.small.norm_cdb = h.get<std::int32_t>();
  }
  const auto raw_size = h.get<std::uint32_t>();
  const auto coded_size = h.get<std::uint32_t>();
  if (h.remaining() != 0) {
    throw Error(ErrorCode::kCorruptPayload, "trailing header bytes");
  }

  const auto coded = rd.take(coded_size);
  if (rd.get<std::uint32_t>() != crc32(coded)) {
    throw Error(ErrorCode::kChecksumMismatch, "payload checksum mismatch");
  }
  if (rd.remaining() != 0) {
    throw Error(ErrorCode::kCorruptPayload, "trailing bytes after payload");
  }

  DualGridSpec g;
  try {
    g = b.grid();
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptPayload,
                std::string("invalid stream geometry: ") + e.what());
  }
  const auto raw = entropy_decode(coded, raw_size, b.backend);
  Reader p(raw, ErrorCode::kCorruptPayload);
  for (auto& s : b.sources) {
    s.spectrogram.large.rows = g.large.num_frames();
    s.spectrogram.large.bands = b.bands_large;
    s.spectrogram.small.rows = g.num_small_frames();
    s.spectrogram.small.bands = b.bands_small;
    get_symbols(p, s.spectrogram.large, s.activity_large);
    get_symbols(p, s.spectrogram.small, s.activity_small);
  }
  if (p.remaining() != 0) {
    throw Error(ErrorCode::kCorruptPayload, "trailing payload bytes");
  }
  b.validate();
  return b;
}

double measure_rate(std::size_t stream_bytes, double duration_s, int sources) {
  if (!(duration_s > 0.0) || sources < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "rate needs a positive duration and at least one source");
  }
  return 8.0 * static_cast<double>(stream_bytes) / 1000.0 / duration_s /
         static_cast<double>(sources);
}

}  // namespace issir
