#include "hcc/codec.hpp"

#include <bit>
#include <cstring>

namespace hcc {

static_assert(std::endian::native == std::endian::little,
              "container layout and raw payloads are little-endian");

CodecSpec CodecSpec::fixed_rate(int bits) {
  if (bits < 2 || bits > 32) {
    throw InvalidSchemeError("fixed-rate bits must be in [2, 32], got " +
                             std::to_string(bits));
  }
  return {CodecKind::FixedRate, bits};
}

std::string to_string(const CodecSpec& spec) {
  switch (spec.kind) {
    case CodecKind::Identity:
      return "identity";
    case CodecKind::LosslessPredictor:
      return "lossless";
    case CodecKind::FixedRate:
      return "fixed-rate:" + std::to_string(spec.rate_bits);
  }
  return "unknown";
}

CodecSpec codec_spec_from_string(const std::string& s) {
  if (s == "identity") return CodecSpec::identity();
  if (s == "lossless") return CodecSpec::lossless();
  if (s.rfind("fixed-rate:", 0) == 0) {
    try {
      return CodecSpec::fixed_rate(std::stoi(s.substr(11)));
    } catch (const InvalidSchemeError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("codec", "bad fixed-rate value in '" + s + "'");
    }
  }
  throw ConfigError("codec", "unknown codec '" + s +
                                 "' (expected identity | lossless | fixed-rate:N)");
}

std::uint64_t wire_size_bytes(const CodecSpec& spec, std::uint64_t n) {
  switch (spec.kind) {
    case CodecKind::Identity:
      return 4 * n;
    case CodecKind::FixedRate: {
      const std::uint64_t nblocks = (n + kFixedRateBlock - 1) / kFixedRateBlock;
      return nblocks * (1 + static_cast<std::uint64_t>(spec.rate_bits) * 8);
    }
    case CodecKind::LosslessPredictor:
      throw DataDependentSizeError(
          "lossless predictor size is data-dependent; read it from the "
          "CompressedBuffer");
  }
  throw DataDependentSizeError("unknown codec kind");
}

namespace {

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

constexpr std::uint8_t kMagic[4] = {'H', 'C', 'C', '1'};

}  // namespace

std::vector<std::uint8_t> to_bytes(const CompressedBuffer& cbuf) {
  std::vector<std::uint8_t> out;
  out.reserve(kContainerHeaderBytes + cbuf.payload.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(static_cast<std::uint8_t>(cbuf.codec.kind));
  out.push_back(static_cast<std::uint8_t>(cbuf.codec.rate_bits));
  put_u64(out, cbuf.original_len);
  put_u32(out, cbuf.chunk_count);
  out.insert(out.end(), cbuf.payload.begin(), cbuf.payload.end());
  return out;
}

CompressedBuffer from_bytes(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kContainerHeaderBytes) {
    throw CorruptPayloadError("container shorter than header");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw CorruptPayloadError("bad container magic");
  }
  CompressedBuffer cbuf;
  const std::uint8_t kind = bytes[4];
  if (kind > 2) throw CorruptPayloadError("bad codec kind byte");
  cbuf.codec.kind = static_cast<CodecKind>(kind);
  cbuf.codec.rate_bits = bytes[5];
  if (cbuf.codec.kind == CodecKind::FixedRate &&
      (cbuf.codec.rate_bits < 2 || cbuf.codec.rate_bits > 32)) {
    throw CorruptPayloadError("bad fixed-rate bits in header");
  }
  cbuf.original_len = get_u64(bytes.data() + 6);
  cbuf.chunk_count = get_u32(bytes.data() + 14);
  cbuf.payload.assign(bytes.begin() + kContainerHeaderBytes, bytes.end());
  return cbuf;
}

}  // namespace hcc
