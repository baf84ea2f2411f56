#ifndef HCC_CODEC_HPP
#define HCC_CODEC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hcc/errors.hpp"

namespace hcc {

// The unit of all communication: a flat array of 32-bit IEEE-754 values.
// Any bit pattern (NaN, +-Inf, denormals) is admissible on lossless paths.
using FloatBuffer = std::vector<float>;

enum class CodecKind : std::uint8_t {
  Identity = 0,           // raw bytes, no transform
  LosslessPredictor = 1,  // XOR last-value predictor + leading-zero coder
  FixedRate = 2,          // block exponent-aligned quantizer, rate_bits/value
};

struct CodecSpec {
  CodecKind kind = CodecKind::Identity;
  int rate_bits = 0;  // meaningful iff kind == FixedRate; valid range [2, 32]

  static CodecSpec identity() { return {CodecKind::Identity, 0}; }
  static CodecSpec lossless() { return {CodecKind::LosslessPredictor, 0}; }
  static CodecSpec fixed_rate(int bits);

  bool is_lossy() const { return kind == CodecKind::FixedRate; }
  bool operator==(const CodecSpec&) const = default;
};

// Short display form: "identity", "lossless", "fixed-rate:8".
std::string to_string(const CodecSpec& spec);
CodecSpec codec_spec_from_string(const std::string& s);  // throws ConfigError

// FixedRate operates on independent 64-value blocks (last block zero-padded);
// LosslessPredictor on independent 4096-value chunks (prediction resets per
// chunk, so chunks compress independently).
inline constexpr std::size_t kFixedRateBlock = 64;
inline constexpr std::size_t kPredictorChunk = 4096;

struct CompressedBuffer {
  CodecSpec codec;
  std::uint64_t original_len = 0;
  std::uint32_t chunk_count = 0;  // FixedRate blocks / LosslessPredictor chunks
  std::vector<std::uint8_t> payload;

  std::uint64_t payload_bytes() const { return payload.size(); }
};

// Compress `buf` per `spec`. FixedRate throws NonFiniteInputError if any value
// is NaN or infinite. Output is bit-deterministic for a given input.
CompressedBuffer compress(const CodecSpec& spec, const FloatBuffer& buf);

// Inverse of compress. Identity/LosslessPredictor reproduce the input
// bit-exactly; FixedRate values v' satisfy |v' - v| <= 2^(E_block - rate + 2)
// where E_block is the block's stored max exponent. Throws CorruptPayloadError
// on malformed input.
FloatBuffer decompress(const CompressedBuffer& cbuf);

// Exact payload size (including per-block headers, excluding the container
// header below) the codec will emit for n values. Defined for Identity and
// FixedRate; LosslessPredictor size is data-dependent and must be read from an
// actual CompressedBuffer, so it throws DataDependentSizeError.
std::uint64_t wire_size_bytes(const CodecSpec& spec, std::uint64_t n);

// Container byte layout (little-endian), kept stable so fixtures are portable:
//   offset 0  magic "HCC1"          4 bytes
//   offset 4  codec kind            1 byte
//   offset 5  rate_bits             1 byte (0 unless FixedRate)
//   offset 6  original_len          8 bytes
//   offset 14 block/chunk count     4 bytes
//   offset 18 payload               payload_bytes() bytes
std::vector<std::uint8_t> to_bytes(const CompressedBuffer& cbuf);
CompressedBuffer from_bytes(const std::vector<std::uint8_t>& bytes);

inline constexpr std::size_t kContainerHeaderBytes = 18;

// Reference implementations: plain single-threaded loops kept deliberately
// simple. The default compress/decompress run the OpenMP kernels and must
// produce byte-identical output; tests and the kernel benchmark compare them.
namespace serial {
CompressedBuffer compress(const CodecSpec& spec, const FloatBuffer& buf);
FloatBuffer decompress(const CompressedBuffer& cbuf);
}  // namespace serial

}  // namespace hcc

#endif
