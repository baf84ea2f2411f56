#ifndef HCC_SRC_CODEC_KERNELS_HPP
#define HCC_SRC_CODEC_KERNELS_HPP

// Per-block / per-chunk codec kernels shared by the serial reference and the
// OpenMP implementations. Blocks and chunks are fully independent, so the two
// implementations differ only in how the outer loop is driven.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "hcc/codec.hpp"

namespace hcc::detail {

inline std::uint32_t float_bits(float f) { return std::bit_cast<std::uint32_t>(f); }
inline float bits_float(std::uint32_t u) { return std::bit_cast<float>(u); }

// ---------------------------------------------------------------------------
// Bit packing, LSB-first into a little-endian byte stream.
// ---------------------------------------------------------------------------

class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void put(std::uint32_t value, int nbits) {
    acc_ |= static_cast<std::uint64_t>(value & mask32(nbits)) << filled_;
    filled_ += nbits;
    while (filled_ >= 8) {
      out_.push_back(static_cast<std::uint8_t>(acc_));
      acc_ >>= 8;
      filled_ -= 8;
    }
  }

  // Pads the tail with zero bits up to the next byte boundary.
  void flush() {
    if (filled_ > 0) {
      out_.push_back(static_cast<std::uint8_t>(acc_));
      acc_ = 0;
      filled_ = 0;
    }
  }

  static std::uint32_t mask32(int nbits) {
    return nbits >= 32 ? 0xFFFFFFFFu : ((1u << nbits) - 1u);
  }

 private:
  std::vector<std::uint8_t>& out_;
  std::uint64_t acc_ = 0;
  int filled_ = 0;
};

class BitReader {
 public:
  BitReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  // Returns false if the stream is exhausted before nbits are available.
  bool get(int nbits, std::uint32_t& value) {
    while (filled_ < nbits) {
      if (pos_ >= size_) return false;
      acc_ |= static_cast<std::uint64_t>(data_[pos_++]) << filled_;
      filled_ += 8;
    }
    value = static_cast<std::uint32_t>(acc_) & BitWriter::mask32(nbits);
    acc_ >>= nbits;
    filled_ -= nbits;
    return true;
  }

  std::size_t bytes_consumed() const { return pos_; }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
  std::uint64_t acc_ = 0;
  int filled_ = 0;
};

// ---------------------------------------------------------------------------
// FixedRate: block exponent-aligned quantizer.
//
// Block layout: 1 byte biased max exponent (E + 127), then 64 values packed at
// rate bits each (biased unsigned, LSB-first) = 1 + 8*rate bytes total.
// Quantization step q = 2^(E - rate + 2); |v| < 2^(E+1) guarantees
// v / q lands inside the signed rate-bit range before rounding.
// ---------------------------------------------------------------------------

inline std::size_t fixed_rate_block_bytes(int rate) {
  return 1 + static_cast<std::size_t>(rate) * kFixedRateBlock / 8;
}

// n <= 64 live values; the remainder of the block is treated as zeros.
// Returns false if a non-finite value is present (caller reports the error).
inline bool encode_fixed_block(const float* v, std::size_t n, int rate, std::uint8_t* out) {
  int max_exp = -127;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(v[i])) return false;
    if (v[i] != 0.0f) {
      int e = std::ilogb(v[i]);
      if (e < -127) e = -127;
      if (e > max_exp) max_exp = e;
    }
  }
  out[0] = static_cast<std::uint8_t>(max_exp + 127);

  const double step = std::ldexp(1.0, max_exp - rate + 2);
  const std::int64_t qmax = (std::int64_t{1} << (rate - 1)) - 1;
  const std::int64_t qmin = -(std::int64_t{1} << (rate - 1));
  const std::int64_t bias = std::int64_t{1} << (rate - 1);

  std::uint64_t acc = 0;
  int filled = 0;
  std::uint8_t* p = out + 1;
  for (std::size_t i = 0; i < kFixedRateBlock; ++i) {
    std::int64_t q = 0;
    if (i < n && v[i] != 0.0f) {
      // llrint under the default rounding mode is round-to-nearest-even.
      q = std::llrint(static_cast<double>(v[i]) / step);
      if (q > qmax) q = qmax;
      if (q < qmin) q = qmin;
    }
    acc |= static_cast<std::uint64_t>(static_cast<std::uint32_t>(q + bias) &
                                      BitWriter::mask32(rate))
           << filled;
    filled += rate;
    while (filled >= 8) {
      *p++ = static_cast<std::uint8_t>(acc);
      acc >>= 8;
      filled -= 8;
    }
  }
  // 64 * rate bits is always a whole number of bytes.
  return true;
}

inline void decode_fixed_block(const std::uint8_t* in, int rate, float* out, std::size_t n) {
  const int max_exp = static_cast<int>(in[0]) - 127;
  const double step = std::ldexp(1.0, max_exp - rate + 2);
  const std::int64_t bias = std::int64_t{1} << (rate - 1);

  std::uint64_t acc = 0;
  int filled = 0;
  const std::uint8_t* p = in + 1;
  for (std::size_t i = 0; i < kFixedRateBlock; ++i) {
    while (filled < rate) {
      acc |= static_cast<std::uint64_t>(*p++) << filled;
      filled += 8;
    }
    const std::uint32_t u = static_cast<std::uint32_t>(acc) & BitWriter::mask32(rate);
    acc >>= rate;
    filled -= rate;
    if (i < n) {
      const std::int64_t q = static_cast<std::int64_t>(u) - bias;
      out[i] = static_cast<float>(static_cast<double>(q) * step);
    }
  }
}

// ---------------------------------------------------------------------------
// LosslessPredictor: XOR each value's bit pattern with the previous value's
// (first value of a chunk XORed with 0), then emit each residual as a 5-bit
// leading-zero count capped at 31 plus the remaining 32-lzc low bits. A zero
// residual therefore costs 6 bits. If a chunk's byte-aligned encoded size
// reaches the raw size, the raw chunk is emitted instead and its fallback
// flag is set (payload begins with one flag bit per chunk, packed into
// ceil(chunk_count / 8) bytes).
// ---------------------------------------------------------------------------

// Appends the encoded-or-raw chunk to `out` and returns true when the raw
// fallback was taken.
inline bool encode_predictor_chunk(const float* v, std::size_t n,
                                   std::vector<std::uint8_t>& out) {
  const std::size_t raw_bytes = 4 * n;
  std::vector<std::uint8_t> enc;
  enc.reserve(raw_bytes);
  BitWriter bw(enc);
  std::uint32_t prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t x = float_bits(v[i]);
    const std::uint32_t r = x ^ prev;
    prev = x;
    const int lzc = std::min(std::countl_zero(r), 31);
    bw.put(static_cast<std::uint32_t>(lzc), 5);
    bw.put(r, 32 - lzc);
  }
  bw.flush();
  if (enc.size() >= raw_bytes) {
    const std::size_t base = out.size();
    out.resize(base + raw_bytes);
    std::memcpy(out.data() + base, v, raw_bytes);
    return true;
  }
  out.insert(out.end(), enc.begin(), enc.end());
  return false;
}

// Exact byte size encode_predictor_chunk would append (used by the OpenMP
// compressor to lay out chunk offsets before emitting).
inline std::size_t predictor_chunk_size(const float* v, std::size_t n) {
  std::size_t bits = 0;
  std::uint32_t prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t x = float_bits(v[i]);
    const std::uint32_t r = x ^ prev;
    prev = x;
    bits += 5 + (32 - std::min(std::countl_zero(r), 31));
  }
  const std::size_t enc_bytes = (bits + 7) / 8;
  return std::min(enc_bytes, 4 * n);
}

// Decodes one chunk starting at `data` (either raw or bit-packed per
// `fallback`). Returns the number of payload bytes consumed, or 0 on a
// truncated stream.
inline std::size_t decode_predictor_chunk(const std::uint8_t* data, std::size_t size,
                                          bool fallback, float* out, std::size_t n) {
  if (fallback) {
    if (size < 4 * n) return 0;
    std::memcpy(out, data, 4 * n);
    return 4 * n;
  }
  BitReader br(data, size);
  std::uint32_t prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t lzc = 0, low = 0;
    if (!br.get(5, lzc)) return 0;
    if (!br.get(32 - static_cast<int>(lzc), low)) return 0;
    const std::uint32_t x = low ^ prev;
    out[i] = bits_float(x);
    prev = x;
  }
  return br.bytes_consumed();
}

}  // namespace hcc::detail

#endif
