#include <cstring>

#include "codec_kernels.hpp"
#include "hcc/codec.hpp"

// Serial reference codec: one plain loop per codec, no layout precomputation.
// Kept as the oracle for the OpenMP implementation and as the baseline side of
// the kernel benchmark.

namespace hcc::serial {

using namespace hcc::detail;

CompressedBuffer compress(const CodecSpec& spec, const FloatBuffer& buf) {
  CompressedBuffer out;
  out.codec = spec;
  out.original_len = buf.size();

  switch (spec.kind) {
    case CodecKind::Identity: {
      out.chunk_count = 0;
      out.payload.resize(4 * buf.size());
      std::memcpy(out.payload.data(), buf.data(), out.payload.size());
      break;
    }
    case CodecKind::FixedRate: {
      const std::size_t nblocks = (buf.size() + kFixedRateBlock - 1) / kFixedRateBlock;
      const std::size_t bb = fixed_rate_block_bytes(spec.rate_bits);
      out.chunk_count = static_cast<std::uint32_t>(nblocks);
      out.payload.resize(nblocks * bb);
      for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t off = b * kFixedRateBlock;
        const std::size_t n = std::min(kFixedRateBlock, buf.size() - off);
        if (!encode_fixed_block(buf.data() + off, n, spec.rate_bits,
                                out.payload.data() + b * bb)) {
          throw NonFiniteInputError("fixed-rate codec: non-finite value in block " +
                                    std::to_string(b));
        }
      }
      break;
    }
    case CodecKind::LosslessPredictor: {
      const std::size_t nchunks = (buf.size() + kPredictorChunk - 1) / kPredictorChunk;
      out.chunk_count = static_cast<std::uint32_t>(nchunks);
      out.payload.assign((nchunks + 7) / 8, 0);
      for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t off = c * kPredictorChunk;
        const std::size_t n = std::min(kPredictorChunk, buf.size() - off);
        if (encode_predictor_chunk(buf.data() + off, n, out.payload)) {
          out.payload[c / 8] |= static_cast<std::uint8_t>(1u << (c % 8));
        }
      }
      break;
    }
  }
  return out;
}

FloatBuffer decompress(const CompressedBuffer& cbuf) {
  FloatBuffer out(cbuf.original_len);

  switch (cbuf.codec.kind) {
    case CodecKind::Identity: {
      if (cbuf.payload.size() != 4 * cbuf.original_len) {
        throw CorruptPayloadError("identity payload size mismatch");
      }
      std::memcpy(out.data(), cbuf.payload.data(), cbuf.payload.size());
      break;
    }
    case CodecKind::FixedRate: {
      const std::size_t nblocks =
          (cbuf.original_len + kFixedRateBlock - 1) / kFixedRateBlock;
      const std::size_t bb = fixed_rate_block_bytes(cbuf.codec.rate_bits);
      if (cbuf.chunk_count != nblocks || cbuf.payload.size() != nblocks * bb) {
        throw CorruptPayloadError("fixed-rate payload does not match block count");
      }
      for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t off = b * kFixedRateBlock;
        const std::size_t n = std::min(kFixedRateBlock, out.size() - off);
        decode_fixed_block(cbuf.payload.data() + b * bb, cbuf.codec.rate_bits,
                           out.data() + off, n);
      }
      break;
    }
    case CodecKind::LosslessPredictor: {
      const std::size_t nchunks =
          (cbuf.original_len + kPredictorChunk - 1) / kPredictorChunk;
      const std::size_t flag_bytes = (nchunks + 7) / 8;
      if (cbuf.chunk_count != nchunks || cbuf.payload.size() < flag_bytes) {
        throw CorruptPayloadError("predictor payload header mismatch");
      }
      std::size_t pos = flag_bytes;
      for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t off = c * kPredictorChunk;
        const std::size_t n = std::min(kPredictorChunk, out.size() - off);
        const bool fallback = (cbuf.payload[c / 8] >> (c % 8)) & 1u;
        const std::size_t used =
            decode_predictor_chunk(cbuf.payload.data() + pos, cbuf.payload.size() - pos,
                                   fallback, out.data() + off, n);
        if (used == 0 && n > 0) {
          throw CorruptPayloadError("predictor payload truncated at chunk " +
                                    std::to_string(c));
        }
        pos += used;
      }
      break;
    }
  }
  return out;
}

}  // namespace hcc::serial
