#include <cstring>
#include <numeric>

#include "codec_kernels.hpp"
#include "hcc/codec.hpp"

// OpenMP codec kernels. Blocks (FixedRate) and chunks (LosslessPredictor) are
// independent, so the parallel loops are elementwise and the output is byte
// identical to the serial reference for any thread count.
//
// LosslessPredictor decompression stays serial: chunk streams are
// self-delimiting, so a chunk's payload offset is only known after decoding
// its predecessors.

namespace hcc {

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
      bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok)
      for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        const std::size_t off = static_cast<std::size_t>(b) * kFixedRateBlock;
        const std::size_t n = std::min(kFixedRateBlock, buf.size() - off);
        ok = encode_fixed_block(buf.data() + off, n, spec.rate_bits,
                                out.payload.data() + static_cast<std::size_t>(b) * bb) &&
             ok;
      }
      if (!ok) throw NonFiniteInputError("fixed-rate codec: non-finite input value");
      break;
    }
    case CodecKind::LosslessPredictor: {
      const std::size_t nchunks = (buf.size() + kPredictorChunk - 1) / kPredictorChunk;
      const std::size_t flag_bytes = (nchunks + 7) / 8;
      out.chunk_count = static_cast<std::uint32_t>(nchunks);

      // Pass 1: per-chunk encoded sizes; prefix sum gives each chunk's offset.
      std::vector<std::size_t> sizes(nchunks);
#pragma omp parallel for schedule(static)
      for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c) {
        const std::size_t off = static_cast<std::size_t>(c) * kPredictorChunk;
        const std::size_t n = std::min(kPredictorChunk, buf.size() - off);
        sizes[c] = predictor_chunk_size(buf.data() + off, n);
      }
      std::vector<std::size_t> offsets(nchunks + 1, flag_bytes);
      std::partial_sum(sizes.begin(), sizes.end(), offsets.begin() + 1);
      for (std::size_t c = 0; c < nchunks; ++c) offsets[c + 1] += flag_bytes;

      out.payload.assign(offsets[nchunks], 0);

      // Pass 2: encode each chunk into its slot.
#pragma omp parallel for schedule(static)
      for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c) {
        const std::size_t off = static_cast<std::size_t>(c) * kPredictorChunk;
        const std::size_t n = std::min(kPredictorChunk, buf.size() - off);
        std::vector<std::uint8_t> scratch;
        scratch.reserve(sizes[c]);
        const bool fallback = encode_predictor_chunk(buf.data() + off, n, scratch);
        std::memcpy(out.payload.data() + offsets[c], scratch.data(), scratch.size());
        if (fallback) {
#pragma omp atomic
          out.payload[c / 8] |= static_cast<std::uint8_t>(1u << (c % 8));
        }
      }
      break;
    }
  }
  return out;
}

FloatBuffer decompress(const CompressedBuffer& cbuf) {
  switch (cbuf.codec.kind) {
    case CodecKind::FixedRate: {
      FloatBuffer out(cbuf.original_len);
      const std::size_t nblocks =
          (cbuf.original_len + kFixedRateBlock - 1) / kFixedRateBlock;
      const std::size_t bb = fixed_rate_block_bytes(cbuf.codec.rate_bits);
      if (cbuf.chunk_count != nblocks || cbuf.payload.size() != nblocks * bb) {
        throw CorruptPayloadError("fixed-rate payload does not match block count");
      }
#pragma omp parallel for schedule(static)
      for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        const std::size_t off = static_cast<std::size_t>(b) * kFixedRateBlock;
        const std::size_t n = std::min(kFixedRateBlock, out.size() - off);
        decode_fixed_block(cbuf.payload.data() + static_cast<std::size_t>(b) * bb,
                           cbuf.codec.rate_bits, out.data() + off, n);
      }
      return out;
    }
    case CodecKind::Identity:
    case CodecKind::LosslessPredictor:
      return serial::decompress(cbuf);
  }
  throw CorruptPayloadError("unknown codec kind");
}

}  // namespace hcc
