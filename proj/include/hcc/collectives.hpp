#ifndef HCC_COLLECTIVES_HPP
#define HCC_COLLECTIVES_HPP

#include <vector>

#include "hcc/codec.hpp"
#include "hcc/comm_path.hpp"
#include "hcc/netsim.hpp"

namespace hcc {

// Ordered member list; the order is identical on all members and defines both
// the ring orientation (position j sends to position j+1 mod p) and the
// reduction order.
struct Communicator {
  std::vector<int> ranks;

  int size() const { return static_cast<int>(ranks.size()); }
};

enum class ReduceMode { Sum, Average };

// The collectives below run under the single-threaded simulation driver, so
// they take every member's buffer and return every member's result:
// inputs[j] belongs to the rank at communicator position j.
//
// Value semantics:
//  - reduce_scatter: position i ends up holding chunk i of the element-wise
//    sum, folded in ring order: contributions accumulate left to right
//    starting from position (i+1) mod p. Partial sums are decompressed,
//    added, and recompressed at every hop.
//  - allgather: every rank holds the concatenation in position order. Each
//    shard is compressed once at its origin and forwarded in compressed form,
//    so a lossy codec distorts it exactly once; every rank (origin included)
//    keeps the decompressed copy, which keeps all results bit-identical.
//  - allreduce: reduce_scatter followed by allgather; Average divides by the
//    communicator size after the gather, in full precision.
//
// Cost semantics: members first synchronize to the max participant clock;
// rounds serialize; a round lasts as long as its slowest hop
// (compress + transfer + decompress); all members advance together. Each
// collective records one TraceEvent. Size-1 communicators are a no-op and
// record nothing.

// Blocking send/recv pair: dst receives decompress(compress(buf)); both
// clocks advance to the completion time.
FloatBuffer p2p(SimClock& clock, int src, int dst, const FloatBuffer& buf,
                const CodecSpec& spec, CommPath path);

// buf.size() must be divisible by the communicator size (callers pad with
// zeros); throws BadChunkingError otherwise.
std::vector<FloatBuffer> ring_reduce_scatter(SimClock& clock, const Communicator& comm,
                                             const std::vector<FloatBuffer>& inputs,
                                             const CodecSpec& spec, CommPath path);

// All shards must have equal length; throws BadChunkingError otherwise.
std::vector<FloatBuffer> ring_allgather(SimClock& clock, const Communicator& comm,
                                        const std::vector<FloatBuffer>& shards,
                                        const CodecSpec& spec, CommPath path);

std::vector<FloatBuffer> allreduce(SimClock& clock, const Communicator& comm,
                                   const std::vector<FloatBuffer>& inputs,
                                   const CodecSpec& spec, CommPath path,
                                   ReduceMode mode = ReduceMode::Sum);

}  // namespace hcc

#endif
