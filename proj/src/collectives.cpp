#include "hcc/collectives.hpp"

#include <algorithm>
#include <cassert>

namespace hcc {

namespace {

struct PhaseCost {
  double duration = 0;
  std::uint64_t raw_total = 0;   // summed over all hops
  std::uint64_t wire_total = 0;
  int rounds = 0;
};

void check_members(const SimClock& clock, const Communicator& comm) {
  (void)clock;
  assert(!comm.ranks.empty());
  for ([[maybe_unused]] int r : comm.ranks) {
    assert(r >= 0 && r < clock.topology().world_size());
  }
}

// Ring reduce-scatter value+cost pass. Mutates `work` in place; on return,
// work[i]'s chunk i holds the ring-order fold. No event is recorded here.
PhaseCost reduce_scatter_core(SimClock& clock, const Communicator& comm,
                              std::vector<FloatBuffer>& work, const CodecSpec& spec) {
  const int p = comm.size();
  const std::size_t chunk = work[0].size() / p;
  const std::uint64_t raw_msg = 4 * chunk;
  PhaseCost cost;

  for (int round = 0; round < p - 1; ++round) {
    double round_dur = 0;
    // Stage every hop's message first: all sends in a round use the values
    // produced by the previous round.
    std::vector<CompressedBuffer> msgs(p);
    std::vector<int> send_chunk(p);
    for (int j = 0; j < p; ++j) {
      const int c = ((j - 1 - round) % p + p) % p;
      send_chunk[j] = c;
      const float* src = work[j].data() + static_cast<std::size_t>(c) * chunk;
      msgs[j] = compress(spec, FloatBuffer(src, src + chunk));
    }
    for (int j = 0; j < p; ++j) {
      const int dst = (j + 1) % p;
      const FloatBuffer received = decompress(msgs[j]);
      float* acc = work[dst].data() + static_cast<std::size_t>(send_chunk[j]) * chunk;
      for (std::size_t e = 0; e < chunk; ++e) {
        acc[e] = received[e] + acc[e];  // arriving partial on the left
      }
      const double hop = codec_time(clock.topology(), raw_msg, spec) +
                         transfer_time(clock.topology(), msgs[j].payload_bytes(),
                                       link_class(clock.topology(), comm.ranks[j],
                                                  comm.ranks[dst])) +
                         codec_time(clock.topology(), raw_msg, spec);
      round_dur = std::max(round_dur, hop);
      cost.raw_total += raw_msg;
      cost.wire_total += msgs[j].payload_bytes();
    }
    cost.duration += round_dur;
  }
  cost.rounds = p - 1;
  return cost;
}

// Ring allgather value+cost pass: shards[j] -> every member's concatenation.
PhaseCost allgather_core(SimClock& clock, const Communicator& comm,
                         const std::vector<FloatBuffer>& shards,
                         std::vector<FloatBuffer>& out, const CodecSpec& spec) {
  const int p = comm.size();
  const std::size_t chunk = shards[0].size();
  const std::uint64_t raw_msg = 4 * chunk;
  PhaseCost cost;

  // Compress once at the origin; everyone (origin included) keeps the
  // decompressed copy so results agree bit-for-bit under lossy codecs.
  std::vector<CompressedBuffer> cbufs(p);
  std::vector<FloatBuffer> dec(p);
  for (int j = 0; j < p; ++j) {
    cbufs[j] = compress(spec, shards[j]);
    dec[j] = decompress(cbufs[j]);
  }
  out.assign(p, FloatBuffer(static_cast<std::size_t>(p) * chunk));
  for (int i = 0; i < p; ++i) {
    for (int c = 0; c < p; ++c) {
      std::copy(dec[c].begin(), dec[c].end(),
                out[i].begin() + static_cast<std::size_t>(c) * chunk);
    }
  }

  for (int round = 0; round < p - 1; ++round) {
    double round_dur = 0;
    for (int j = 0; j < p; ++j) {
      const int dst = (j + 1) % p;
      const int c = ((j - round) % p + p) % p;  // shard being forwarded by j
      double hop = transfer_time(clock.topology(), cbufs[c].payload_bytes(),
                                 link_class(clock.topology(), comm.ranks[j],
                                            comm.ranks[dst])) +
                   codec_time(clock.topology(), raw_msg, spec);
      if (round == 0) hop += codec_time(clock.topology(), raw_msg, spec);
      round_dur = std::max(round_dur, hop);
      cost.raw_total += raw_msg;
      cost.wire_total += cbufs[c].payload_bytes();
    }
    cost.duration += round_dur;
  }
  cost.rounds = p - 1;
  return cost;
}

void commit(SimClock& clock, const Communicator& comm, const PhaseCost& cost,
            CommPath path, CollectiveKind kind) {
  clock.sync_to_max(comm.ranks);
  for (int r : comm.ranks) clock.advance(r, cost.duration);
  const auto p = static_cast<std::uint64_t>(comm.size());
  clock.record(TraceEvent{.step = 0,
                          .path = path,
                          .collective = kind,
                          .comm_size = comm.size(),
                          .raw_bytes = cost.raw_total / p,
                          .wire_bytes = cost.wire_total / p,
                          .duration_s = cost.duration,
                          .round_count = cost.rounds});
}

}  // namespace

FloatBuffer p2p(SimClock& clock, int src, int dst, const FloatBuffer& buf,
                const CodecSpec& spec, CommPath path) {
  assert(src != dst);
  const CompressedBuffer cbuf = compress(spec, buf);
  const std::uint64_t raw = 4 * buf.size();
  const double dur = codec_time(clock.topology(), raw, spec) +
                     transfer_time(clock.topology(), cbuf.payload_bytes(),
                                   link_class(clock.topology(), src, dst)) +
                     codec_time(clock.topology(), raw, spec);
  const int pair[2] = {src, dst};
  clock.sync_to_max(pair);
  clock.advance(src, dur);
  clock.advance(dst, dur);
  clock.record(TraceEvent{.step = 0,
                          .path = path,
                          .collective = CollectiveKind::P2P,
                          .comm_size = 2,
                          .raw_bytes = raw,
                          .wire_bytes = cbuf.payload_bytes(),
                          .duration_s = dur,
                          .round_count = 1});
  return decompress(cbuf);
}

std::vector<FloatBuffer> ring_reduce_scatter(SimClock& clock, const Communicator& comm,
                                             const std::vector<FloatBuffer>& inputs,
                                             const CodecSpec& spec, CommPath path) {
  check_members(clock, comm);
  const int p = comm.size();
  assert(static_cast<int>(inputs.size()) == p);
  const std::size_t n = inputs[0].size();
  if (n % p != 0) {
    throw BadChunkingError("reduce_scatter: length " + std::to_string(n) +
                           " not divisible by " + std::to_string(p));
  }
  for (const auto& b : inputs) {
    if (b.size() != n) throw BadChunkingError("reduce_scatter: ragged inputs");
  }
  if (p == 1) return {inputs[0]};

  std::vector<FloatBuffer> work = inputs;
  const PhaseCost cost = reduce_scatter_core(clock, comm, work, spec);
  commit(clock, comm, cost, path, CollectiveKind::ReduceScatter);

  const std::size_t chunk = n / p;
  std::vector<FloatBuffer> shards(p);
  for (int i = 0; i < p; ++i) {
    const float* s = work[i].data() + static_cast<std::size_t>(i) * chunk;
    shards[i].assign(s, s + chunk);
  }
  return shards;
}

std::vector<FloatBuffer> ring_allgather(SimClock& clock, const Communicator& comm,
                                        const std::vector<FloatBuffer>& shards,
                                        const CodecSpec& spec, CommPath path) {
  check_members(clock, comm);
  const int p = comm.size();
  assert(static_cast<int>(shards.size()) == p);
  for (const auto& s : shards) {
    if (s.size() != shards[0].size()) {
      throw BadChunkingError("allgather: mismatched shard lengths");
    }
  }
  if (p == 1) return {shards[0]};

  std::vector<FloatBuffer> out;
  const PhaseCost cost = allgather_core(clock, comm, shards, out, spec);
  commit(clock, comm, cost, path, CollectiveKind::AllGather);
  return out;
}

std::vector<FloatBuffer> allreduce(SimClock& clock, const Communicator& comm,
                                   const std::vector<FloatBuffer>& inputs,
                                   const CodecSpec& spec, CommPath path,
                                   ReduceMode mode) {
  check_members(clock, comm);
  const int p = comm.size();
  assert(static_cast<int>(inputs.size()) == p);
  const std::size_t n = inputs[0].size();
  if (n % p != 0) {
    throw BadChunkingError("allreduce: length " + std::to_string(n) +
                           " not divisible by " + std::to_string(p));
  }
  for (const auto& b : inputs) {
    if (b.size() != n) throw BadChunkingError("allreduce: ragged inputs");
  }
  if (p == 1) {
    return {inputs[0]};
  }

  std::vector<FloatBuffer> work = inputs;
  const PhaseCost rs = reduce_scatter_core(clock, comm, work, spec);

  const std::size_t chunk = n / p;
  std::vector<FloatBuffer> shards(p);
  for (int i = 0; i < p; ++i) {
    const float* s = work[i].data() + static_cast<std::size_t>(i) * chunk;
    shards[i].assign(s, s + chunk);
  }

  std::vector<FloatBuffer> out;
  const PhaseCost ag = allgather_core(clock, comm, shards, out, spec);

  if (mode == ReduceMode::Average) {
    const float scale = static_cast<float>(p);
    for (auto& b : out) {
      for (auto& v : b) v = v / scale;
    }
  }

  PhaseCost total;
  total.duration = rs.duration + ag.duration;
  total.raw_total = rs.raw_total + ag.raw_total;
  total.wire_total = rs.wire_total + ag.wire_total;
  total.rounds = rs.rounds + ag.rounds;
  commit(clock, comm, total, path, CollectiveKind::AllReduce);
  return out;
}

}  // namespace hcc
