#include "hcc/collectives.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "hcc/rng.hpp"
#include "support/oracles.hpp"

using namespace hcc;
using namespace hcc::testing;

namespace {

bool bit_equal(const FloatBuffer& a, const FloatBuffer& b) {
  if (a.size() != b.size()) return false;
  return a.empty() || std::memcmp(a.data(), b.data(), 4 * a.size()) == 0;
}

Communicator make_comm(int p) {
  Communicator c;
  for (int i = 0; i < p; ++i) c.ranks.push_back(i);
  return c;
}

std::vector<FloatBuffer> random_inputs(Rng& rng, int p, std::size_t n) {
  std::vector<FloatBuffer> out(p);
  for (auto& b : out) b = uniform_buffer(rng, n, -1.0f, 1.0f);
  return out;
}

}  // namespace

TEST(P2p, IdentityAndLosslessAreExact) {
  SimClock clock(Topology::lassen_like(2));
  Rng rng(31);
  const auto buf = random_bits_buffer(rng, 1000);

  const auto got = p2p(clock, 0, 4, buf, CodecSpec::identity(), CommPath::PpP2p);
  EXPECT_TRUE(bit_equal(buf, got));
  // Zero codec time for identity: duration is exactly the transfer.
  EXPECT_DOUBLE_EQ(clock.time(0), transfer_time(clock.topology(), 4000,
                                                LinkClass::InterNode));
  EXPECT_DOUBLE_EQ(clock.time(4), clock.time(0));

  const auto got2 = p2p(clock, 1, 2, buf, CodecSpec::lossless(), CommPath::PpP2p);
  EXPECT_TRUE(bit_equal(buf, got2));
  ASSERT_EQ(clock.trace().size(), 2u);
  EXPECT_EQ(clock.trace()[0].collective, CollectiveKind::P2P);
  EXPECT_EQ(clock.trace()[0].raw_bytes, 4000u);
  EXPECT_EQ(clock.trace()[0].wire_bytes, 4000u);
  EXPECT_LE(clock.trace()[1].wire_bytes, 4000u + 1);
}

TEST(P2p, FixedRateMatchesDirectRoundTrip) {
  SimClock clock(Topology::lassen_like(2));
  FloatBuffer ramp(64);
  for (int i = 0; i < 64; ++i) ramp[i] = static_cast<float>(i) / 64.0f - 0.5f;
  const auto spec = CodecSpec::fixed_rate(8);
  const auto got = p2p(clock, 0, 1, ramp, spec, CommPath::PpP2p);
  EXPECT_TRUE(bit_equal(got, decompress(compress(spec, ramp))));
  const double bound = fixed_rate_block_bound(ramp.data(), ramp.size(), 8);
  EXPECT_LE(max_abs_error(ramp, got), bound);
}

TEST(ReduceScatter, TwoRankExample) {
  SimClock clock(Topology::lassen_like(2));
  const std::vector<FloatBuffer> inputs = {{1.0f, 2.0f}, {3.0f, 4.0f}};
  const auto shards = ring_reduce_scatter(clock, make_comm(2), inputs,
                                          CodecSpec::identity(), CommPath::DpAllReduce);
  ASSERT_EQ(shards.size(), 2u);
  EXPECT_EQ(shards[0], FloatBuffer{4.0f});
  EXPECT_EQ(shards[1], FloatBuffer{6.0f});
}

TEST(ReduceScatter, MatchesFoldOracle) {
  Rng rng(32);
  for (int p : {2, 4, 8}) {
    SimClock clock(Topology::lassen_like(2));
    const auto inputs = random_inputs(rng, p, 16 * p);
    const auto shards = ring_reduce_scatter(clock, make_comm(p), inputs,
                                            CodecSpec::identity(),
                                            CommPath::Zero1ReduceScatter);
    const auto want = ring_reduce_oracle(inputs);
    EXPECT_TRUE(bit_equal(concat_oracle(shards), want)) << "p=" << p;
  }
}

TEST(ReduceScatter, FixedRateWithinAccumulatedBound) {
  Rng rng(33);
  const int p = 4;
  const int rate = 16;
  SimClock clock(Topology::lassen_like(2));
  const auto inputs = random_inputs(rng, p, 64 * p);
  const auto shards = ring_reduce_scatter(clock, make_comm(p), inputs,
                                          CodecSpec::fixed_rate(rate),
                                          CommPath::Zero1ReduceScatter);

  // Accumulate the worst-case per-hop quantization error along the exact
  // fold: hop k compresses the partial sum of k+1 contributions. A factor of
  // two absorbs exponent growth caused by the drift of the quantized partial
  // away from the exact partial.
  const auto exact = ring_reduce_oracle(inputs);
  const std::size_t chunk = inputs[0].size() / p;
  for (int i = 0; i < p; ++i) {
    for (std::size_t e = 0; e < chunk; ++e) {
      const std::size_t idx = i * chunk + e;
      float partial = inputs[(i + 1) % p][idx];
      double bound = 0.0;
      for (int s = 2; s <= p; ++s) {
        bound += 2.0 * fixed_rate_block_bound(&partial, 1, rate);
        partial = partial + inputs[(i + s) % p][idx];
      }
      ASSERT_LE(std::abs(static_cast<double>(shards[i][e]) - exact[idx]), bound);
    }
  }
}

TEST(AllGather, TwoRankExample) {
  SimClock clock(Topology::lassen_like(2));
  const std::vector<FloatBuffer> shards = {{1.0f}, {2.0f}};
  const auto out = ring_allgather(clock, make_comm(2), shards, CodecSpec::identity(),
                                  CommPath::Zero1AllGather);
  const FloatBuffer want = {1.0f, 2.0f};
  EXPECT_TRUE(bit_equal(out[0], want));
  EXPECT_TRUE(bit_equal(out[1], want));
}

TEST(AllGather, MatchesConcatOracle) {
  Rng rng(34);
  for (int p : {2, 4, 8}) {
    SimClock clock(Topology::lassen_like(2));
    std::vector<FloatBuffer> shards(p);
    for (auto& s : shards) s = random_bits_buffer(rng, 32);
    const auto out = ring_allgather(clock, make_comm(p), shards, CodecSpec::identity(),
                                    CommPath::TpAllGather);
    const auto want = concat_oracle(shards);
    for (int i = 0; i < p; ++i) EXPECT_TRUE(bit_equal(out[i], want));
  }
}

TEST(AllGather, LossyDistortsExactlyOnce) {
  Rng rng(35);
  const int p = 4;
  SimClock clock(Topology::lassen_like(2));
  const auto spec = CodecSpec::fixed_rate(8);
  std::vector<FloatBuffer> shards(p);
  for (auto& s : shards) s = uniform_buffer(rng, 64, -1.0f, 1.0f);

  const auto out = ring_allgather(clock, make_comm(p), shards, spec,
                                  CommPath::Zero1AllGather);
  for (int i = 0; i < p; ++i) {
    for (int c = 0; c < p; ++c) {
      const auto direct = decompress(compress(spec, shards[c]));
      FloatBuffer slice(out[i].begin() + c * 64, out[i].begin() + (c + 1) * 64);
      EXPECT_TRUE(bit_equal(slice, direct)) << "rank " << i << " chunk " << c;
    }
  }
}

TEST(AllReduce, TwoRankExample) {
  SimClock clock(Topology::lassen_like(2));
  const std::vector<FloatBuffer> inputs = {{1.0f, 2.0f}, {3.0f, 4.0f}};
  const auto out = allreduce(clock, make_comm(2), inputs, CodecSpec::identity(),
                             CommPath::DpAllReduce);
  const FloatBuffer want = {4.0f, 6.0f};
  EXPECT_TRUE(bit_equal(out[0], want));
  EXPECT_TRUE(bit_equal(out[1], want));

  const auto avg = allreduce(clock, make_comm(2), inputs, CodecSpec::identity(),
                             CommPath::DpAllReduce, ReduceMode::Average);
  const FloatBuffer wavg = {2.0f, 3.0f};
  EXPECT_TRUE(bit_equal(avg[0], wavg));
}

TEST(AllReduce, MatchesOracleAndAgreement) {
  Rng rng(36);
  for (int p : {2, 4, 8}) {
    SimClock clock(Topology::lassen_like(2));
    const auto inputs = random_inputs(rng, p, 8 * p);
    const auto out = allreduce(clock, make_comm(p), inputs, CodecSpec::identity(),
                               CommPath::DpAllReduce);
    const auto want = ring_reduce_oracle(inputs);
    for (int i = 0; i < p; ++i) EXPECT_TRUE(bit_equal(out[i], want)) << "p=" << p;
  }
}

TEST(AllReduce, LosslessTransparency) {
  Rng rng(37);
  for (int p : {2, 4}) {
    SimClock c1(Topology::lassen_like(2));
    SimClock c2(Topology::lassen_like(2));
    const auto inputs = random_inputs(rng, p, 32 * p);
    const auto ident = allreduce(c1, make_comm(p), inputs, CodecSpec::identity(),
                                 CommPath::DpAllReduce);
    const auto mpc = allreduce(c2, make_comm(p), inputs, CodecSpec::lossless(),
                               CommPath::DpAllReduce);
    for (int i = 0; i < p; ++i) EXPECT_TRUE(bit_equal(ident[i], mpc[i]));
    // Only the byte/time accounting may differ.
    EXPECT_EQ(c1.trace()[0].raw_bytes, c2.trace()[0].raw_bytes);
  }
}

TEST(AllReduce, LossyAgreementAcrossRanks) {
  Rng rng(38);
  const int p = 4;
  SimClock clock(Topology::lassen_like(2));
  const auto inputs = random_inputs(rng, p, 64 * p);
  const auto out = allreduce(clock, make_comm(p), inputs, CodecSpec::fixed_rate(8),
                             CommPath::DpAllReduce);
  for (int i = 1; i < p; ++i) EXPECT_TRUE(bit_equal(out[0], out[i]));
}

TEST(AllReduce, TraceAccounting) {
  Rng rng(39);
  const int p = 4;
  const std::size_t n = 64 * p;
  SimClock clock(Topology::lassen_like(2));
  const auto inputs = random_inputs(rng, p, n);
  allreduce(clock, make_comm(p), inputs, CodecSpec::identity(), CommPath::DpAllReduce);
  ASSERT_EQ(clock.trace().size(), 1u);
  const auto& e = clock.trace()[0];
  EXPECT_EQ(e.collective, CollectiveKind::AllReduce);
  EXPECT_EQ(e.comm_size, p);
  EXPECT_EQ(e.round_count, 2 * (p - 1));
  // 2 (p-1)/p of the buffer bytes, sent per rank.
  EXPECT_EQ(e.raw_bytes, 2 * (p - 1) * (4 * n) / static_cast<std::size_t>(p));
  EXPECT_EQ(e.wire_bytes, e.raw_bytes);
  EXPECT_GT(e.duration_s, 0.0);

  // All members end synchronized at the max entry time plus the duration.
  for (int r = 1; r < p; ++r) EXPECT_DOUBLE_EQ(clock.time(0), clock.time(r));
}

TEST(AllReduce, WireBytesShrinkUnderCompression) {
  Rng rng(40);
  const int p = 4;
  SimClock clock(Topology::lassen_like(2));
  const auto inputs = random_inputs(rng, p, 256 * p);
  allreduce(clock, make_comm(p), inputs, CodecSpec::fixed_rate(8),
            CommPath::DpAllReduce);
  const auto& e = clock.trace()[0];
  EXPECT_LT(e.wire_bytes, e.raw_bytes);
  EXPECT_GT(e.wire_bytes, e.raw_bytes / 8);  // ~4:1 plus block headers
}

TEST(Collectives, BadChunkingRejected) {
  SimClock clock(Topology::lassen_like(2));
  const std::vector<FloatBuffer> ragged = {{1.0f, 2.0f, 3.0f}, {4.0f, 5.0f, 6.0f}};
  EXPECT_THROW(ring_reduce_scatter(clock, make_comm(2), ragged, CodecSpec::identity(),
                                   CommPath::DpAllReduce),
               BadChunkingError);
  EXPECT_THROW(allreduce(clock, make_comm(2), ragged, CodecSpec::identity(),
                         CommPath::DpAllReduce),
               BadChunkingError);
  const std::vector<FloatBuffer> mismatched = {{1.0f, 2.0f}, {3.0f}};
  EXPECT_THROW(ring_allgather(clock, make_comm(2), mismatched, CodecSpec::identity(),
                              CommPath::TpAllGather),
               BadChunkingError);
}

TEST(Collectives, SingletonCommIsFree) {
  SimClock clock(Topology::lassen_like(2));
  const std::vector<FloatBuffer> one = {{1.0f, 2.0f, 3.0f}};
  const auto out = allreduce(clock, make_comm(1), one, CodecSpec::fixed_rate(8),
                             CommPath::DpAllReduce);
  EXPECT_TRUE(bit_equal(out[0], one[0]));  // not even quantized
  EXPECT_TRUE(clock.trace().empty());
  EXPECT_DOUBLE_EQ(clock.max_time(), 0.0);
}

TEST(Collectives, DeterministicReplay) {
  Rng rng(41);
  const auto inputs = random_inputs(rng, 4, 128);
  std::vector<TraceEvent> traces[2];
  FloatBuffer results[2];
  for (int trial = 0; trial < 2; ++trial) {
    SimClock clock(Topology::lassen_like(2));
    const auto out = allreduce(clock, make_comm(4), inputs, CodecSpec::lossless(),
                               CommPath::DpAllReduce);
    traces[trial] = clock.trace();
    results[trial] = out[0];
  }
  EXPECT_TRUE(bit_equal(results[0], results[1]));
  ASSERT_EQ(traces[0].size(), traces[1].size());
  for (std::size_t i = 0; i < traces[0].size(); ++i) {
    EXPECT_EQ(traces[0][i].wire_bytes, traces[1][i].wire_bytes);
    EXPECT_DOUBLE_EQ(traces[0][i].duration_s, traces[1][i].duration_s);
  }
}
