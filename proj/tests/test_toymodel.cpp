#include "hcc/toymodel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "support/serial_trainer.hpp"

using namespace hcc;
using namespace hcc::testing;

namespace {

ToyModelConfig small_cfg() {
  ToyModelConfig cfg;
  cfg.num_blocks = 4;
  cfg.hidden_dim = 16;
  cfg.input_dim = 8;
  cfg.batch_size = 8;
  cfg.microbatches = 2;
  cfg.steps = 12;
  cfg.seed = 3;
  cfg.learning_rate = 2e-3f;
  return cfg;
}

bool models_bit_equal(const FullModel& a, const FullModel& b) {
  return a.w1.size() == b.w1.size() && a.w2.size() == b.w2.size() &&
         std::memcmp(a.w1.data(), b.w1.data(), 4 * a.w1.size()) == 0 &&
         std::memcmp(a.w2.data(), b.w2.data(), 4 * a.w2.size()) == 0;
}

double max_rel_err(const FullModel& a, const FullModel& b) {
  double worst = 0.0;
  auto scan = [&](const std::vector<float>& x, const std::vector<float>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double denom = std::max(1e-12, std::abs(static_cast<double>(y[i])));
      worst = std::max(worst, std::abs(static_cast<double>(x[i]) - y[i]) / denom);
    }
  };
  scan(a.w1, b.w1);
  scan(a.w2, b.w2);
  return worst;
}

RunMetrics train(const ToyModelConfig& cfg, int dp, int pp, int tp,
                 const SchemeTable& scheme, ZeroMode zero, int num_nodes,
                 std::vector<TraceEvent>* trace = nullptr, FullModel* final_model = nullptr) {
  const Topology topo = Topology::lassen_like(num_nodes);
  const auto layout = build_layout(dp, pp, tp, topo);
  Trainer3D trainer(cfg, layout, topo, scheme, zero);
  RunMetrics met = trainer.run();
  if (trace) *trace = trainer.clock().trace();
  if (final_model) *final_model = trainer.assemble_replica(0);
  return met;
}

}  // namespace

TEST(ToyModelConfig, DivisibilityChecks) {
  const Topology topo = Topology::lassen_like(2);
  const auto layout = build_layout(2, 2, 2, topo);
  ToyModelConfig cfg = small_cfg();
  EXPECT_NO_THROW(cfg.validate(layout));
  cfg.hidden_dim = 15;
  EXPECT_THROW(cfg.validate(layout), ConfigError);
  cfg = small_cfg();
  cfg.num_blocks = 3;
  EXPECT_THROW(cfg.validate(layout), ConfigError);
  cfg = small_cfg();
  cfg.batch_size = 6;
  EXPECT_THROW(cfg.validate(layout), ConfigError);
}

TEST(SerialEquivalence, Layouts) {
  ToyModelConfig cfg = small_cfg();
  cfg.steps = 10;

  struct Case {
    int dp, pp, tp;
    bool bit_exact;
  };
  // tp=1 layouts reproduce the serial oracle bit for bit; TP splits matmul
  // partial sums, so those cases carry a tolerance.
  const Case cases[] = {{1, 1, 1, true},
                        {2, 1, 1, true},
                        {1, 2, 1, true},
                        {1, 1, 2, false},
                        {2, 2, 2, false}};

  for (const auto& c : cases) {
    const auto oracle = serial_train_oracle(cfg, c.dp, cfg.steps);

    const Topology topo = Topology::preset("lassen-like", 2);
    Topology shaped = topo;
    shaped.num_nodes = 1;
    shaped.gpus_per_node = c.dp * c.pp * c.tp;
    const auto layout = build_layout(c.dp, c.pp, c.tp, shaped);
    Trainer3D trainer(cfg, layout, shaped, scheme_no_compression(), ZeroMode::Off);
    const auto met = trainer.run();
    const FullModel got = trainer.assemble_replica(0);

    ASSERT_EQ(met.step_loss.size(), oracle.step_loss.size());
    if (c.bit_exact) {
      for (std::size_t s = 0; s < met.step_loss.size(); ++s) {
        ASSERT_EQ(met.step_loss[s], oracle.step_loss[s])
            << "dp=" << c.dp << " pp=" << c.pp << " tp=" << c.tp << " step " << s;
      }
      EXPECT_TRUE(models_bit_equal(got, oracle.model))
          << "dp=" << c.dp << " pp=" << c.pp << " tp=" << c.tp;
    } else {
      EXPECT_LT(max_rel_err(got, oracle.model), 1e-5)
          << "dp=" << c.dp << " pp=" << c.pp << " tp=" << c.tp;
    }
  }
}

TEST(LosslessTransparency, EndToEnd) {
  ToyModelConfig cfg = small_cfg();
  cfg.steps = 8;
  FullModel m_ident, m_mpc;
  const auto ident = train(cfg, 2, 2, 2, scheme_no_compression(), ZeroMode::Off, 2,
                           nullptr, &m_ident);
  const auto mpc = train(cfg, 2, 2, 2, scheme_naive(CodecSpec::lossless()),
                         ZeroMode::Off, 2, nullptr, &m_mpc);
  ASSERT_EQ(ident.step_loss.size(), mpc.step_loss.size());
  for (std::size_t s = 0; s < ident.step_loss.size(); ++s) {
    ASSERT_EQ(ident.step_loss[s], mpc.step_loss[s]);
  }
  EXPECT_TRUE(models_bit_equal(m_ident, m_mpc));
  EXPECT_EQ(ident.final_eval_loss, mpc.final_eval_loss);
}

TEST(Zero1, ShardedMatchesUnshardedOracle) {
  for (int dp : {2, 4}) {
    ToyModelConfig cfg = small_cfg();
    cfg.steps = 10;
    cfg.batch_size = 8 * dp;
    const auto oracle = serial_train_oracle(cfg, dp, cfg.steps);

    Topology topo = Topology::lassen_like(1);
    topo.gpus_per_node = dp;
    const auto layout = build_layout(dp, 1, 1, topo);

    for (ZeroMode mode : {ZeroMode::Replace, ZeroMode::Redundant, ZeroMode::Off}) {
      Trainer3D trainer(cfg, layout, topo, scheme_no_compression(), mode);
      trainer.run();
      const FullModel got = trainer.assemble_replica(0);
      EXPECT_TRUE(models_bit_equal(got, oracle.model))
          << "dp=" << dp << " mode=" << to_string(mode);
    }
  }
}

TEST(Zero1, PathsInTrace) {
  ToyModelConfig cfg = small_cfg();
  cfg.steps = 1;
  Topology topo = Topology::lassen_like(1);
  topo.gpus_per_node = 2;
  const auto layout = build_layout(2, 1, 1, topo);

  {
    Trainer3D t(cfg, layout, topo, scheme_no_compression(), ZeroMode::Replace);
    t.run();
    int rs = 0, ag = 0, ar = 0;
    for (const auto& e : t.clock().trace()) {
      rs += e.path == CommPath::Zero1ReduceScatter;
      ag += e.path == CommPath::Zero1AllGather;
      ar += e.path == CommPath::DpAllReduce;
    }
    EXPECT_EQ(rs, 1);
    EXPECT_EQ(ag, 1);
    EXPECT_EQ(ar, 0);
  }
  {
    Trainer3D t(cfg, layout, topo, scheme_no_compression(), ZeroMode::Redundant);
    t.run();
    int rs = 0, ag = 0, ar = 0;
    for (const auto& e : t.clock().trace()) {
      rs += e.path == CommPath::Zero1ReduceScatter;
      ag += e.path == CommPath::Zero1AllGather;
      ar += e.path == CommPath::DpAllReduce;
    }
    EXPECT_EQ(rs, 0);
    EXPECT_EQ(ag, 1);
    EXPECT_EQ(ar, 1);
  }
}

TEST(Zero1, SingleRankDegeneratesToLocalAdam) {
  ToyModelConfig cfg = small_cfg();
  cfg.steps = 3;
  cfg.batch_size = 8;
  Topology topo = Topology::lassen_like(1);
  topo.gpus_per_node = 1;
  const auto layout = build_layout(1, 1, 1, topo);
  Trainer3D t(cfg, layout, topo, scheme_no_compression(), ZeroMode::Replace);
  t.run();
  EXPECT_TRUE(t.clock().trace().empty());
}

TEST(EventCensus, Base3dStep) {
  // dp=2, pp=2, tp=2, 4 blocks (2 per stage), 2 microbatches, ZeRO off.
  ToyModelConfig cfg = small_cfg();
  cfg.steps = 1;
  std::vector<TraceEvent> trace;
  train(cfg, 2, 2, 2, scheme_no_compression(), ZeroMode::Off, 2, &trace);

  const int dp = 2, pp = 2, tp = 2, m = cfg.microbatches, blocks = cfg.num_blocks;
  int pp_events = 0, tp_events = 0, dp_events = 0, other = 0;
  for (const auto& e : trace) {
    switch (e.path) {
      case CommPath::PpP2p: ++pp_events; break;
      case CommPath::TpAllReduce: ++tp_events; break;
      case CommPath::DpAllReduce: ++dp_events; break;
      default: ++other; break;
    }
  }
  // One forward + one backward p2p per microbatch per stage boundary per
  // (d, t) pipeline chain.
  EXPECT_EQ(pp_events, dp * tp * m * (pp - 1) * 2);
  // One forward + one backward all-reduce per block per microbatch per
  // replica.
  EXPECT_EQ(tp_events, dp * blocks * m * 2);
  // One gradient all-reduce per DP group (one group per (p, t) pair).
  EXPECT_EQ(dp_events, pp * tp);
  EXPECT_EQ(other, 0);
}

TEST(GradientCompressionDiscipline, MzHybridQuantizesOnlyDpPath) {
  ToyModelConfig cfg = small_cfg();
  cfg.steps = 1;
  const auto scheme = scheme_mz_hybrid(8);
  std::vector<TraceEvent> trace;
  train(cfg, 2, 2, 2, scheme, ZeroMode::Off, 2, &trace);
  int lossy_events = 0;
  for (const auto& e : trace) {
    if (scheme.at(e.path).is_lossy()) {
      ++lossy_events;
      EXPECT_EQ(e.path, CommPath::DpAllReduce);
    }
  }
  // Each gradient element crosses exactly one lossy stage: its DP all-reduce.
  EXPECT_EQ(lossy_events, 4);  // one per (p, t) DP group
}

TEST(Metrics, SamplesPerSecondIdentity) {
  ToyModelConfig cfg = small_cfg();
  cfg.steps = 5;
  const auto met = train(cfg, 2, 2, 2, scheme_no_compression(), ZeroMode::Off, 2);
  ASSERT_GT(met.simulated_seconds, 0.0);
  EXPECT_DOUBLE_EQ(met.samples_per_sec,
                   static_cast<double>(met.steps_completed) * cfg.batch_size /
                       met.simulated_seconds);
  EXPECT_FALSE(met.diverged);
  EXPECT_EQ(met.steps_completed, cfg.steps);
  EXPECT_TRUE(std::isfinite(met.final_eval_loss));
}

TEST(Metrics, LossyWireBytesShrink) {
  ToyModelConfig cfg = small_cfg();
  cfg.steps = 2;
  const auto met = train(cfg, 2, 2, 2, scheme_z_hybrid(16, 8), ZeroMode::Off, 2);
  const auto& dp = met.bytes_by_path.at(CommPath::DpAllReduce);
  EXPECT_LT(dp.wire, dp.raw);
  const auto& tp = met.bytes_by_path.at(CommPath::TpAllReduce);
  EXPECT_LT(tp.wire, tp.raw);
}

TEST(Divergence, RecordedNotThrown) {
  ToyModelConfig cfg = small_cfg();
  cfg.steps = 20;
  cfg.learning_rate = 1.0e30f;  // guaranteed blow-up
  const auto met = train(cfg, 2, 1, 1, scheme_naive(CodecSpec::fixed_rate(8)),
                         ZeroMode::Off, 1);
  EXPECT_TRUE(met.diverged);
  EXPECT_LT(met.steps_completed, cfg.steps);
}

TEST(Determinism, IdenticalRunsBitEqual) {
  ToyModelConfig cfg = small_cfg();
  cfg.steps = 6;
  FullModel m1, m2;
  const auto a = train(cfg, 2, 2, 2, scheme_z_hybrid(16, 8), ZeroMode::Replace, 2,
                       nullptr, &m1);
  const auto b = train(cfg, 2, 2, 2, scheme_z_hybrid(16, 8), ZeroMode::Replace, 2,
                       nullptr, &m2);
  ASSERT_EQ(a.step_loss.size(), b.step_loss.size());
  for (std::size_t i = 0; i < a.step_loss.size(); ++i) {
    EXPECT_EQ(a.step_loss[i], b.step_loss[i]);
  }
  EXPECT_TRUE(models_bit_equal(m1, m2));
  EXPECT_DOUBLE_EQ(a.simulated_seconds, b.simulated_seconds);
}
