#ifndef HCC_TOYMODEL_HPP
#define HCC_TOYMODEL_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "hcc/collectives.hpp"
#include "hcc/netsim.hpp"
#include "hcc/parallel3d.hpp"

namespace hcc {

// Deterministic seed derivation (splitmix64 mix of seed and stream tag).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

struct ToyModelConfig {
  int num_blocks = 4;
  int hidden_dim = 64;
  int input_dim = 32;  // model width: every block maps width -> width
  int batch_size = 16;
  int microbatches = 2;
  int steps = 100;
  std::uint64_t seed = 1;
  float learning_rate = 1.0e-3f;
  float adam_beta1 = 0.9f;
  float adam_beta2 = 0.95f;
  float adam_epsilon = 1.0e-8f;
  int eval_batch_size = 64;

  // Divisibility invariants against a layout; throws ConfigError.
  void validate(const ParallelLayout& layout) const;
};

// How the optimizer phase communicates within each DP group:
//  Off:       all-reduce averaged gradients, every rank runs full Adam.
//  Replace:   reduce-scatter gradients, Adam on the local optimizer-state
//             shard, all-gather updated parameters.
//  Redundant: all-reduce averaged gradients (kept alongside sharding), Adam
//             on the local shard, all-gather updated parameters.
enum class ZeroMode { Off, Replace, Redundant };

ZeroMode zero_mode_from_string(const std::string& s);  // throws ConfigError
const char* to_string(ZeroMode m);

// A stack of width->hidden->width tanh MLP blocks with full (unsharded)
// weights; used for initialization, the fixed teacher, and evaluation.
struct FullModel {
  int num_blocks = 0;
  int width = 0;
  int hidden = 0;
  std::vector<float> w1;  // num_blocks * hidden * width, row-major per block
  std::vector<float> w2;  // num_blocks * width * hidden, row-major per block

  const float* w1_block(int b) const { return w1.data() + static_cast<std::size_t>(b) * hidden * width; }
  const float* w2_block(int b) const { return w2.data() + static_cast<std::size_t>(b) * width * hidden; }
};

FullModel init_model(int num_blocks, int width, int hidden, std::uint64_t seed);

// The task definition: a fixed random teacher network and the student's
// initial weights, both derived deterministically from cfg.seed.
FullModel make_teacher(const ToyModelConfig& cfg);
FullModel make_student_init(const ToyModelConfig& cfg);

// Plain serial forward pass, batch x width in / out.
std::vector<float> model_forward(const FullModel& model, const std::vector<float>& x,
                                 int batch);

// Row-major [batch x dim] inputs in [-1, 1), deterministic per (seed, step).
std::vector<float> gen_step_batch(std::uint64_t seed, int step, int batch, int dim);
std::vector<float> gen_eval_batch(std::uint64_t seed, int batch, int dim);

struct PathBytes {
  std::uint64_t raw = 0;
  std::uint64_t wire = 0;
};

struct RunMetrics {
  std::vector<float> step_loss;
  float final_eval_loss = 0.0f;
  double simulated_seconds = 0.0;
  double samples_per_sec = 0.0;
  bool diverged = false;
  int steps_completed = 0;
  std::map<CommPath, PathBytes> bytes_by_path;
};

// Single-threaded deterministic driver for one 3D-parallel training run. It
// owns the per-rank parameter shards, optimizer state, and the SimClock.
//
// Numeric contract (mirrored by the test oracles):
//  - matmuls accumulate k in ascending order (see linalg.hpp);
//  - microbatch losses average in forward order, gradients accumulate in
//    reverse microbatch order (the backward schedule) and divide by the
//    microbatch count once;
//  - flat parameter order per rank: local blocks in stage order, w1 slice
//    then w2 slice, row-major;
//  - DP flat buffers are zero-padded to a multiple of dp before any
//    collective, and gradient averaging divides by dp after the collective
//    sum, in full precision.
class Trainer3D {
 public:
  Trainer3D(const ToyModelConfig& cfg, const ParallelLayout& layout,
            const Topology& topo, const SchemeTable& scheme, ZeroMode zero);

  // Runs one step; returns the step loss (mean over replicas/microbatches).
  // Throws NonFiniteInputError if a lossy path sees non-finite data.
  float step();

  // Full training run plus final evaluation; divergence is recorded, not
  // thrown.
  RunMetrics run();

  const SimClock& clock() const { return clock_; }
  const ParallelLayout& layout() const { return layout_; }

  // Reassembles replica d's parameters into an unsharded model.
  FullModel assemble_replica(int d) const;

 private:
  struct BlockActs {
    std::vector<float> x;  // microbatch x width input to the block
    std::vector<float> a;  // microbatch x local hidden, tanh output
  };

  void forward_block(int rank, int local_block, const std::vector<float>& x,
                     std::vector<float>& y, BlockActs& acts, int rows);
  void backward_block(int rank, int local_block, const BlockActs& acts,
                      const std::vector<float>& dy, std::vector<float>& dx, int rows);
  void optimizer_phase();
  void adam_shard(int rank, const float* grad, std::size_t offset, std::size_t count);

  float* w1_of(int rank, int local_block);
  float* w2_of(int rank, int local_block);
  const float* w1_of(int rank, int local_block) const;
  const float* w2_of(int rank, int local_block) const;

  ToyModelConfig cfg_;
  ParallelLayout layout_;
  SchemeTable scheme_;
  ZeroMode zero_;
  SimClock clock_;
  FullModel teacher_;

  int hs_;                // hidden columns per TP rank
  int blocks_per_stage_;
  int mb_rows_;           // microbatch rows per replica
  std::size_t local_params_;
  std::size_t padded_params_;
  int step_index_ = 0;

  std::vector<std::vector<float>> flat_;    // per-rank parameters
  std::vector<std::vector<float>> grad_;    // per-rank flat gradients
  std::vector<std::vector<float>> adam_m_;  // full length (Off) or dp shard
  std::vector<std::vector<float>> adam_v_;
};

// Convenience wrapper: build a trainer and run it.
RunMetrics run_experiment(const ToyModelConfig& cfg, const ParallelLayout& layout,
                          const Topology& topo, const SchemeTable& scheme,
                          ZeroMode zero, std::vector<TraceEvent>* trace_out = nullptr);

}  // namespace hcc

#endif
