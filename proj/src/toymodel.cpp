#include "hcc/toymodel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "hcc/linalg.hpp"
#include "hcc/rng.hpp"

namespace hcc {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {
constexpr std::uint64_t kStudentStream = 5;
constexpr std::uint64_t kTeacherStream = 7;
constexpr std::uint64_t kEvalStream = 0xEEEE;
constexpr std::uint64_t kBatchStreamBase = 0x100000000ULL;
}  // namespace

void ToyModelConfig::validate(const ParallelLayout& layout) const {
  if (num_blocks < 1) throw ConfigError("model.num_blocks", "must be >= 1");
  if (hidden_dim < 1) throw ConfigError("model.hidden_dim", "must be >= 1");
  if (input_dim < 1) throw ConfigError("model.input_dim", "must be >= 1");
  if (batch_size < 1) throw ConfigError("model.batch_size", "must be >= 1");
  if (microbatches < 1) throw ConfigError("model.microbatches", "must be >= 1");
  if (steps < 0) throw ConfigError("model.steps", "must be >= 0");
  if (eval_batch_size < 1) throw ConfigError("model.eval_batch_size", "must be >= 1");
  if (hidden_dim % layout.tp != 0) {
    throw ConfigError("model.hidden_dim", "must be divisible by tp");
  }
  if (input_dim % layout.tp != 0) {
    throw ConfigError("model.input_dim", "must be divisible by tp");
  }
  if (num_blocks % layout.pp != 0) {
    throw ConfigError("model.num_blocks", "must be divisible by pp");
  }
  if (batch_size % (layout.dp * microbatches) != 0) {
    throw ConfigError("model.batch_size", "must be divisible by dp * microbatches");
  }
}

ZeroMode zero_mode_from_string(const std::string& s) {
  if (s == "off") return ZeroMode::Off;
  if (s == "replace") return ZeroMode::Replace;
  if (s == "redundant") return ZeroMode::Redundant;
  throw ConfigError("layout.zero1", "unknown mode '" + s +
                                        "' (expected off | replace | redundant)");
}

const char* to_string(ZeroMode m) {
  switch (m) {
    case ZeroMode::Off: return "off";
    case ZeroMode::Replace: return "replace";
    case ZeroMode::Redundant: return "redundant";
  }
  return "unknown";
}

FullModel init_model(int num_blocks, int width, int hidden, std::uint64_t seed) {
  FullModel model;
  model.num_blocks = num_blocks;
  model.width = width;
  model.hidden = hidden;
  model.w1.resize(static_cast<std::size_t>(num_blocks) * hidden * width);
  model.w2.resize(static_cast<std::size_t>(num_blocks) * width * hidden);
  Rng rng(seed);
  const float s1 = 1.0f / std::sqrt(static_cast<float>(width));
  const float s2 = 1.0f / std::sqrt(static_cast<float>(hidden));
  for (int b = 0; b < num_blocks; ++b) {
    float* w1 = model.w1.data() + static_cast<std::size_t>(b) * hidden * width;
    float* w2 = model.w2.data() + static_cast<std::size_t>(b) * width * hidden;
    for (int i = 0; i < hidden * width; ++i) w1[i] = rng.uniform(-s1, s1);
    for (int i = 0; i < width * hidden; ++i) w2[i] = rng.uniform(-s2, s2);
  }
  return model;
}

FullModel make_teacher(const ToyModelConfig& cfg) {
  return init_model(cfg.num_blocks, cfg.input_dim, cfg.hidden_dim,
                    mix_seed(cfg.seed, kTeacherStream));
}

FullModel make_student_init(const ToyModelConfig& cfg) {
  return init_model(cfg.num_blocks, cfg.input_dim, cfg.hidden_dim,
                    mix_seed(cfg.seed, kStudentStream));
}

std::vector<float> model_forward(const FullModel& model, const std::vector<float>& x,
                                 int batch) {
  assert(static_cast<int>(x.size()) == batch * model.width);
  std::vector<float> cur = x;
  std::vector<float> h(static_cast<std::size_t>(batch) * model.hidden);
  std::vector<float> next(static_cast<std::size_t>(batch) * model.width);
  for (int b = 0; b < model.num_blocks; ++b) {
    serial::mm_nt(cur.data(), model.w1_block(b), h.data(), batch, model.width,
                  model.hidden);
    for (auto& v : h) v = std::tanh(v);
    serial::mm_nt(h.data(), model.w2_block(b), next.data(), batch, model.hidden,
                  model.width);
    cur = next;
  }
  return cur;
}

std::vector<float> gen_step_batch(std::uint64_t seed, int step, int batch, int dim) {
  Rng rng(mix_seed(seed, kBatchStreamBase + static_cast<std::uint64_t>(step)));
  std::vector<float> x(static_cast<std::size_t>(batch) * dim);
  for (auto& v : x) v = rng.uniform(-1.0f, 1.0f);
  return x;
}

std::vector<float> gen_eval_batch(std::uint64_t seed, int batch, int dim) {
  Rng rng(mix_seed(seed, kEvalStream));
  std::vector<float> x(static_cast<std::size_t>(batch) * dim);
  for (auto& v : x) v = rng.uniform(-1.0f, 1.0f);
  return x;
}

Trainer3D::Trainer3D(const ToyModelConfig& cfg, const ParallelLayout& layout,
                     const Topology& topo, const SchemeTable& scheme, ZeroMode zero)
    : cfg_(cfg), layout_(layout), scheme_(scheme), zero_(zero), clock_(topo) {
  topo.validate();
  if (layout.world() != topo.world_size()) {
    throw BadLayoutError("layout world does not match topology world");
  }
  cfg.validate(layout);

  hs_ = cfg.hidden_dim / layout.tp;
  blocks_per_stage_ = cfg.num_blocks / layout.pp;
  mb_rows_ = cfg.batch_size / (layout.dp * cfg.microbatches);
  local_params_ = static_cast<std::size_t>(blocks_per_stage_) * 2 *
                  static_cast<std::size_t>(cfg.input_dim) * hs_;
  padded_params_ =
      (local_params_ + layout.dp - 1) / layout.dp * static_cast<std::size_t>(layout.dp);

  teacher_ = make_teacher(cfg);
  const FullModel student = make_student_init(cfg);

  const int world = layout.world();
  flat_.assign(world, std::vector<float>(local_params_));
  grad_.assign(world, std::vector<float>(local_params_));
  const std::size_t moment_len =
      (zero_ == ZeroMode::Off) ? local_params_ : padded_params_ / layout.dp;
  adam_m_.assign(world, std::vector<float>(moment_len, 0.0f));
  adam_v_.assign(world, std::vector<float>(moment_len, 0.0f));

  const int D = cfg.input_dim;
  for (int d = 0; d < layout.dp; ++d) {
    for (int p = 0; p < layout.pp; ++p) {
      for (int t = 0; t < layout.tp; ++t) {
        const int r = layout.rank_of(d, p, t);
        for (int lb = 0; lb < blocks_per_stage_; ++lb) {
          const int g = p * blocks_per_stage_ + lb;
          // w1 slice: rows [t*hs, (t+1)*hs) of the full hidden x width matrix
          const float* w1full = student.w1_block(g);
          std::copy(w1full + static_cast<std::size_t>(t) * hs_ * D,
                    w1full + static_cast<std::size_t>(t + 1) * hs_ * D, w1_of(r, lb));
          // w2 slice: columns [t*hs, (t+1)*hs) of the full width x hidden matrix
          const float* w2full = student.w2_block(g);
          float* w2s = w2_of(r, lb);
          for (int i = 0; i < D; ++i) {
            std::copy(w2full + static_cast<std::size_t>(i) * cfg.hidden_dim + t * hs_,
                      w2full + static_cast<std::size_t>(i) * cfg.hidden_dim +
                          (t + 1) * hs_,
                      w2s + static_cast<std::size_t>(i) * hs_);
          }
        }
      }
    }
  }
}

float* Trainer3D::w1_of(int rank, int lb) {
  return flat_[rank].data() +
         static_cast<std::size_t>(lb) * 2 * cfg_.input_dim * hs_;
}
float* Trainer3D::w2_of(int rank, int lb) {
  return w1_of(rank, lb) + static_cast<std::size_t>(hs_) * cfg_.input_dim;
}
const float* Trainer3D::w1_of(int rank, int lb) const {
  return flat_[rank].data() +
         static_cast<std::size_t>(lb) * 2 * cfg_.input_dim * hs_;
}
const float* Trainer3D::w2_of(int rank, int lb) const {
  return w1_of(rank, lb) + static_cast<std::size_t>(hs_) * cfg_.input_dim;
}

void Trainer3D::forward_block(int rank, int lb, const std::vector<float>& x,
                              std::vector<float>& y, BlockActs& acts, int rows) {
  const int D = cfg_.input_dim;
  acts.x = x;
  std::vector<float> h(static_cast<std::size_t>(rows) * hs_);
  mm_nt(x.data(), w1_of(rank, lb), h.data(), rows, D, hs_);
  acts.a.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) acts.a[i] = std::tanh(h[i]);
  y.assign(static_cast<std::size_t>(rows) * D, 0.0f);
  mm_nt(acts.a.data(), w2_of(rank, lb), y.data(), rows, hs_, D);
  clock_.advance(rank, (matmul_flops(rows, D, hs_) + matmul_flops(rows, hs_, D)) /
                           clock_.topology().compute_flops);
}

void Trainer3D::backward_block(int rank, int lb, const BlockActs& acts,
                               const std::vector<float>& dy, std::vector<float>& dx,
                               int rows) {
  const int D = cfg_.input_dim;
  const float* w1 = w1_of(rank, lb);
  const float* w2 = w2_of(rank, lb);

  std::vector<float> da(static_cast<std::size_t>(rows) * hs_);
  mm_nn(dy.data(), w2, da.data(), rows, D, hs_);
  std::vector<float> dh(da.size());
  for (std::size_t i = 0; i < da.size(); ++i) {
    dh[i] = da[i] * (1.0f - acts.a[i] * acts.a[i]);
  }

  std::vector<float> dw2(static_cast<std::size_t>(D) * hs_);
  mm_tn(dy.data(), acts.a.data(), dw2.data(), D, rows, hs_);
  std::vector<float> dw1(static_cast<std::size_t>(hs_) * D);
  mm_tn(dh.data(), acts.x.data(), dw1.data(), hs_, rows, D);
  dx.assign(static_cast<std::size_t>(rows) * D, 0.0f);
  mm_nn(dh.data(), w1, dx.data(), rows, hs_, D);

  float* g = grad_[rank].data() + static_cast<std::size_t>(lb) * 2 * D * hs_;
  for (std::size_t i = 0; i < dw1.size(); ++i) g[i] = g[i] + dw1[i];
  float* g2 = g + static_cast<std::size_t>(hs_) * D;
  for (std::size_t i = 0; i < dw2.size(); ++i) g2[i] = g2[i] + dw2[i];

  clock_.advance(rank, (2.0 * matmul_flops(rows, D, hs_) +
                        2.0 * matmul_flops(rows, hs_, D)) /
                           clock_.topology().compute_flops);
}

float Trainer3D::step() {
  const int dp = layout_.dp, pp = layout_.pp, tp = layout_.tp;
  const int m = cfg_.microbatches;
  const int B = mb_rows_;
  const int D = cfg_.input_dim;
  const int world = layout_.world();

  clock_.set_step(step_index_);

  // Deterministic batch: replica d takes rows [d*rows_per_replica, ...),
  // microbatch mu the next B rows within that slice.
  const auto full_x = gen_step_batch(cfg_.seed, step_index_, cfg_.batch_size, D);
  const int rows_per_replica = cfg_.batch_size / dp;
  std::vector<std::vector<std::vector<float>>> xin(dp), target(dp);
  for (int d = 0; d < dp; ++d) {
    xin[d].resize(m);
    target[d].resize(m);
    for (int mu = 0; mu < m; ++mu) {
      const std::size_t row0 = static_cast<std::size_t>(d) * rows_per_replica +
                               static_cast<std::size_t>(mu) * B;
      xin[d][mu].assign(full_x.begin() + row0 * D, full_x.begin() + (row0 + B) * D);
      target[d][mu] = model_forward(teacher_, xin[d][mu], B);
    }
  }

  std::vector<std::vector<std::vector<BlockActs>>> acts(
      world, std::vector<std::vector<BlockActs>>(
                 m, std::vector<BlockActs>(blocks_per_stage_)));
  // pending_fwd[d][t][mu]: activation received from the previous stage.
  std::vector<std::vector<std::vector<std::vector<float>>>> pending_fwd(
      dp, std::vector<std::vector<std::vector<float>>>(
              tp, std::vector<std::vector<float>>(m)));
  auto pending_bwd = pending_fwd;
  std::vector<std::vector<std::vector<float>>> y_final(
      dp, std::vector<std::vector<float>>(m));

  // ---- forward (GPipe: all microbatch forwards first) ----
  for (int mu = 0; mu < m; ++mu) {
    for (int s = 0; s < pp; ++s) {
      for (int d = 0; d < dp; ++d) {
        Communicator tpcomm{layout_.tp_group(layout_.rank_of(d, s, 0))};
        std::vector<std::vector<float>> cur(tp);
        for (int t = 0; t < tp; ++t) {
          cur[t] = (s == 0) ? xin[d][mu] : std::move(pending_fwd[d][t][mu]);
        }
        for (int lb = 0; lb < blocks_per_stage_; ++lb) {
          std::vector<FloatBuffer> ypart(tp);
          for (int t = 0; t < tp; ++t) {
            const int r = layout_.rank_of(d, s, t);
            forward_block(r, lb, cur[t], ypart[t], acts[r][mu][lb], B);
          }
          auto outs = allreduce(clock_, tpcomm, ypart, scheme_.at(CommPath::TpAllReduce),
                                CommPath::TpAllReduce, ReduceMode::Sum);
          for (int t = 0; t < tp; ++t) cur[t] = std::move(outs[t]);
        }
        if (s < pp - 1) {
          for (int t = 0; t < tp; ++t) {
            pending_fwd[d][t][mu] =
                p2p(clock_, layout_.rank_of(d, s, t), layout_.rank_of(d, s + 1, t),
                    cur[t], scheme_.at(CommPath::PpP2p), CommPath::PpP2p);
          }
        } else {
          y_final[d][mu] = std::move(cur[0]);
        }
      }
    }
  }

  // ---- loss (forward microbatch order) ----
  const float loss_scale = 1.0f / static_cast<float>(B * D);
  float step_loss = 0.0f;
  for (int d = 0; d < dp; ++d) {
    float acc = 0.0f;
    for (int mu = 0; mu < m; ++mu) {
      float l = 0.0f;
      const auto& y = y_final[d][mu];
      const auto& tgt = target[d][mu];
      for (std::size_t i = 0; i < y.size(); ++i) {
        const float diff = y[i] - tgt[i];
        l += diff * diff;
      }
      acc += l * loss_scale;
    }
    step_loss += acc / static_cast<float>(m);
  }
  step_loss /= static_cast<float>(dp);

  // ---- backward (reverse microbatch order) ----
  for (auto& g : grad_) std::fill(g.begin(), g.end(), 0.0f);
  const float dy_scale = 2.0f / static_cast<float>(B * D);
  for (int mu = m - 1; mu >= 0; --mu) {
    for (int s = pp - 1; s >= 0; --s) {
      for (int d = 0; d < dp; ++d) {
        Communicator tpcomm{layout_.tp_group(layout_.rank_of(d, s, 0))};
        std::vector<std::vector<float>> dy(tp);
        if (s == pp - 1) {
          std::vector<float> dl(static_cast<std::size_t>(B) * D);
          const auto& y = y_final[d][mu];
          const auto& tgt = target[d][mu];
          for (std::size_t i = 0; i < dl.size(); ++i) {
            dl[i] = dy_scale * (y[i] - tgt[i]);
          }
          for (int t = 0; t < tp; ++t) dy[t] = dl;
        } else {
          for (int t = 0; t < tp; ++t) dy[t] = std::move(pending_bwd[d][t][mu]);
        }
        for (int lb = blocks_per_stage_ - 1; lb >= 0; --lb) {
          std::vector<FloatBuffer> dxpart(tp);
          for (int t = 0; t < tp; ++t) {
            const int r = layout_.rank_of(d, s, t);
            backward_block(r, lb, acts[r][mu][lb], dy[t], dxpart[t], B);
          }
          auto outs = allreduce(clock_, tpcomm, dxpart, scheme_.at(CommPath::TpAllReduce),
                                CommPath::TpAllReduce, ReduceMode::Sum);
          for (int t = 0; t < tp; ++t) dy[t] = std::move(outs[t]);
        }
        if (s > 0) {
          for (int t = 0; t < tp; ++t) {
            pending_bwd[d][t][mu] =
                p2p(clock_, layout_.rank_of(d, s, t), layout_.rank_of(d, s - 1, t),
                    dy[t], scheme_.at(CommPath::PpP2p), CommPath::PpP2p);
          }
        }
      }
    }
  }
  const float inv_m = 1.0f / static_cast<float>(m);
  for (auto& g : grad_) {
    for (auto& v : g) v = v * inv_m;
  }

  optimizer_phase();
  ++step_index_;
  return step_loss;
}

void Trainer3D::adam_shard(int rank, const float* grad, std::size_t offset,
                           std::size_t count) {
  // offset indexes the (padded) flat parameter space; moments are stored
  // shard-local starting at 0.
  const float b1 = cfg_.adam_beta1;
  const float b2 = cfg_.adam_beta2;
  const float lr = cfg_.learning_rate;
  const float eps = cfg_.adam_epsilon;
  const int t = step_index_ + 1;
  const float c1 = static_cast<float>(1.0 - std::pow(static_cast<double>(b1), t));
  const float c2 = static_cast<float>(1.0 - std::pow(static_cast<double>(b2), t));
  float* m = adam_m_[rank].data();
  float* v = adam_v_[rank].data();
  float* w = flat_[rank].data();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t wi = offset + i;
    if (wi >= local_params_) break;  // padding tail carries no parameters
    const float g = grad[i];
    m[i] = b1 * m[i] + (1.0f - b1) * g;
    v[i] = b2 * v[i] + (1.0f - b2) * g * g;
    const float mhat = m[i] / c1;
    const float vhat = v[i] / c2;
    w[wi] = w[wi] - lr * mhat / (std::sqrt(vhat) + eps);
  }
}

void Trainer3D::optimizer_phase() {
  const int dp = layout_.dp;
  const std::size_t shard = padded_params_ / dp;

  for (int p = 0; p < layout_.pp; ++p) {
    for (int t = 0; t < layout_.tp; ++t) {
      Communicator comm;
      for (int d = 0; d < dp; ++d) comm.ranks.push_back(layout_.rank_of(d, p, t));

      std::vector<FloatBuffer> gpad(dp, FloatBuffer(padded_params_, 0.0f));
      for (int d = 0; d < dp; ++d) {
        const auto& g = grad_[comm.ranks[d]];
        std::copy(g.begin(), g.end(), gpad[d].begin());
      }

      if (zero_ == ZeroMode::Off) {
        auto avg = allreduce(clock_, comm, gpad, scheme_.at(CommPath::DpAllReduce),
                             CommPath::DpAllReduce, ReduceMode::Average);
        for (int d = 0; d < dp; ++d) {
          adam_shard(comm.ranks[d], avg[d].data(), 0, local_params_);
        }
        continue;
      }

      // ZeRO-1: each rank owns the optimizer-state shard matching its dp
      // coordinate and updates only that parameter slice.
      std::vector<FloatBuffer> grad_shards(dp);
      if (zero_ == ZeroMode::Replace) {
        grad_shards = ring_reduce_scatter(clock_, comm, gpad,
                                          scheme_.at(CommPath::Zero1ReduceScatter),
                                          CommPath::Zero1ReduceScatter);
        const float scale = static_cast<float>(dp);
        for (auto& s : grad_shards) {
          for (auto& v : s) v = v / scale;
        }
      } else {  // Redundant: full all-reduce retained next to the sharded update
        auto avg = allreduce(clock_, comm, gpad, scheme_.at(CommPath::DpAllReduce),
                             CommPath::DpAllReduce, ReduceMode::Average);
        for (int d = 0; d < dp; ++d) {
          grad_shards[d].assign(avg[d].begin() + static_cast<std::ptrdiff_t>(d * shard),
                                avg[d].begin() + static_cast<std::ptrdiff_t>((d + 1) * shard));
        }
      }

      std::vector<FloatBuffer> updated(dp);
      for (int d = 0; d < dp; ++d) {
        const int r = comm.ranks[d];
        adam_shard(r, grad_shards[d].data(), d * shard, shard);
        updated[d].assign(shard, 0.0f);
        const std::size_t begin = d * shard;
        for (std::size_t i = 0; i < shard; ++i) {
          const std::size_t wi = begin + i;
          updated[d][i] = (wi < local_params_) ? flat_[r][wi] : 0.0f;
        }
      }

      auto gathered = ring_allgather(clock_, comm, updated,
                                     scheme_.at(CommPath::Zero1AllGather),
                                     CommPath::Zero1AllGather);
      for (int d = 0; d < dp; ++d) {
        std::copy(gathered[d].begin(),
                  gathered[d].begin() + static_cast<std::ptrdiff_t>(local_params_),
                  flat_[comm.ranks[d]].begin());
      }
    }
  }
}

RunMetrics Trainer3D::run() {
  RunMetrics met;
  for (int s = 0; s < cfg_.steps; ++s) {
    float loss;
    try {
      loss = step();
    } catch (const NonFiniteInputError&) {
      met.diverged = true;
      break;
    }
    met.step_loss.push_back(loss);
    ++met.steps_completed;
    if (!std::isfinite(loss)) {
      met.diverged = true;
      break;
    }
  }

  met.simulated_seconds = clock_.max_time();
  met.samples_per_sec =
      met.simulated_seconds > 0.0
          ? static_cast<double>(met.steps_completed) * cfg_.batch_size /
                met.simulated_seconds
          : 0.0;

  const FullModel student = assemble_replica(0);
  const auto eval_x = gen_eval_batch(cfg_.seed, cfg_.eval_batch_size, cfg_.input_dim);
  const auto want = model_forward(teacher_, eval_x, cfg_.eval_batch_size);
  const auto got = model_forward(student, eval_x, cfg_.eval_batch_size);
  float l = 0.0f;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const float diff = got[i] - want[i];
    l += diff * diff;
  }
  met.final_eval_loss = l / static_cast<float>(got.size());
  if (!std::isfinite(met.final_eval_loss)) met.diverged = true;

  for (const auto& e : clock_.trace()) {
    met.bytes_by_path[e.path].raw += e.raw_bytes;
    met.bytes_by_path[e.path].wire += e.wire_bytes;
  }
  return met;
}

FullModel Trainer3D::assemble_replica(int d) const {
  FullModel out;
  out.num_blocks = cfg_.num_blocks;
  out.width = cfg_.input_dim;
  out.hidden = cfg_.hidden_dim;
  out.w1.resize(static_cast<std::size_t>(cfg_.num_blocks) * cfg_.hidden_dim *
                cfg_.input_dim);
  out.w2.resize(static_cast<std::size_t>(cfg_.num_blocks) * cfg_.input_dim *
                cfg_.hidden_dim);
  const int D = cfg_.input_dim;
  for (int p = 0; p < layout_.pp; ++p) {
    for (int t = 0; t < layout_.tp; ++t) {
      const int r = layout_.rank_of(d, p, t);
      for (int lb = 0; lb < blocks_per_stage_; ++lb) {
        const int g = p * blocks_per_stage_ + lb;
        float* w1full = out.w1.data() +
                        static_cast<std::size_t>(g) * cfg_.hidden_dim * D;
        std::copy(w1_of(r, lb), w1_of(r, lb) + static_cast<std::size_t>(hs_) * D,
                  w1full + static_cast<std::size_t>(t) * hs_ * D);
        float* w2full = out.w2.data() +
                        static_cast<std::size_t>(g) * D * cfg_.hidden_dim;
        const float* w2s = w2_of(r, lb);
        for (int i = 0; i < D; ++i) {
          std::copy(w2s + static_cast<std::size_t>(i) * hs_,
                    w2s + static_cast<std::size_t>(i + 1) * hs_,
                    w2full + static_cast<std::size_t>(i) * cfg_.hidden_dim + t * hs_);
        }
      }
    }
  }
  return out;
}

RunMetrics run_experiment(const ToyModelConfig& cfg, const ParallelLayout& layout,
                          const Topology& topo, const SchemeTable& scheme,
                          ZeroMode zero, std::vector<TraceEvent>* trace_out) {
  Trainer3D trainer(cfg, layout, topo, scheme, zero);
  RunMetrics met = trainer.run();
  if (trace_out) *trace_out = trainer.clock().trace();
  return met;
}

}  // namespace hcc
