#ifndef HCC_NETSIM_HPP
#define HCC_NETSIM_HPP

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hcc/codec.hpp"
#include "hcc/comm_path.hpp"
#include "hcc/errors.hpp"

namespace hcc {

// Two-level cluster shape plus alpha-beta link parameters and codec/compute
// throughputs. Ranks 0..world-1 map onto nodes in order: node(r) = r / gpus.
struct Topology {
  int num_nodes = 1;
  int gpus_per_node = 1;
  double intra_bw = 0;       // bytes/sec within a node
  double inter_bw = 0;       // bytes/sec across nodes
  double intra_lat = 0;      // sec
  double inter_lat = 0;      // sec
  double codec_bw = 0;       // bytes/sec, charged per compress and decompress
  double compute_flops = 0;  // flop/sec per rank

  int world_size() const { return num_nodes * gpus_per_node; }
  int node_of(int rank) const { return rank / gpus_per_node; }
  void validate() const;  // throws ConfigError on nonpositive rates/counts

  // Built-in presets. "lassen-like": 4 GPUs/node, 100 Gb/s inter-node links,
  // NVLink-class intra-node links. "desk-2x2": a small 2-GPU-per-node shape
  // for quick local experiments.
  static Topology lassen_like(int num_nodes = 2);
  static Topology desk_2x2(int num_nodes = 2);
  static Topology preset(const std::string& name, int num_nodes);
};

enum class LinkClass { SelfLoop, IntraNode, InterNode };

LinkClass link_class(const Topology& topo, int a, int b);

// SelfLoop -> 0; otherwise latency + bytes / bandwidth of the link class.
double transfer_time(const Topology& topo, std::uint64_t bytes, LinkClass link);

// Identity -> 0; otherwise raw_bytes / codec_bw. Charged once for compress
// and once for decompress on every hop.
double codec_time(const Topology& topo, std::uint64_t raw_bytes, const CodecSpec& spec);

enum class CollectiveKind { AllReduce, AllGather, ReduceScatter, P2P };

inline const char* to_string(CollectiveKind c) {
  switch (c) {
    case CollectiveKind::AllReduce: return "AllReduce";
    case CollectiveKind::AllGather: return "AllGather";
    case CollectiveKind::ReduceScatter: return "ReduceScatter";
    case CollectiveKind::P2P: return "P2P";
  }
  return "unknown";
}

// One communication step's accounting. raw_bytes / wire_bytes are per-rank
// sent bytes (the group total divided by the participant count; exact for
// size-uniform codecs, floor-averaged for the data-dependent lossless one).
struct TraceEvent {
  int step = 0;
  CommPath path = CommPath::DpAllReduce;
  CollectiveKind collective = CollectiveKind::AllReduce;
  int comm_size = 0;
  std::uint64_t raw_bytes = 0;
  std::uint64_t wire_bytes = 0;
  double duration_s = 0;
  int round_count = 0;
};

// Per-rank simulated clocks plus the global event log. Single-owner mutable
// state: one SimClock per simulation, driven by one thread.
class SimClock {
 public:
  explicit SimClock(const Topology& topo)
      : topo_(topo), clock_(topo.world_size(), 0.0) {}

  const Topology& topology() const { return topo_; }
  double time(int rank) const { return clock_.at(rank); }
  double max_time() const;

  void advance(int rank, double dt);          // dt must be >= 0
  void sync_to_max(std::span<const int> ranks);

  void set_step(int step) { step_ = step; }
  int step() const { return step_; }
  void record(TraceEvent e);
  const std::vector<TraceEvent>& trace() const { return trace_; }

 private:
  Topology topo_;
  std::vector<double> clock_;
  std::vector<TraceEvent> trace_;
  int step_ = 0;
};

// CSV with header: step,path,collective,comm_size,raw_bytes,wire_bytes,duration_s
void write_trace_csv(std::ostream& os, const std::vector<TraceEvent>& trace);

}  // namespace hcc

#endif
