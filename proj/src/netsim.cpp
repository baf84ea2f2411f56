#include "hcc/netsim.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>

namespace hcc {

void Topology::validate() const {
  if (num_nodes < 1) throw ConfigError("topology.num_nodes", "must be >= 1");
  if (gpus_per_node < 1) throw ConfigError("topology.gpus_per_node", "must be >= 1");
  if (intra_bw <= 0) throw ConfigError("topology.intra_bw", "must be > 0");
  if (inter_bw <= 0) throw ConfigError("topology.inter_bw", "must be > 0");
  if (intra_lat <= 0) throw ConfigError("topology.intra_lat", "must be > 0");
  if (inter_lat <= 0) throw ConfigError("topology.inter_lat", "must be > 0");
  if (codec_bw <= 0) throw ConfigError("topology.codec_bw", "must be > 0");
  if (compute_flops <= 0) throw ConfigError("topology.compute_flops", "must be > 0");
}

Topology Topology::lassen_like(int num_nodes) {
  Topology t;
  t.num_nodes = num_nodes;
  t.gpus_per_node = 4;
  t.inter_bw = 12.5e9;   // 100 Gb/s EDR-class links
  t.intra_bw = 75.0e9;   // NVLink-class
  t.inter_lat = 5.0e-6;
  t.intra_lat = 2.0e-6;
  t.codec_bw = 400.0e9;  // on-device compression kernel throughput
  t.compute_flops = 7.0e12;
  return t;
}

Topology Topology::desk_2x2(int num_nodes) {
  Topology t;
  t.num_nodes = num_nodes;
  t.gpus_per_node = 2;
  t.inter_bw = 1.25e9;   // 10 GbE-class
  t.intra_bw = 16.0e9;   // PCIe-class
  t.inter_lat = 20.0e-6;
  t.intra_lat = 5.0e-6;
  t.codec_bw = 50.0e9;
  t.compute_flops = 1.0e12;
  return t;
}

Topology Topology::preset(const std::string& name, int num_nodes) {
  if (name == "lassen-like") return lassen_like(num_nodes);
  if (name == "desk-2x2") return desk_2x2(num_nodes);
  throw ConfigError("topology.preset", "unknown preset '" + name +
                                           "' (expected lassen-like | desk-2x2)");
}

LinkClass link_class(const Topology& topo, int a, int b) {
  assert(a >= 0 && a < topo.world_size() && b >= 0 && b < topo.world_size());
  if (a == b) return LinkClass::SelfLoop;
  return topo.node_of(a) == topo.node_of(b) ? LinkClass::IntraNode
                                            : LinkClass::InterNode;
}

double transfer_time(const Topology& topo, std::uint64_t bytes, LinkClass link) {
  switch (link) {
    case LinkClass::SelfLoop:
      return 0.0;
    case LinkClass::IntraNode:
      return topo.intra_lat + static_cast<double>(bytes) / topo.intra_bw;
    case LinkClass::InterNode:
      return topo.inter_lat + static_cast<double>(bytes) / topo.inter_bw;
  }
  return 0.0;
}

double codec_time(const Topology& topo, std::uint64_t raw_bytes, const CodecSpec& spec) {
  if (spec.kind == CodecKind::Identity) return 0.0;
  return static_cast<double>(raw_bytes) / topo.codec_bw;
}

double SimClock::max_time() const {
  return clock_.empty() ? 0.0 : *std::max_element(clock_.begin(), clock_.end());
}

void SimClock::advance(int rank, double dt) {
  assert(dt >= 0.0);
  clock_.at(rank) += dt;
}

void SimClock::sync_to_max(std::span<const int> ranks) {
  double t = 0.0;
  for (int r : ranks) t = std::max(t, clock_.at(r));
  for (int r : ranks) clock_.at(r) = t;
}

void SimClock::record(TraceEvent e) {
  e.step = step_;
  trace_.push_back(e);
}

void write_trace_csv(std::ostream& os, const std::vector<TraceEvent>& trace) {
  os << "step,path,collective,comm_size,raw_bytes,wire_bytes,duration_s\n";
  char buf[64];
  for (const auto& e : trace) {
    std::snprintf(buf, sizeof(buf), "%.9e", e.duration_s);
    os << e.step << ',' << to_string(e.path) << ',' << to_string(e.collective)
       << ',' << e.comm_size << ',' << e.raw_bytes << ',' << e.wire_bytes << ','
       << buf << '\n';
  }
}

}  // namespace hcc
