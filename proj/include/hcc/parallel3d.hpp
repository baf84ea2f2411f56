#ifndef HCC_PARALLEL3D_HPP
#define HCC_PARALLEL3D_HPP

#include <map>
#include <string>
#include <vector>

#include "hcc/codec.hpp"
#include "hcc/comm_path.hpp"
#include "hcc/netsim.hpp"

namespace hcc {

// Rank placement for dp x pp x tp parallelism. TP is innermost so that a TP
// group occupies contiguous ranks (and therefore one node whenever
// tp <= gpus_per_node), then PP, then DP:
//   rank = d * (pp * tp) + p * tp + t
struct ParallelLayout {
  int dp = 1;
  int pp = 1;
  int tp = 1;

  int world() const { return dp * pp * tp; }

  int rank_of(int d, int p, int t) const { return d * (pp * tp) + p * tp + t; }

  struct Coord {
    int d, p, t;
  };
  Coord coord_of(int rank) const {
    return {rank / (pp * tp), (rank / tp) % pp, rank % tp};
  }

  // Ranks sharing this rank's (p, t), ordered by d. DP groups partition the
  // world; gradients are averaged within them.
  std::vector<int> dp_group(int rank) const;

  // Ranks sharing this rank's (d, p), ordered by t.
  std::vector<int> tp_group(int rank) const;

  // Ranks sharing this rank's (d, t), ordered by pipeline stage p.
  std::vector<int> pp_chain(int rank) const;
};

// Validates dp*pp*tp == topology world size. Throws BadLayoutError.
ParallelLayout build_layout(int dp, int pp, int tp, const Topology& topo);

// Total map from every communication path to the codec it passes through.
struct SchemeTable {
  std::string name;
  std::map<CommPath, CodecSpec> paths;

  const CodecSpec& at(CommPath p) const { return paths.at(p); }
};

// Baseline: no compression anywhere.
SchemeTable scheme_no_compression();

// The same codec forced onto every path.
SchemeTable scheme_naive(const CodecSpec& spec);

// Lossless predictor for every model-parallel and ZeRO path, fixed-rate for
// the DP gradient all-reduce.
SchemeTable scheme_mz_hybrid(int dp_rate);

// Fixed-rate everywhere: mp_rate on model-parallel and ZeRO paths, dp_rate on
// the DP all-reduce. Requires mp_rate >= dp_rate (the milder compression goes
// to the precision-sensitive paths); throws InvalidSchemeError otherwise.
SchemeTable scheme_z_hybrid(int mp_rate, int dp_rate);

// Named scheme shorthand used by configs and sweeps:
//   baseline | no-compression | naive-mpc | naive-zfpN |
//   mz-hybrid:D | z-hybrid:M,D
SchemeTable scheme_from_name(const std::string& name);

}  // namespace hcc

#endif
