#ifndef HCC_COMM_PATH_HPP
#define HCC_COMM_PATH_HPP

#include <array>
#include <string>

#include "hcc/errors.hpp"

namespace hcc {

// Every communication a 3D-parallel training step performs, one entry per
// (parallelism stage, collective) pair. Scheme tables assign a codec to each.
enum class CommPath {
  DpAllReduce = 0,
  PpP2p,
  TpAllReduce,
  TpAllGather,
  Zero1AllGather,
  Zero1ReduceScatter,
};

inline constexpr std::array<CommPath, 6> kAllCommPaths = {
    CommPath::DpAllReduce,      CommPath::PpP2p,
    CommPath::TpAllReduce,      CommPath::TpAllGather,
    CommPath::Zero1AllGather,   CommPath::Zero1ReduceScatter,
};

inline const char* to_string(CommPath p) {
  switch (p) {
    case CommPath::DpAllReduce: return "DpAllReduce";
    case CommPath::PpP2p: return "PpP2p";
    case CommPath::TpAllReduce: return "TpAllReduce";
    case CommPath::TpAllGather: return "TpAllGather";
    case CommPath::Zero1AllGather: return "Zero1AllGather";
    case CommPath::Zero1ReduceScatter: return "Zero1ReduceScatter";
  }
  return "unknown";
}

inline CommPath comm_path_from_string(const std::string& s) {
  for (CommPath p : kAllCommPaths) {
    if (s == to_string(p)) return p;
  }
  throw ConfigError("path", "unknown communication path '" + s + "'");
}

}  // namespace hcc

#endif
