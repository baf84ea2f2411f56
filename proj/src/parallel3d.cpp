#include "hcc/parallel3d.hpp"

#include <cassert>

namespace hcc {

std::vector<int> ParallelLayout::dp_group(int rank) const {
  const Coord c = coord_of(rank);
  std::vector<int> out;
  out.reserve(dp);
  for (int d = 0; d < dp; ++d) out.push_back(rank_of(d, c.p, c.t));
  return out;
}

std::vector<int> ParallelLayout::tp_group(int rank) const {
  const Coord c = coord_of(rank);
  std::vector<int> out;
  out.reserve(tp);
  for (int t = 0; t < tp; ++t) out.push_back(rank_of(c.d, c.p, t));
  return out;
}

std::vector<int> ParallelLayout::pp_chain(int rank) const {
  const Coord c = coord_of(rank);
  std::vector<int> out;
  out.reserve(pp);
  for (int p = 0; p < pp; ++p) out.push_back(rank_of(c.d, p, c.t));
  return out;
}

ParallelLayout build_layout(int dp, int pp, int tp, const Topology& topo) {
  if (dp < 1 || pp < 1 || tp < 1) {
    throw BadLayoutError("parallel degrees must be >= 1");
  }
  if (dp * pp * tp != topo.world_size()) {
    throw BadLayoutError("dp*pp*tp = " + std::to_string(dp * pp * tp) +
                         " does not match world size " +
                         std::to_string(topo.world_size()));
  }
  return ParallelLayout{dp, pp, tp};
}

SchemeTable scheme_no_compression() {
  SchemeTable t;
  t.name = "no-compression";
  for (CommPath p : kAllCommPaths) t.paths[p] = CodecSpec::identity();
  return t;
}

SchemeTable scheme_naive(const CodecSpec& spec) {
  SchemeTable t;
  if (spec.kind == CodecKind::Identity) {
    t.name = "no-compression";
  } else if (spec.kind == CodecKind::LosslessPredictor) {
    t.name = "naive-mpc";
  } else {
    t.name = "naive-zfp" + std::to_string(spec.rate_bits);
  }
  for (CommPath p : kAllCommPaths) t.paths[p] = spec;
  return t;
}

SchemeTable scheme_mz_hybrid(int dp_rate) {
  SchemeTable t;
  t.name = "mz-hybrid:" + std::to_string(dp_rate);
  for (CommPath p : kAllCommPaths) t.paths[p] = CodecSpec::lossless();
  t.paths[CommPath::DpAllReduce] = CodecSpec::fixed_rate(dp_rate);
  return t;
}

SchemeTable scheme_z_hybrid(int mp_rate, int dp_rate) {
  if (mp_rate < dp_rate) {
    throw InvalidSchemeError("z-hybrid requires mp_rate >= dp_rate, got mp=" +
                             std::to_string(mp_rate) + " dp=" +
                             std::to_string(dp_rate));
  }
  SchemeTable t;
  t.name = "z-hybrid:" + std::to_string(mp_rate) + "," + std::to_string(dp_rate);
  for (CommPath p : kAllCommPaths) t.paths[p] = CodecSpec::fixed_rate(mp_rate);
  t.paths[CommPath::DpAllReduce] = CodecSpec::fixed_rate(dp_rate);
  return t;
}

SchemeTable scheme_from_name(const std::string& name) {
  if (name == "baseline" || name == "no-compression") return scheme_no_compression();
  if (name == "naive-mpc") return scheme_naive(CodecSpec::lossless());
  if (name.rfind("naive-zfp", 0) == 0) {
    try {
      return scheme_naive(CodecSpec::fixed_rate(std::stoi(name.substr(9))));
    } catch (const InvalidSchemeError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("scheme", "bad rate in '" + name + "'");
    }
  }
  if (name.rfind("mz-hybrid:", 0) == 0) {
    try {
      return scheme_mz_hybrid(std::stoi(name.substr(10)));
    } catch (const InvalidSchemeError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("scheme", "bad rate in '" + name + "'");
    }
  }
  if (name.rfind("z-hybrid:", 0) == 0) {
    const auto comma = name.find(',', 9);
    if (comma != std::string::npos) {
      try {
        return scheme_z_hybrid(std::stoi(name.substr(9, comma - 9)),
                               std::stoi(name.substr(comma + 1)));
      } catch (const InvalidSchemeError&) {
        throw;
      } catch (const std::exception&) {
        throw ConfigError("scheme", "bad rates in '" + name + "'");
      }
    }
  }
  throw ConfigError("scheme",
                    "unknown scheme '" + name +
                        "' (expected baseline | no-compression | naive-mpc | "
                        "naive-zfpN | mz-hybrid:D | z-hybrid:M,D)");
}

}  // namespace hcc
