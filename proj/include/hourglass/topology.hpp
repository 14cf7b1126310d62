#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

#include "hourglass/site_set.hpp"

namespace hourglass {

using LatticeVector = std::vector<int>;

/// nu-dimensional torus {-N..N-1}^nu with period 2N in every coordinate.
///
/// Site coordinates are stored as residues u_k in [0, 2N) (so the origin is
/// site 0) and flattened with coordinate 0 varying fastest:
///   site = u_0 + 2N * u_1 + (2N)^2 * u_2 + ...
struct TorusGeometry {
  int nu = 1;
  int N = 2;
  int K_E = 1;
  /// Excitatory displacements; each contributes both +offset and -offset.
  std::vector<LatticeVector> offsets;

  int side() const { return 2 * N; }
};

/// 2p blocks of k sites with the blocks grouped into p disjoint pairs.
/// Block indices are 0-based here; configuration files use 1-based indices.
struct BlockStructure {
  int p = 1;
  int k = 2;
  std::vector<SiteSet> blocks;
  std::vector<int> block_of;  // per site
  std::vector<std::array<int, 2>> pairing;

  std::size_t sites() const { return block_of.size(); }
  /// The block paired with `block`.
  int partner(int block) const;
};

class Topology {
 public:
  using Geometry = std::variant<TorusGeometry, BlockStructure>;

  Topology(Geometry geometry, std::vector<SiteSet> inhibitory, std::vector<SiteSet> excitatory);

  std::size_t size() const { return inhibitory_.size(); }
  const SiteSet& inhibitory(Site i) const { return inhibitory_[i]; }
  const SiteSet& excitatory(Site i) const { return excitatory_[i]; }
  /// D(i) = D_I(i) u D_E(i).
  SiteSet neighbors(Site i) const;

  const TorusGeometry* torus() const { return std::get_if<TorusGeometry>(&geometry_); }
  const BlockStructure* blocks() const { return std::get_if<BlockStructure>(&geometry_); }
  const Geometry& geometry() const { return geometry_; }

 private:
  Geometry geometry_;
  std::vector<SiteSet> inhibitory_;
  std::vector<SiteSet> excitatory_;
};

/// Torus with nearest-neighbor inhibitory links and excitatory links along
/// `offsets` (or a default set of even-parity offsets when empty).
/// Rejects K_E outside (0, N), odd-parity or zero offsets, and offset lists
/// that do not produce exactly K_E distinct excitatory neighbors.
Topology build_torus(int nu, int N, int K_E, std::vector<LatticeVector> offsets = {});

/// Default excitatory offsets for the given torus: 2e_1, ..., 2e_nu first,
/// then further even-parity displacements by increasing L1 length.
std::vector<LatticeVector> default_excitatory_offsets(int nu, int N, int K_E);

/// Torus coordinates (residues in [0, 2N)) of a site, and the inverse map.
LatticeVector torus_coordinates(const TorusGeometry& torus, Site site);
Site torus_site(const TorusGeometry& torus, const LatticeVector& coords);

/// Sum over coordinates of the wrapped absolute difference.
int torus_distance(const Topology& topology, Site i, Site j);

/// Even-parity checkerboard containing the origin.
SiteSet sublattice_lambda0(const Topology& topology);

struct BlockOptions {
  /// k = 1 is degenerate; allowed only on request.
  bool allow_single_site_blocks = false;
  /// Optional explicit block (0-based) of every site; contiguous runs of k
  /// sites when empty.
  std::vector<int> membership;
};

/// Fully connected network of 2p blocks of k sites; all links inhibitory.
/// `pairing` uses 0-based block indices and must cover {0..2p-1} disjointly.
Topology build_block_network(int p, int k, const std::vector<std::array<int, 2>>& pairing,
                             const BlockOptions& options = {});

}  // namespace hourglass
