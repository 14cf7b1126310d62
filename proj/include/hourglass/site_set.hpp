#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace hourglass {

using Site = std::uint32_t;

/// Sorted, duplicate-free list of site ids.
using SiteSet = std::vector<Site>;

inline SiteSet make_site_set(std::vector<Site> sites) {
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

inline bool contains(const SiteSet& set, Site site) {
  return std::binary_search(set.begin(), set.end(), site);
}

/// {0..n-1} minus `set`.
inline SiteSet complement(const SiteSet& set, std::size_t n) {
  SiteSet out;
  out.reserve(n - std::min(n, set.size()));
  for (Site s = 0; s < n; ++s) {
    if (!contains(set, s)) out.push_back(s);
  }
  return out;
}

inline SiteSet all_sites(std::size_t n) {
  SiteSet out(n);
  for (Site s = 0; s < n; ++s) out[s] = s;
  return out;
}

}  // namespace hourglass
