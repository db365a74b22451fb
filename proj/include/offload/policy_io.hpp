#pragma once

#include <iosfwd>
#include <string>

#include "offload/dp.hpp"

namespace offload {

/// Binary policy table, all integers little-endian:
///
///   magic    8 bytes  "OFLDPOL1"
///   version  u32      1
///   horizon  u32
///   L        u32      locations
///   M        u32      flows
///   B        M x u32  max remaining size per flow, sigma units
///   hash     u64      scenario fingerprint
///   mode     u8       1 = exhaustive, 2 = edf
///   then for t = 1..horizon, for every state in StateSpace index order:
///     network u8 (0 idle, 1 wlan, 2 cellular), allocation M x u16
void write_policy(std::ostream& out, const PolicyTable& table);
PolicyTable read_policy(std::istream& in);

/// Throw IoError on unreadable/unwritable files or malformed content.
void save_policy(const PolicyTable& table, const std::string& path);
PolicyTable load_policy(const std::string& path);

}  // namespace offload
