#ifndef TRAILERNET_CODEC_HEXDUMP_HPP
#define TRAILERNET_CODEC_HEXDUMP_HPP

#include "tlv.hpp"

#include <cstdio>
#include <sstream>

namespace tnet {

/// 16 bytes per line: "00000000  05 1c 07 ..." ; the golden corpus uses this layout.
inline std::string hexdump(ByteView bytes)
{
  std::string out;
  char buf[16];
  for (std::size_t i = 0; i < bytes.size(); i += 16) {
    std::snprintf(buf, sizeof buf, "%08zx ", i);
    out += buf;
    for (std::size_t j = i; j < std::min(i + 16, bytes.size()); ++j) {
      std::snprintf(buf, sizeof buf, " %02x", bytes[j]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

/// Inverse of hexdump(); offsets are checked.
inline Bytes parse_hexdump(const std::string& text)
{
  Bytes out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::istringstream ls(line);
    std::string offset;
    ls >> offset;
    if (std::stoul(offset, nullptr, 16) != out.size()) {
      throw std::runtime_error("hexdump offset mismatch at '" + offset + "'");
    }
    std::string byte;
    while (ls >> byte) {
      out.push_back(static_cast<std::uint8_t>(std::stoul(byte, nullptr, 16)));
    }
  }
  return out;
}

} // namespace tnet

#endif // TRAILERNET_CODEC_HEXDUMP_HPP
