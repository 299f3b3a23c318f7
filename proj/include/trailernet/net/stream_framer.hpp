#ifndef TRAILERNET_NET_STREAM_FRAMER_HPP
#define TRAILERNET_NET_STREAM_FRAMER_HPP

#include "../codec/tlv.hpp"

#include <optional>

namespace tnet::net {

/** Splits a TCP byte stream into whole TLV elements. Packets are
 *  self-delimiting, so no extra framing is involved; feed() accepts any
 *  chunking of the stream. */
class StreamFramer
{
public:
  void feed(ByteView chunk) { buf_.insert(buf_.end(), chunk.begin(), chunk.end()); }

  /// Next complete element, or nullopt until more bytes arrive.
  std::optional<Bytes> next()
  {
    ByteView rest(buf_.data() + head_, buf_.size() - head_);
    auto size = tlv::peek_element_size(rest, consumed_total_);
    if (!size || *size > rest.size()) {
      compact();
      return std::nullopt;
    }
    Bytes out(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(*size));
    head_ += *size;
    consumed_total_ += *size;
    return out;
  }

  std::size_t buffered() const { return buf_.size() - head_; }

private:
  void compact()
  {
    if (head_ > 0) {
      buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(head_));
      head_ = 0;
    }
  }

  Bytes buf_;
  std::size_t head_ = 0;
  std::size_t consumed_total_ = 0;
};

} // namespace tnet::net

#endif // TRAILERNET_NET_STREAM_FRAMER_HPP
