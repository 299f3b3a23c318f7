#ifndef TRAILERNET_CODEC_NAME_HPP
#define TRAILERNET_CODEC_NAME_HPP

#include "tlv.hpp"

#include <compare>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace tnet {

class NameError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/** Hierarchical name: an ordered, non-empty list of non-empty byte-string components.
 *
 *  Text form is slash-joined, e.g. "/trailer/can". Octets outside the URI
 *  unreserved set are percent-encoded so parse(to_uri()) is the identity.
 */
class Name
{
public:
  using Component = std::string; // raw octets

  Name() = default;

  explicit Name(std::vector<Component> components)
    : components_(std::move(components))
  {
    validate();
  }

  Name(std::initializer_list<std::string_view> components)
  {
    for (auto c : components) {
      components_.emplace_back(c);
    }
    validate();
  }

  static Name parse(std::string_view uri)
  {
    if (uri.empty() || uri.front() != '/') {
      throw NameError("name must start with '/': '" + std::string(uri) + "'");
    }
    std::vector<Component> comps;
    std::size_t pos = 1;
    while (pos <= uri.size()) {
      std::size_t next = uri.find('/', pos);
      if (next == std::string_view::npos) {
        next = uri.size();
      }
      comps.push_back(unescape(uri.substr(pos, next - pos)));
      pos = next + 1;
    }
    return Name(std::move(comps));
  }

  std::string to_uri() const
  {
    std::string out;
    for (const auto& c : components_) {
      out.push_back('/');
      escape_into(out, c);
    }
    return out;
  }

  std::size_t size() const noexcept { return components_.size(); }
  bool empty() const noexcept { return components_.empty(); }
  const Component& operator[](std::size_t i) const { return components_[i]; }
  const std::vector<Component>& components() const noexcept { return components_; }

  /// First `n` components.
  Name prefix(std::size_t n) const
  {
    Name out;
    out.components_.assign(components_.begin(), components_.begin() + static_cast<std::ptrdiff_t>(std::min(n, size())));
    return out;
  }

  bool is_prefix_of(const Name& other) const noexcept
  {
    if (size() > other.size()) {
      return false;
    }
    for (std::size_t i = 0; i < size(); ++i) {
      if (components_[i] != other.components_[i]) {
        return false;
      }
    }
    return true;
  }

  Name append(std::string_view component) const
  {
    Name out = *this;
    if (component.empty()) {
      throw NameError("empty name component");
    }
    out.components_.emplace_back(component);
    return out;
  }

  /// Size of the value of the Name TLV.
  std::size_t value_size() const noexcept
  {
    std::size_t n = 0;
    for (const auto& c : components_) {
      n += tlv::element_size(c.size());
    }
    return n;
  }

  std::size_t encoded_size() const noexcept { return tlv::element_size(value_size()); }

  void encode_to(Bytes& out) const
  {
    tlv::append_header(out, tlv::Name, value_size());
    for (const auto& c : components_) {
      tlv::append_header(out, tlv::NameComponent, c.size());
      out.insert(out.end(), c.begin(), c.end());
    }
  }

  Bytes encode() const
  {
    Bytes out;
    out.reserve(encoded_size());
    encode_to(out);
    return out;
  }

  static Name decode(const tlv::Element& e)
  {
    if (e.type != tlv::Name) {
      throw tlv::DecodeError("expected Name", e.offset);
    }
    tlv::Reader r(e.value, e.offset + (e.size - e.value.size()));
    std::vector<Component> comps;
    while (!r.empty()) {
      auto c = r.expect(tlv::NameComponent, "NameComponent");
      if (c.value.empty()) {
        throw tlv::DecodeError("empty NameComponent", c.offset);
      }
      comps.emplace_back(c.value.begin(), c.value.end());
    }
    if (comps.empty()) {
      throw tlv::DecodeError("Name has no components", e.offset);
    }
    Name n;
    n.components_ = std::move(comps);
    return n;
  }

  friend bool operator==(const Name&, const Name&) = default;
  friend auto operator<=>(const Name& a, const Name& b) { return a.components_ <=> b.components_; }

  friend std::ostream& operator<<(std::ostream& os, const Name& n) { return os << n.to_uri(); }

private:
  void validate() const
  {
    if (components_.empty()) {
      throw NameError("name needs at least one component");
    }
    for (const auto& c : components_) {
      if (c.empty()) {
        throw NameError("empty name component");
      }
    }
  }

  static bool unreserved(unsigned char ch)
  {
    return (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') ||
           ch == '-' || ch == '.' || ch == '_' || ch == '~';
  }

  static void escape_into(std::string& out, const Component& c)
  {
    static constexpr char kHex[] = "0123456789ABCDEF";
    for (unsigned char ch : c) {
      if (unreserved(ch)) {
        out.push_back(static_cast<char>(ch));
      }
      else {
        out.push_back('%');
        out.push_back(kHex[ch >> 4]);
        out.push_back(kHex[ch & 0x0F]);
      }
    }
  }

  static int hex_value(char ch)
  {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    return -1;
  }

  static Component unescape(std::string_view s)
  {
    Component out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '%') {
        out.push_back(s[i]);
        continue;
      }
      if (i + 2 >= s.size()) {
        throw NameError("truncated percent escape in '" + std::string(s) + "'");
      }
      int hi = hex_value(s[i + 1]);
      int lo = hex_value(s[i + 2]);
      if (hi < 0 || lo < 0) {
        throw NameError("bad percent escape in '" + std::string(s) + "'");
      }
      out.push_back(static_cast<char>((hi << 4) | lo));
      i += 2;
    }
    return out;
  }

  std::vector<Component> components_;
};

} // namespace tnet

#endif // TRAILERNET_CODEC_NAME_HPP
