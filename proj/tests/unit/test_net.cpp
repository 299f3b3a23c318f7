#include "random_packets.hpp"
#include "running_daemon.hpp"

#include <trailernet/forwarder/daemon.hpp>

#include <gtest/gtest.h>

#include <thread>

using namespace tnet;
using namespace std::chrono_literals;

TEST(StreamFramer, ArbitraryChunkingPreservesBoundaries)
{
  std::mt19937_64 rng(21);
  for (int round = 0; round < 50; ++round) {
    std::vector<Bytes> packets;
    Bytes stream;
    std::size_t n = 1 + rng() % 40;
    for (std::size_t k = 0; k < n; ++k) {
      Bytes p = (rng() % 3 == 0) ? encode_app_ack(static_cast<std::uint32_t>(k))
                : (rng() % 2)    ? encode_interest(gen::random_interest(rng))
                                 : encode_data(gen::random_data(rng, 3000));
      stream.insert(stream.end(), p.begin(), p.end());
      packets.push_back(std::move(p));
    }
    net::StreamFramer framer;
    std::vector<Bytes> parsed;
    std::size_t off = 0;
    while (off < stream.size()) {
      std::size_t chunk = 1 + rng() % 700;
      chunk = std::min(chunk, stream.size() - off);
      framer.feed(ByteView(stream).subspan(off, chunk));
      off += chunk;
      while (auto p = framer.next()) {
        parsed.push_back(std::move(*p));
      }
    }
    EXPECT_EQ(parsed, packets);
    EXPECT_EQ(framer.buffered(), 0u);
  }
}

TEST(RouteSpec, Parse)
{
  auto r = fwd::RouteSpec::parse("/trailer/can=udp://127.0.0.1:6363");
  EXPECT_EQ(r.prefix, Name::parse("/trailer/can"));
  EXPECT_EQ(r.transport, Transport::Udp);
  EXPECT_EQ(r.remote, (net::Endpoint{"127.0.0.1", 6363}));
  EXPECT_EQ(fwd::RouteSpec::parse("/t=tcp://10.0.0.2:1").transport, Transport::Tcp);
  EXPECT_THROW(fwd::RouteSpec::parse("/t=sctp://1.2.3.4:5"), std::invalid_argument);
  EXPECT_THROW(fwd::RouteSpec::parse("/t"), std::invalid_argument);
}

namespace {

using gen::RunningDaemon;

net::PacketChannel register_producer(const net::Endpoint& fwd, const Name& prefix)
{
  auto ch = net::PacketChannel::connect(Transport::Tcp, fwd);
  ch.send(encode_interest(fwd::make_registration(prefix, 99)));
  auto reply = ch.receive(2000);
  EXPECT_TRUE(reply.has_value());
  return ch;
}

void serve_one(net::PacketChannel& producer, std::size_t size)
{
  auto pkt = producer.receive(2000);
  ASSERT_TRUE(pkt);
  auto i = decode_interest(*pkt).value;
  producer.send(encode_data(make_unsigned_data(i.name, Bytes(size, 0x5A))));
}

Interest fresh(std::string_view uri, std::uint32_t nonce)
{
  Interest i;
  i.name = Name::parse(uri);
  i.nonce = nonce;
  i.must_be_fresh = true;
  return i;
}

} // namespace

TEST(Daemon, TcpRequestResponseAndAckRelay)
{
  RunningDaemon d;
  auto ep = d.daemon->tcp_endpoint();
  auto producer = register_producer(ep, Name::parse("/trailer/can"));
  auto consumer = net::PacketChannel::connect(Transport::Tcp, ep);

  consumer.send(encode_interest(fresh("/trailer/can", 1)));
  serve_one(producer, 160);
  auto data = consumer.receive(2000);
  ASSERT_TRUE(data);
  auto decoded = decode_data(*data).value;
  EXPECT_EQ(decoded.content.size(), 160u);

  consumer.send(encode_app_ack(0));
  auto ack = producer.receive(2000);
  ASSERT_TRUE(ack);
  EXPECT_EQ(decode_app_ack(*ack), 0u);
}

TEST(Daemon, UdpConsumerAndLargeData)
{
  RunningDaemon d;
  auto producer = register_producer(d.daemon->tcp_endpoint(), Name::parse("/trailer/cam"));
  auto consumer = net::PacketChannel::connect(Transport::Udp, d.daemon->udp_endpoint());
  consumer.send(encode_interest(fresh("/trailer/cam", 2)));
  serve_one(producer, 8000);
  auto data = consumer.receive(2000);
  ASSERT_TRUE(data);
  EXPECT_EQ(decode_data(*data).value.content.size(), 8000u);
  EXPECT_EQ(consumer.sent().packets, 1u);
  EXPECT_EQ(consumer.sent().wire_bytes, 72u);
}

TEST(Daemon, NoRouteTimesOut)
{
  RunningDaemon d;
  auto consumer = net::PacketChannel::connect(Transport::Tcp, d.daemon->tcp_endpoint());
  consumer.send(encode_interest(fresh("/nobody/home", 3)));
  EXPECT_FALSE(consumer.receive(200));
}

TEST(Daemon, TwoHopsOverUdpRoute)
{
  RunningDaemon upstream;
  fwd::DaemonOptions o;
  o.routes.push_back({Name::parse("/trailer/lidar"), Transport::Udp, upstream.daemon->udp_endpoint()});
  RunningDaemon edge(o);

  auto producer = register_producer(upstream.daemon->tcp_endpoint(), Name::parse("/trailer/lidar"));
  auto consumer = net::PacketChannel::connect(Transport::Tcp, edge.daemon->tcp_endpoint());
  for (std::uint32_t k = 0; k < 5; ++k) {
    consumer.send(encode_interest(fresh("/trailer/lidar", 100 + k)));
    serve_one(producer, 2496);
    auto data = consumer.receive(2000);
    ASSERT_TRUE(data) << k;
    EXPECT_EQ(decode_data(*data).value.content.size(), 2496u);
    consumer.send(encode_app_ack(k));
    auto ack = producer.receive(2000);
    ASSERT_TRUE(ack);
    EXPECT_EQ(decode_app_ack(*ack), k);
  }
}

TEST(Daemon, TwoHopsOverTcpRoute)
{
  RunningDaemon upstream;
  fwd::DaemonOptions o;
  o.routes.push_back({Name::parse("/trailer"), Transport::Tcp, upstream.daemon->tcp_endpoint()});
  RunningDaemon edge(o);
  auto producer = register_producer(upstream.daemon->tcp_endpoint(), Name::parse("/trailer/can"));
  auto consumer = net::PacketChannel::connect(Transport::Tcp, edge.daemon->tcp_endpoint());
  consumer.send(encode_interest(fresh("/trailer/can", 7)));
  serve_one(producer, 160);
  ASSERT_TRUE(consumer.receive(2000));
}
