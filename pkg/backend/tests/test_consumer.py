"""
Test Suite for the consumer application
AIMD window, discovery gating, AltRoute retries and timeouts
"""

from typing import Callable, List, Optional, Tuple

import numpy as np
import pytest

from app.framework.apps.consumer import AimdWindow, Consumer
from app.framework.foundation.names import Name, parse_name
from app.framework.foundation.packets import Data, Interest, Nack, NackReason
from app.framework.metrics.collector import MetricsCollector
from app.framework.sim.event_loop import EventLoop

PREFIX = parse_name("/d0/c0")
RTT = 0.06

Reply = Optional[Tuple[float, object]]


class ScriptedForwarder:
    """Access router stand-in answering each interest through `respond`"""

    def __init__(self, loop: EventLoop, respond: Callable[[Interest], Reply]) -> None:
        self.loop = loop
        self.respond = respond
        self.sent: List[Tuple[float, Interest]] = []
        self.app = None

    def add_app_face(self, app, kind) -> int:
        self.app = app
        return 0

    def receive_from_app(self, packet: Interest, face: int) -> None:
        self.sent.append((self.loop.now, packet))
        reply = self.respond(packet)
        if reply is not None:
            delay, answer = reply
            self.loop.schedule(delay, self.app.receive, answer)

    def regular(self) -> List[Tuple[float, Interest]]:
        return [(t, p) for t, p in self.sent if not p.is_discovery]

    def discoveries(self) -> List[Tuple[float, Interest]]:
        return [(t, p) for t, p in self.sent if p.is_discovery]


def _seq(name: Name) -> int:
    return int(name.components[-1])


def answer_all(interest: Interest) -> Reply:
    data = Data(interest.name, announced_prefix=PREFIX if interest.is_discovery else None, is_discovery=interest.is_discovery)
    return RTT, data


def nack(interest: Interest, reason: NackReason) -> Tuple[float, Nack]:
    return 0.0, Nack(interest.name, interest.nonce, reason)


def make_consumer(respond, **kwargs) -> Tuple[EventLoop, Consumer, ScriptedForwarder, MetricsCollector]:
    loop = EventLoop()
    collector = MetricsCollector()
    forwarder = ScriptedForwarder(loop, respond)
    consumer = Consumer("consumer0", PREFIX, loop, np.random.default_rng(0), collector, **kwargs)
    consumer.attach(forwarder)
    return loop, consumer, forwarder, collector


class TestAimdWindow:
    """Additive increase, multiplicative decrease"""

    def test_slow_start_step(self):
        """Test cwnd 1 in slow start grows to 2 on one Data"""
        window = AimdWindow(1.0, 64.0)
        window.on_data()
        assert window.cwnd == 2.0

    def test_congestion_avoidance_step(self):
        """Test cwnd 10 at ssthresh grows by 1/cwnd"""
        window = AimdWindow(10.0, 10.0)
        window.on_data()
        assert window.cwnd == pytest.approx(10.1)

    def test_halving(self):
        """Test cwnd 8 on loss gives ssthresh 4, cwnd 1"""
        window = AimdWindow(8.0, 64.0)
        assert window.on_loss(seq=0, next_seq=5)
        assert (window.ssthresh, window.cwnd) == (4.0, 1.0)
        assert window.in_slow_start

    def test_floor(self):
        """Test cwnd 1 on loss keeps ssthresh at 1"""
        window = AimdWindow(1.0, 64.0)
        window.on_loss(seq=0, next_seq=1)
        assert (window.ssthresh, window.cwnd) == (1.0, 1.0)

    def test_timeout_always_halves(self):
        """Test back-to-back timeouts each halve, down to the floor"""
        window = AimdWindow(initial_cwnd=8.0)
        window.on_timeout()
        assert (window.ssthresh, window.cwnd) == (4.0, 1.0)
        window.on_timeout()
        assert (window.ssthresh, window.cwnd) == (1.0, 1.0)

    def test_one_decrease_per_window(self):
        """Test losses of interests sent before the last decrease are ignored"""
        window = AimdWindow(8.0, 64.0)
        window.on_loss(seq=3, next_seq=10)
        assert not window.on_loss(seq=7, next_seq=10)
        assert window.ssthresh == 4.0
        assert window.on_loss(seq=10, next_seq=12)

    def test_max_cwnd(self):
        """Test the window never exceeds its cap"""
        window = AimdWindow(1.0, 64.0, max_cwnd=3.0)
        for _ in range(10):
            window.on_data()
        assert window.cwnd == 3.0
        assert window.allowance == 3


class TestRateWorkload:
    """Interests at a fixed rate"""

    def test_eight_per_second(self):
        """Test rate 8/s sends 8 interests in one second when every one is answered"""
        loop, consumer, forwarder, _ = make_consumer(answer_all, rate=8.0)
        consumer.start(at=0.0, stop_at=1.0)
        loop.run(until=2.0)
        assert [_seq(p.name) for _, p in forwarder.regular()] == list(range(8))
        assert consumer.delivered == 8

    def test_unknown_data_ignored(self):
        """Test Data for a name that was never requested changes nothing"""
        loop, consumer, _, _ = make_consumer(answer_all)
        consumer.on_data(Data(parse_name("/d9/c9/1")))
        consumer.on_data(Data(PREFIX.append("41")))
        assert consumer.delivered == 0
        assert consumer.window.cwnd == 1.0


class TestDiscoveryGating:
    """NoRoute starts a discovery and holds everything else back"""

    @staticmethod
    def no_route_until_discovered(delay: float):
        state = {"route": False}

        def respond(interest: Interest) -> Reply:
            if interest.is_discovery:
                state["route"] = True
                return delay, Data(interest.name, announced_prefix=PREFIX, is_discovery=True)
            if not state["route"]:
                return nack(interest, NackReason.NO_ROUTE)
            return answer_all(interest)

        return respond

    def test_first_no_route_issues_one_discovery(self, mocker):
        """Test one NoRoute leads to exactly one discovery interest"""
        loop, consumer, forwarder, collector = make_consumer(lambda interest: (
            None if interest.is_discovery else nack(interest, NackReason.NO_ROUTE)
        ))
        issued = mocker.spy(collector, "on_discovery_issued")
        consumer.start(at=0.0, stop_at=10.0)
        loop.run(until=0.9)

        assert consumer.discoveries_issued == 1
        assert issued.call_count == 1
        assert consumer.discovery_in_flight
        assert len(forwarder.regular()) == 1
        assert consumer.queued == 7
        assert _seq(forwarder.discoveries()[0][1].name) == 0

    def test_initial_no_route_keeps_window(self):
        """Test the first NoRoute is not treated as congestion"""
        loop, consumer, _, _ = make_consumer(lambda interest: (
            None if interest.is_discovery else nack(interest, NackReason.NO_ROUTE)
        ), initial_ssthresh=16.0)
        consumer.start(at=0.0, stop_at=1.0)
        loop.run(until=0.5)
        assert consumer.window.ssthresh == 16.0

    def test_discovery_reissued_after_timer(self):
        """Test an unanswered discovery is re-issued with a fresh nonce after the timer"""
        loop, consumer, forwarder, _ = make_consumer(lambda interest: (
            None if interest.is_discovery else nack(interest, NackReason.NO_ROUTE)
        ), discovery_timer=1.0)
        consumer.start(at=0.0, stop_at=10.0)
        loop.run(until=0.99)
        assert consumer.discoveries_issued == 1
        loop.run(until=1.5)
        assert consumer.discoveries_issued == 2

        (t1, first), (t2, second) = forwarder.discoveries()
        assert t2 - t1 == pytest.approx(1.0)
        assert first.name == second.name
        assert first.nonce != second.nonce

    def test_at_most_one_discovery_in_flight(self):
        """Test discoveries are spaced by the timer however many NACKs arrive"""
        loop, consumer, forwarder, _ = make_consumer(lambda interest: (
            None if interest.is_discovery else nack(interest, NackReason.NO_ROUTE)
        ), window_only=True, initial_cwnd=4.0)
        consumer.start(at=0.0, stop_at=3.5)
        loop.run(until=3.5)
        times = [t for t, _ in forwarder.discoveries()]
        assert len(times) == 4
        assert all(b - a >= 1.0 - 1e-9 for a, b in zip(times, times[1:]))

    def test_no_route_after_retries_used_up(self):
        """Test a NoRoute for a seq with no retries left abandons it instead of discovering"""
        loop, consumer, forwarder, _ = make_consumer(lambda interest: (
            None if interest.is_discovery else nack(interest, NackReason.NO_ROUTE)
        ), max_alt_attempts=3)
        consumer.attempts[0] = 3
        consumer.start(at=0.0, stop_at=0.1)
        loop.run(until=1.0)

        assert len(forwarder.regular()) == 1
        assert consumer.discoveries_issued == 0
        assert not consumer.discovery_in_flight
        assert consumer.queued == 0
        assert 0 not in consumer.attempts

    def test_discovery_data_counts_as_delivery(self):
        """Test the discovery's Data satisfies the sequence number it was issued for"""
        loop, consumer, _, collector = make_consumer(self.no_route_until_discovered(RTT))
        consumer.start(at=0.0, stop_at=0.1)
        loop.run(until=1.0)
        assert consumer.delivered == 1
        assert not consumer.discovery_in_flight
        assert len(collector.deliveries) == 1
        delivered_at, consumer_name = collector.deliveries[0]
        assert delivered_at == pytest.approx(RTT)
        assert consumer_name == "consumer0"

    def test_queued_interests_flushed_in_order(self):
        """Test interests held during discovery leave first, in sequence order"""
        loop, consumer, forwarder, _ = make_consumer(self.no_route_until_discovered(0.5), rate=8.0)
        consumer.start(at=0.0, stop_at=2.0)
        loop.run(until=3.0)

        after = [_seq(p.name) for t, p in forwarder.regular() if t >= 0.5]
        assert after[:3] == [1, 2, 3]
        assert after == sorted(after)
        assert consumer.delivered == 16


class TestAltRoute:
    """AltRoute NACK handling"""

    @staticmethod
    def alt_route_times(count: int):
        state = {"nacked": 0}

        def respond(interest: Interest) -> Reply:
            if interest.is_discovery:
                return None
            if state["nacked"] < count:
                state["nacked"] += 1
                return 0.02, Nack(interest.name, interest.nonce, NackReason.ALT_ROUTE)
            return answer_all(interest)

        return respond

    def test_immediate_retransmission(self):
        """Test AltRoute is retried at once with a fresh nonce and an unchanged window"""
        loop, consumer, forwarder, _ = make_consumer(self.alt_route_times(1), rate=8.0)
        consumer.window.cwnd = 5.0
        consumer.start(at=0.0, stop_at=0.1)
        loop.run(until=1.0)

        (t1, first), (t2, second) = forwarder.regular()
        assert first.name == second.name
        assert first.nonce != second.nonce
        assert t2 == pytest.approx(0.02)
        assert consumer.window.cwnd >= 5.0
        assert consumer.discoveries_issued == 0
        assert consumer.delivered == 1

    def test_third_alt_route_starts_discovery(self):
        """Test max_alt_attempts AltRoutes in a row fall back to discovery"""
        loop, consumer, forwarder, _ = make_consumer(self.alt_route_times(10), max_alt_attempts=3)
        consumer.start(at=0.0, stop_at=0.1)
        loop.run(until=0.5)

        assert len(forwarder.regular()) == 3
        assert consumer.discoveries_issued == 1
        assert consumer.window.cwnd == 1.0


class TestTimeout:
    """Interest lifetime expiry"""

    def test_timeout_halves_and_retransmits(self):
        """Test a timeout at cwnd 8 gives ssthresh 4, cwnd 1 and a retransmission"""
        loop, consumer, forwarder, _ = make_consumer(lambda interest: None, interest_lifetime=2.0)
        consumer.window.cwnd = 8.0
        consumer.start(at=0.0, stop_at=0.1)
        loop.run(until=2.5)

        assert (consumer.window.ssthresh, consumer.window.cwnd) == (4.0, 1.0)
        assert [_seq(p.name) for _, p in forwarder.regular()] == [0, 0]
        assert forwarder.regular()[1][0] == pytest.approx(2.0)

    def test_repeated_timeouts_start_discovery(self):
        """Test the retry limit on timeouts also falls back to discovery"""
        loop, consumer, forwarder, _ = make_consumer(
            lambda interest: None, interest_lifetime=1.0, max_alt_attempts=3
        )
        consumer.start(at=0.0, stop_at=0.1)
        loop.run(until=3.5)
        assert len(forwarder.regular()) == 3
        assert consumer.discoveries_issued == 1

    def test_every_timeout_reduces_window(self):
        """Test timeouts of one window are not merged into a single decrease"""
        loop, consumer, forwarder, _ = make_consumer(
            lambda interest: None, window_only=True, initial_cwnd=8.0, interest_lifetime=2.0
        )
        consumer.start(at=0.0, stop_at=0.1)
        loop.run(until=2.5)

        assert len(forwarder.regular()) == 9
        assert (consumer.window.ssthresh, consumer.window.cwnd) == (1.0, 1.0)
