"""
Test Suite for the producer application
"""

from app.framework.apps.producer import Producer
from app.framework.foundation.names import parse_name
from app.framework.foundation.packets import Data, FaceKind, Interest

from tests.conftest import make_network


class TestProducer:
    """Serving and rejecting interests"""

    def test_serves_prefix(self):
        """Test /google/mail/7 is answered by a /google producer"""
        producer = Producer("P", [parse_name("/google")])
        data = producer.on_interest(Interest(parse_name("/google/mail/7"), 1))
        assert isinstance(data, Data)
        assert not data.is_discovery
        assert producer.served == 1

    def test_rejects_other_prefix(self):
        """Test /yahoo/1 is rejected"""
        producer = Producer("P", [parse_name("/google")])
        assert producer.on_interest(Interest(parse_name("/yahoo/1"), 1)) is None
        assert producer.rejected == 1

    def test_discovery_data_announces_prefix(self):
        """Test discovery Data announces the name minus its sequence number"""
        producer = Producer("P", [parse_name("/google")])
        data = producer.on_interest(Interest(parse_name("/google/mail/1"), 1, is_discovery=True))
        assert data.is_discovery
        assert data.announced_prefix == parse_name("/google/mail")

    def test_payload_size(self):
        """Test Data carries the configured payload size"""
        producer = Producer("P", [parse_name("/p")], payload_size=4096)
        assert producer.on_interest(Interest(parse_name("/p/1"), 1)).payload_size == 4096

    def test_attach_registers_local_prefixes(self):
        """Test attaching installs every prefix on a local producer face"""
        _, _, network = make_network("approximate", {"R1": "edge"}, [])
        router = network.routers["R1"]
        producer = Producer("P", [parse_name("/a"), parse_name("/b")])
        face = producer.attach(router)

        assert router.faces[face].kind is FaceKind.PRODUCER
        assert router.fib_faces() == {"/a": (face,), "/b": (face,)}
        assert router.fib.faces_of(parse_name("/a")).is_local(face)
        assert router.local_producer_face(parse_name("/b/c0/1")) == face
        assert router.local_producer_face(parse_name("/z/1")) is None
