"""Link-layer frame representation shared by the channel and the MACs."""

from dataclasses import dataclass, field

DATA = "DATA"
ACK = "ACK"
CONTROL = "CONTROL"  # RTS-like / MAC control
ROUTING = "ROUTING"

BROADCAST = -1

MAX_DATA_PAYLOAD = 512  # bytes


@dataclass
class Frame:
    kind: str
    source: int
    destination: int  # node id or BROADCAST
    payload_size: int  # bytes, excluding MAC/PHY overhead
    seq: int
    # opaque upper-layer content (routing message or app packet metadata)
    body: object = None
    # MAC hops traversed so far by the app packet this frame carries
    hops: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == DATA and self.payload_size > MAX_DATA_PAYLOAD:
            raise ValueError(
                f"DATA payload {self.payload_size} exceeds {MAX_DATA_PAYLOAD} bytes"
            )

    @property
    def is_broadcast(self):
        return self.destination == BROADCAST
