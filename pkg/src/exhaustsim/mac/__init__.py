"""MAC protocol implementations behind a common interface."""

from .base import MacBase, TxQueue, MAC_NAMES, build_mac
from .csma import CsmaConfig, csma_backoff_slots, DcfMac
from .lrwpan import LrwpanConfig, LrwpanMac
from .tdma import TdmaConfig, tdma_slot_owner, PREAMBLE, TdmaMac
from .smac import SmacConfig, smac_state, AWAKE, ASLEEP, SmacMac

__all__ = [
    "MacBase", "TxQueue", "MAC_NAMES", "build_mac",
    "CsmaConfig", "csma_backoff_slots", "DcfMac",
    "LrwpanConfig", "LrwpanMac",
    "TdmaConfig", "tdma_slot_owner", "PREAMBLE", "TdmaMac",
    "SmacConfig", "smac_state", "AWAKE", "ASLEEP", "SmacMac",
]
