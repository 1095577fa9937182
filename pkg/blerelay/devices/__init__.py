# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""Models of the simulated devices."""
from .base import AdvPacket, Device, Advertiser, Scanner
from .node import Node
from .relay import Relay, Phase
from .gateway import Gateway


__all__ = [
    'AdvPacket',
    'Device',
    'Advertiser',
    'Scanner',
    'Node',
    'Relay',
    'Phase',
    'Gateway',
]
