"""Beacon-enabled IEEE 802.15.4 WBAN simulator with MAC-layer attackers and link-layer security."""

__version__ = "0.1.0"
