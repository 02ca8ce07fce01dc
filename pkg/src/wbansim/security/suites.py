"""Link-layer security suites for data frames.

Nonce layout: 8-octet source address, 4-octet frame counter, 1-octet key
sequence counter (13 octets, CCM length field L=2). The authenticated header
is the nonce followed by the suite identifier.

The CBC-MAC suites compute the full 16-octet CBC-MAC (with the 16-octet
width encoded in the first block) and truncate it, so the 32- and 64-bit
tags are prefixes of the 128-bit one. The CCM suites follow SP 800-38C
exactly, which binds the tag width into the MAC.
"""
from __future__ import annotations

import enum
import hmac
from dataclasses import dataclass
from typing import Mapping

from .aes import AES128
from .modes import cbc_mac, ccm_decrypt, ccm_encrypt, ctr_keystream_xor

MAX_PAYLOAD_OCTETS = 102
MAX_FRAME_COUNTER = 0xFFFFFFFE


class SecuritySuite(enum.Enum):
    # values are the suite identifiers carried in the frame
    NULL = 0x00
    AES_CTR = 0x01
    AES_CCM_128 = 0x02
    AES_CCM_64 = 0x03
    AES_CCM_32 = 0x04
    AES_CBC_MAC_128 = 0x05
    AES_CBC_MAC_64 = 0x06
    AES_CBC_MAC_32 = 0x07

    @classmethod
    def parse(cls, text: str) -> SecuritySuite:
        key = text.strip().upper().replace("-", "_")
        aliases = {
            "AESCTR": "AES_CTR",
            "AESCBCMAC128": "AES_CBC_MAC_128", "AESCBCMAC64": "AES_CBC_MAC_64",
            "AESCBCMAC32": "AES_CBC_MAC_32",
            "AESCCM128": "AES_CCM_128", "AESCCM64": "AES_CCM_64", "AESCCM32": "AES_CCM_32",
        }
        key = aliases.get(key, key)
        try:
            return cls[key]
        except KeyError:
            raise ValueError(f"unknown security suite {text!r}") from None

    @property
    def tag_len(self) -> int:
        return _TAG_LEN[self]


_TAG_LEN = {
    SecuritySuite.NULL: 0,
    SecuritySuite.AES_CTR: 0,
    SecuritySuite.AES_CBC_MAC_128: 16,
    SecuritySuite.AES_CBC_MAC_64: 8,
    SecuritySuite.AES_CBC_MAC_32: 4,
    SecuritySuite.AES_CCM_128: 16,
    SecuritySuite.AES_CCM_64: 8,
    SecuritySuite.AES_CCM_32: 4,
}


@dataclass(frozen=True)
class SuiteProperties:
    access_control: bool
    confidentiality: bool
    integrity: bool
    freshness: bool

    def as_set(self) -> frozenset[str]:
        return frozenset(k for k, v in self.__dict__.items() if v)


_NONE = SuiteProperties(False, False, False, False)
_CTR = SuiteProperties(True, True, False, True)
_MAC = SuiteProperties(True, False, True, False)
_CCM = SuiteProperties(True, True, True, True)

_PROPERTIES = {
    SecuritySuite.NULL: _NONE,
    SecuritySuite.AES_CTR: _CTR,
    SecuritySuite.AES_CBC_MAC_128: _MAC,
    SecuritySuite.AES_CBC_MAC_64: _MAC,
    SecuritySuite.AES_CBC_MAC_32: _MAC,
    SecuritySuite.AES_CCM_128: _CCM,
    SecuritySuite.AES_CCM_64: _CCM,
    SecuritySuite.AES_CCM_32: _CCM,
}


def suite_properties(suite: SecuritySuite) -> SuiteProperties:
    return _PROPERTIES[suite]


class SecurityError(Exception):
    pass


class AccessDenied(SecurityError):
    pass


class AuthFailure(SecurityError):
    pass


class ReplayRejected(SecurityError):
    pass


class Malformed(SecurityError):
    pass


class RekeyRequired(SecurityError):
    pass


@dataclass
class KeyRecord:
    key: bytes
    peer: int
    last_counter_seen: int = -1
    last_counter_sent: int = -1
    key_sequence: int = 0

    def __post_init__(self):
        self.key = bytes(self.key)
        if len(self.key) != 16:
            raise ValueError("keys are 128-bit")
        self._cipher = AES128(self.key)

    @property
    def cipher(self) -> AES128:
        return self._cipher


@dataclass(frozen=True)
class SecuredFrame:
    source: int
    frame_counter: int
    key_sequence: int
    suite: SecuritySuite
    body: bytes
    tag: bytes = b""

    @property
    def nonce(self) -> bytes:
        return make_nonce(self.source, self.frame_counter, self.key_sequence)

    def header(self) -> bytes:
        return self.nonce + bytes([self.suite.value])


def make_nonce(source: int, frame_counter: int, key_sequence: int) -> bytes:
    return source.to_bytes(8, "big") + frame_counter.to_bytes(4, "big") + bytes([key_sequence])


def protect(plaintext: bytes, suite: SecuritySuite, keyrec: KeyRecord | None,
            frame_counter: int | None = None) -> SecuredFrame:
    """Apply ``suite`` to ``plaintext``.

    ``frame_counter`` defaults to one past the last counter sent with
    ``keyrec``; an explicit value must still exceed it.
    """
    plaintext = bytes(plaintext)
    if len(plaintext) > MAX_PAYLOAD_OCTETS:
        raise ValueError(f"payload of {len(plaintext)} octets exceeds {MAX_PAYLOAD_OCTETS}")
    if suite is SecuritySuite.NULL:
        source = keyrec.peer if keyrec is not None else 0
        return SecuredFrame(source, frame_counter or 0, 0, suite, plaintext)
    if keyrec is None:
        raise AccessDenied("secured suites need a key record")
    if frame_counter is None:
        frame_counter = keyrec.last_counter_sent + 1
    if frame_counter > MAX_FRAME_COUNTER:
        raise RekeyRequired(f"frame counter {frame_counter} exhausted for peer {keyrec.peer}")
    if frame_counter <= keyrec.last_counter_sent:
        raise ValueError(f"frame counter {frame_counter} would reuse a nonce")
    keyrec.last_counter_sent = frame_counter

    frame = SecuredFrame(keyrec.peer, frame_counter, keyrec.key_sequence, suite, b"")
    cipher, nonce, header = keyrec.cipher, frame.nonce, frame.header()
    if suite is SecuritySuite.AES_CTR:
        body, tag = ctr_keystream_xor(cipher, nonce, plaintext), b""
    elif suite in _CBC:
        body, tag = plaintext, cbc_mac(cipher, nonce, header + plaintext, b"", 16)[:suite.tag_len]
    else:
        body, tag = ccm_encrypt(cipher, nonce, header, plaintext, suite.tag_len)
    return SecuredFrame(keyrec.peer, frame_counter, keyrec.key_sequence, suite, body, tag)


_CBC = (SecuritySuite.AES_CBC_MAC_128, SecuritySuite.AES_CBC_MAC_64, SecuritySuite.AES_CBC_MAC_32)


def unprotect(frame: SecuredFrame, acl: Mapping[int, KeyRecord]) -> bytes:
    """Verify and decrypt ``frame`` using the receiver's access control list."""
    suite = frame.suite
    if len(frame.tag) != suite.tag_len:
        raise Malformed(f"{suite.name} expects a {suite.tag_len}-octet tag, got {len(frame.tag)}")
    if suite is SecuritySuite.NULL:
        return frame.body
    keyrec = acl.get(frame.source)
    if keyrec is None:
        raise AccessDenied(f"no key for source {frame.source}")
    props = _PROPERTIES[suite]
    cipher, nonce, header = keyrec.cipher, frame.nonce, frame.header()

    if suite is SecuritySuite.AES_CTR:
        plaintext = None
    elif suite in _CBC:
        expect = cbc_mac(cipher, nonce, header + frame.body, b"", 16)[:suite.tag_len]
        if not hmac.compare_digest(expect, frame.tag):
            raise AuthFailure(f"CBC-MAC mismatch from source {frame.source}")
        plaintext = frame.body
    else:
        plaintext = ccm_decrypt(cipher, nonce, header, frame.body, frame.tag)
        if plaintext is None:
            raise AuthFailure(f"CCM tag mismatch from source {frame.source}")

    if props.freshness:
        if frame.frame_counter <= keyrec.last_counter_seen:
            raise ReplayRejected(
                f"counter {frame.frame_counter} <= last seen {keyrec.last_counter_seen}"
            )
        keyrec.last_counter_seen = frame.frame_counter
    if plaintext is None:
        plaintext = ctr_keystream_xor(cipher, nonce, frame.body)
    return plaintext


@dataclass(frozen=True)
class CcmVector:
    key: bytes
    nonce: bytes
    plaintext: bytes
    aad: bytes
    ciphertext: bytes
    tag: bytes


def load_vectors(path) -> list[CcmVector]:
    """Read a ``name=hex`` per-line vector file."""
    out = []
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                fields = dict(item.split("=", 1) for item in line.split())
                out.append(CcmVector(**{k: bytes.fromhex(fields[k]) for k in CcmVector.__dataclass_fields__}))
            except (KeyError, ValueError) as e:
                raise ValueError(f"{path}:{lineno}: bad vector record ({e})") from None
    return out
