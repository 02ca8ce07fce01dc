"""CTR, CBC-MAC and CCM over a 128-bit block cipher (SP 800-38C formatting)."""
from __future__ import annotations

import hmac
from typing import Protocol


class BlockCipher(Protocol):
    def encrypt_block(self, block: bytes) -> bytes: ...


def _xor(a: bytes, b: bytes) -> bytes:
    return (int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).to_bytes(len(a), "big")


def _counter_block(nonce: bytes, i: int) -> bytes:
    q = 15 - len(nonce)
    return bytes([q - 1]) + nonce + i.to_bytes(q, "big")


def _encode_aad(aad: bytes) -> bytes:
    n = len(aad)
    if n == 0:
        return b""
    if n < 0xFF00:
        head = n.to_bytes(2, "big")
    elif n < 1 << 32:
        head = b"\xff\xfe" + n.to_bytes(4, "big")
    else:
        head = b"\xff\xff" + n.to_bytes(8, "big")
    return head + aad


def _pad16(b: bytes) -> bytes:
    return b + bytes(-len(b) % 16)


def ctr_keystream_xor(cipher: BlockCipher, nonce: bytes, data: bytes, first_counter: int = 1) -> bytes:
    out = bytearray()
    for j in range(0, len(data), 16):
        ks = cipher.encrypt_block(_counter_block(nonce, first_counter + j // 16))
        chunk = data[j:j + 16]
        out += _xor(chunk, ks[:len(chunk)])
    return bytes(out)


def cbc_mac(cipher: BlockCipher, nonce: bytes, aad: bytes, message: bytes, tag_len: int) -> bytes:
    """Untruncated CCM authentication field X_{n+1} (16 octets) for width ``tag_len``.

    ``tag_len`` is bound into the first block's flags, as CCM requires.
    """
    if tag_len not in (4, 6, 8, 10, 12, 14, 16):
        raise ValueError(f"invalid tag length {tag_len}")
    q = 15 - len(nonce)
    if not 2 <= q <= 8:
        raise ValueError(f"nonce length {len(nonce)} not in 7..13")
    if len(message) >= 1 << (8 * q):
        raise ValueError("message too long for the length field")
    flags = (0x40 if aad else 0) | (((tag_len - 2) // 2) << 3) | (q - 1)
    b0 = bytes([flags]) + nonce + len(message).to_bytes(q, "big")
    data = b0 + _pad16(_encode_aad(aad)) + _pad16(message)
    x = bytes(16)
    for j in range(0, len(data), 16):
        x = cipher.encrypt_block(_xor(x, data[j:j + 16]))
    return x


def ccm_encrypt(cipher: BlockCipher, nonce: bytes, aad: bytes, plaintext: bytes, tag_len: int) -> tuple[bytes, bytes]:
    t = cbc_mac(cipher, nonce, aad, plaintext, tag_len)[:tag_len]
    s0 = cipher.encrypt_block(_counter_block(nonce, 0))
    return ctr_keystream_xor(cipher, nonce, plaintext), _xor(t, s0[:tag_len])


def ccm_decrypt(cipher: BlockCipher, nonce: bytes, aad: bytes, ciphertext: bytes, tag: bytes) -> bytes | None:
    """Plaintext, or None when the tag does not verify."""
    plaintext = ctr_keystream_xor(cipher, nonce, ciphertext)
    t = cbc_mac(cipher, nonce, aad, plaintext, len(tag))[:len(tag)]
    s0 = cipher.encrypt_block(_counter_block(nonce, 0))
    if not hmac.compare_digest(_xor(t, s0[:len(tag)]), tag):
        return None
    return plaintext
