"""Minimal RFC 6455 WebSocket framing over asyncio streams.

Supports the subset this service needs: the HTTP upgrade handshake, binary
data frames, close, and ping/pong. Client-to-server frames must be masked
per the RFC; server-to-client frames are unmasked. No extensions, no
fragmentation (every WireMessage fits one frame).
"""

from __future__ import annotations

import asyncio
import base64
import hashlib
import os
import struct

GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"

OP_TEXT = 0x1
OP_BINARY = 0x2
OP_CLOSE = 0x8
OP_PING = 0x9
OP_PONG = 0xA


class WebSocketClosed(Exception):
    pass


def accept_key(client_key: str) -> str:
    digest = hashlib.sha1((client_key + GUID).encode()).digest()
    return base64.b64encode(digest).decode()


async def server_handshake(reader: asyncio.StreamReader,
                           writer: asyncio.StreamWriter) -> dict:
    request = await reader.readuntil(b"\r\n\r\n")
    lines = request.decode("latin-1").split("\r\n")
    headers = {}
    for line in lines[1:]:
        if ":" in line:
            k, v = line.split(":", 1)
            headers[k.strip().lower()] = v.strip()
    key = headers.get("sec-websocket-key")
    if not key or "websocket" not in headers.get("upgrade", "").lower():
        writer.write(b"HTTP/1.1 400 Bad Request\r\n\r\n")
        await writer.drain()
        raise WebSocketClosed("not a websocket upgrade request")
    response = (
        "HTTP/1.1 101 Switching Protocols\r\n"
        "Upgrade: websocket\r\n"
        "Connection: Upgrade\r\n"
        f"Sec-WebSocket-Accept: {accept_key(key)}\r\n"
        "\r\n"
    )
    writer.write(response.encode("latin-1"))
    await writer.drain()
    return headers


async def client_handshake(reader: asyncio.StreamReader,
                           writer: asyncio.StreamWriter,
                           host: str, path: str = "/"):
    key = base64.b64encode(os.urandom(16)).decode()
    request = (
        f"GET {path} HTTP/1.1\r\n"
        f"Host: {host}\r\n"
        "Upgrade: websocket\r\n"
        "Connection: Upgrade\r\n"
        f"Sec-WebSocket-Key: {key}\r\n"
        "Sec-WebSocket-Version: 13\r\n"
        "\r\n"
    )
    writer.write(request.encode("latin-1"))
    await writer.drain()
    response = await reader.readuntil(b"\r\n\r\n")
    first = response.split(b"\r\n", 1)[0]
    if b"101" not in first:
        raise WebSocketClosed(f"handshake rejected: {first.decode('latin-1')}")
    expected = accept_key(key).encode()
    if expected not in response:
        raise WebSocketClosed("bad Sec-WebSocket-Accept")


def encode_frame(opcode: int, payload: bytes, mask: bool) -> bytes:
    head = bytes([0x80 | opcode])
    n = len(payload)
    mask_bit = 0x80 if mask else 0
    if n < 126:
        head += bytes([mask_bit | n])
    elif n < 65536:
        head += bytes([mask_bit | 126]) + struct.pack(">H", n)
    else:
        head += bytes([mask_bit | 127]) + struct.pack(">Q", n)
    if mask:
        key = os.urandom(4)
        masked = bytes(b ^ key[i % 4] for i, b in enumerate(payload))
        return head + key + masked
    return head + payload


async def read_frame(reader: asyncio.StreamReader) -> tuple[int, bytes]:
    try:
        b0, b1 = await reader.readexactly(2)
    except (asyncio.IncompleteReadError, ConnectionResetError):
        raise WebSocketClosed("connection dropped") from None
    opcode = b0 & 0x0F
    masked = bool(b1 & 0x80)
    n = b1 & 0x7F
    if n == 126:
        n, = struct.unpack(">H", await reader.readexactly(2))
    elif n == 127:
        n, = struct.unpack(">Q", await reader.readexactly(8))
    if masked:
        key = await reader.readexactly(4)
        data = await reader.readexactly(n)
        data = bytes(b ^ key[i % 4] for i, b in enumerate(data))
    else:
        data = await reader.readexactly(n)
    return opcode, data


async def send_binary(writer: asyncio.StreamWriter, payload: bytes,
                      mask: bool = False):
    writer.write(encode_frame(OP_BINARY, payload, mask))
    await writer.drain()


async def send_close(writer: asyncio.StreamWriter, mask: bool = False):
    writer.write(encode_frame(OP_CLOSE, b"", mask))
    await writer.drain()
