"""Small synchronous WebSocket client for tests and scripting."""

from __future__ import annotations

import asyncio
import threading

from . import protocol as wire
from . import websocket as ws


class WireClient:
    """Connects to a running service; receive() yields (type, payload)."""

    def __init__(self, host: str, port: int, timeout: float = 10.0):
        self.timeout = timeout
        self._loop = asyncio.new_event_loop()
        self._thread = threading.Thread(target=self._loop.run_forever, daemon=True)
        self._thread.start()
        self._reader, self._writer = self._call(self._connect(host, port))

    async def _connect(self, host, port):
        reader, writer = await asyncio.open_connection(host, port)
        await ws.client_handshake(reader, writer, f"{host}:{port}")
        return reader, writer

    def _call(self, coro):
        fut = asyncio.run_coroutine_threadsafe(coro, self._loop)
        return fut.result(timeout=self.timeout)

    def send(self, msg_type: int, payload: bytes):
        frame = wire.encode_message(msg_type, payload)

        async def _send():
            await ws.send_binary(self._writer, frame, mask=True)

        self._call(_send())

    def send_raw(self, data: bytes):
        async def _send():
            await ws.send_binary(self._writer, data, mask=True)

        self._call(_send())

    def receive(self) -> tuple[int, bytes]:
        async def _recv():
            while True:
                opcode, data = await ws.read_frame(self._reader)
                if opcode == ws.OP_CLOSE:
                    raise ws.WebSocketClosed("server closed")
                if opcode == ws.OP_BINARY:
                    return wire.decode_message(data)

        return self._call(_recv())

    def receive_until(self, msg_type: int, limit: int = 1000):
        """Collect messages until one of msg_type arrives (inclusive)."""
        out = []
        for _ in range(limit):
            item = self.receive()
            out.append(item)
            if item[0] == msg_type:
                return out
        raise TimeoutError(f"no message of type {msg_type} within {limit} messages")

    def close(self):
        async def _close():
            try:
                await ws.send_close(self._writer, mask=True)
                self._writer.close()
            except (ConnectionError, RuntimeError):
                pass

        try:
            self._call(_close())
        except Exception:
            pass
        self._loop.call_soon_threadsafe(self._loop.stop)
        self._thread.join(timeout=5)
