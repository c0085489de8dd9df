"""Subprocess driver for one adapter session, used across the test files."""

from __future__ import annotations

import json
import shlex
import subprocess
import sys

ADAPTER_ARGV = [sys.executable, "-m", "refadapter"]
ADAPTER_COMMAND = " ".join(shlex.quote(a) for a in ADAPTER_ARGV)


class AdapterSession:
    """A live adapter process with the handshake line already consumed."""

    def __init__(self):
        self.proc = subprocess.Popen(
            ADAPTER_ARGV,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
            bufsize=1,
        )
        self.handshake = json.loads(self._read_line())

    def _read_line(self) -> str:
        line = self.proc.stdout.readline()
        if not line:
            raise AssertionError("adapter closed its output unexpectedly")
        return line

    def send_line(self, raw: str) -> str:
        """Write one raw line, return the raw response line."""
        self.proc.stdin.write(raw + "\n")
        self.proc.stdin.flush()
        return self._read_line()

    def ask(self, **request) -> dict:
        return json.loads(self.send_line(json.dumps(request)))

    def close(self) -> None:
        if self.proc.poll() is None:
            self.proc.stdin.close()
            self.proc.wait(timeout=10)

    def __enter__(self) -> "AdapterSession":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
