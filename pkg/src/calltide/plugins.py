"""Subprocess classifier plugins over newline-delimited JSON.

A plugin is any executable that writes one hello line on startup, answers
each ``{"id", "text"}`` request with one ``{"id", "scores"}`` line in
request order, and exits cleanly on ``{"shutdown": true}``.  One JSON
object per line, UTF-8; unknown fields are ignored.
"""

from __future__ import annotations

import json
import queue
import subprocess
import threading
from pathlib import Path

from .classify import ClassifierHandle, argmax_label, validate_scores
from .chunking import ChunkPrediction
from .errors import (
    ConfigurationError,
    PluginCrashed,
    PluginProtocolError,
    PluginTimeout,
)

HELLO_TIMEOUT = 30.0
DEFAULT_REQUEST_TIMEOUT = 120.0
_EOF = object()


class PluginClient:
    """Owns one plugin subprocess; requests are serialized FIFO."""

    def __init__(
        self,
        executable: str | Path,
        request_timeout: float = DEFAULT_REQUEST_TIMEOUT,
        args: list[str] | None = None,
    ):
        self.executable = Path(executable)
        if not self.executable.exists():
            raise ConfigurationError(f"plugin executable {self.executable} does not exist")
        self.request_timeout = request_timeout
        self._lock = threading.Lock()
        self._next_id = 0
        self._lines: queue.Queue = queue.Queue()
        self._stderr: list[str] = []
        try:
            self._proc = subprocess.Popen(
                [str(self.executable)] + (args or []),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as exc:
            raise PluginCrashed(f"cannot launch {self.executable}: {exc}") from exc
        threading.Thread(target=self._pump_stdout, daemon=True).start()
        threading.Thread(target=self._pump_stderr, daemon=True).start()
        try:
            self.handle = self._handshake()
        except Exception:
            self._proc.kill()
            self._proc.wait()
            raise

    # --- io plumbing ------------------------------------------------------

    def _pump_stdout(self):
        for line in self._proc.stdout:
            self._lines.put(line)
        self._lines.put(_EOF)

    def _pump_stderr(self):
        for line in self._proc.stderr:
            self._stderr.append(line)

    def _diagnostics(self) -> str:
        tail = "".join(self._stderr[-20:]).strip()
        return f"\n--- plugin stderr ---\n{tail}" if tail else ""

    def _read_line(self, timeout: float) -> str:
        try:
            line = self._lines.get(timeout=timeout)
        except queue.Empty:
            raise PluginTimeout(
                f"{self.executable.name}: no response within {timeout:.0f}s"
            ) from None
        if line is _EOF:
            code = self._proc.poll()
            raise PluginCrashed(
                f"{self.executable.name}: exited (code {code}) with work outstanding"
                + self._diagnostics()
            )
        return line

    def _read_message(self, timeout: float) -> dict:
        line = self._read_line(timeout)
        try:
            message = json.loads(line)
        except json.JSONDecodeError:
            raise PluginProtocolError(
                f"{self.executable.name}: not a JSON object: {line.strip()[:200]!r}"
                + self._diagnostics()
            ) from None
        if not isinstance(message, dict):
            raise PluginProtocolError(
                f"{self.executable.name}: expected a JSON object, got {type(message).__name__}"
            )
        return message

    def _send(self, message: dict):
        try:
            self._proc.stdin.write(json.dumps(message) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError):
            raise PluginCrashed(
                f"{self.executable.name}: stdin closed" + self._diagnostics()
            ) from None

    # --- protocol ---------------------------------------------------------

    def _handshake(self) -> ClassifierHandle:
        message = self._read_message(HELLO_TIMEOUT)
        hello = message.get("hello")
        if not isinstance(hello, dict):
            raise PluginProtocolError(
                f"{self.executable.name}: first message must be a hello, got {message}"
            )
        try:
            return ClassifierHandle(
                name=str(hello["name"]),
                version=str(hello["version"]),
                max_tokens=int(hello["max_tokens"]),
                mode="plugin",
                wants=str(hello.get("wants", "raw")),
            )
        except (KeyError, TypeError, ValueError, ConfigurationError) as exc:
            raise PluginProtocolError(
                f"{self.executable.name}: malformed hello {hello}: {exc}"
            ) from None

    def predict(self, text: str) -> tuple[int, tuple[float, float, float]]:
        """Score one text; returns (label, scores)."""
        with self._lock:
            if self._proc.poll() is not None:
                raise PluginCrashed(
                    f"{self.executable.name}: process already exited" + self._diagnostics()
                )
            request_id = str(self._next_id)
            self._next_id += 1
            self._send({"id": request_id, "text": text})
            message = self._read_message(self.request_timeout)
        if message.get("id") != request_id:
            raise PluginProtocolError(
                f"{self.executable.name}: response id {message.get('id')!r} "
                f"does not match request id {request_id!r} (responses must be in order)"
            )
        try:
            scores = validate_scores(message.get("scores"))
        except ValueError as exc:
            raise PluginProtocolError(f"{self.executable.name}: {exc}") from None
        return argmax_label(scores), scores

    def predict_chunk(self, transcript_id: str, chunk_index: int, text: str) -> ChunkPrediction:
        label, scores = self.predict(text)
        return ChunkPrediction(
            transcript_id=transcript_id, chunk_index=chunk_index, label=label, scores=scores
        )

    def shutdown(self, grace: float = 10.0) -> int:
        """Ask the plugin to exit; returns its exit code."""
        if self._proc.poll() is None:
            try:
                self._send({"shutdown": True})
                self._proc.stdin.close()
            except PluginCrashed:
                pass
            try:
                self._proc.wait(timeout=grace)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()
        return self._proc.returncode

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.shutdown()


def plugin_handshake(executable: str | Path) -> ClassifierHandle:
    """Launch a plugin just long enough to collect its hello."""
    with PluginClient(executable) as client:
        return client.handle


def verify_plugin(
    executable: str | Path,
    texts: list[str] | None = None,
    request_timeout: float = DEFAULT_REQUEST_TIMEOUT,
) -> ClassifierHandle:
    """Conformance probe: hello, ordered round trips, clean shutdown.

    Raises a PluginError subclass on the first violation; returns the
    plugin's handle when everything conforms.
    """
    texts = texts if texts is not None else [f"conformance probe {i}" for i in range(5)]
    client = PluginClient(executable, request_timeout=request_timeout)
    try:
        for text in texts:
            client.predict(text)
    finally:
        code = client.shutdown()
    if code != 0:
        raise PluginProtocolError(
            f"{Path(executable).name}: nonzero exit code {code} after shutdown"
        )
    return client.handle
