"""JSON-lines policy protocol: observation out, action index back.

The engine serializes one ``observe`` message per step and expects an
``act`` reply naming an index into the eligible-edge list; at episode
termination it sends ``episode_end`` with the total reward. Transports:
a child process on stdio, or a TCP connection.
"""

from __future__ import annotations

import json
import os
import queue
import random
import shlex
import socket
import subprocess
import threading
from typing import Any

from .engine import EgsState, PolicyDecision
from .errors import PolicyProtocolError, PolicyTimeoutError

DEFAULT_TIMEOUT = 30.0


def step_timeout() -> float:
    """Per-step timeout in seconds; EGS_POLICY_TIMEOUT overrides the default."""
    raw = os.environ.get("EGS_POLICY_TIMEOUT")
    if raw is None:
        return DEFAULT_TIMEOUT
    try:
        value = float(raw)
    except ValueError as exc:
        raise PolicyProtocolError(f"bad EGS_POLICY_TIMEOUT: {raw!r}") from exc
    if value <= 0:
        raise PolicyProtocolError("EGS_POLICY_TIMEOUT must be positive")
    return value


def encode_tc(rows: tuple[int, ...], n: int) -> str:
    """Closure rows as colon-joined fixed-width hex (bit j of row i = entry i,j)."""
    digits = max(1, (n + 3) // 4)
    return ":".join(format(row, f"0{digits}x") for row in rows)


def decode_tc(text: str, n: int) -> tuple[int, ...]:
    return tuple(int(part, 16) for part in text.split(":"))


def observation_message(state: EgsState) -> dict[str, Any]:
    """The ``observe`` payload for one step. All values are integers."""
    task, analysis = state.task, state.analysis
    features = [
        [
            task.wcet[i],
            analysis.est[i],
            analysis.eft[i],
            analysis.lst[i],
            analysis.lft[i],
            analysis.lw[i],
            analysis.iw[i],
            analysis.ow[i],
        ]
        for i in range(task.n)
    ]
    return {
        "type": "observe",
        "step": state.step,
        "n": task.n,
        "features": features,
        "tc": encode_tc(analysis.tc.rows, task.n),
        "eligible": [list(edge) for edge in state.eligible_edges()],
        "width": analysis.width,
        "lower_bound": state.lower_bound,
    }


class LineTransport:
    """One newline-delimited-JSON peer. Subclasses provide raw line I/O."""

    def send(self, message: dict[str, Any]) -> None:
        try:
            self._write_line(json.dumps(message, separators=(",", ":")))
        except (OSError, ValueError) as exc:
            raise PolicyProtocolError(f"policy connection lost: {exc}") from exc

    def receive(self, timeout: float) -> dict[str, Any]:
        line = self._read_line(timeout)
        if line is None:
            raise PolicyProtocolError("policy closed the connection mid-episode")
        try:
            message = json.loads(line)
        except json.JSONDecodeError as exc:
            raise PolicyProtocolError(f"malformed policy message: {line!r}") from exc
        if not isinstance(message, dict):
            raise PolicyProtocolError(f"policy message is not an object: {line!r}")
        return message

    def _write_line(self, line: str) -> None:
        raise NotImplementedError

    def _read_line(self, timeout: float) -> str | None:
        raise NotImplementedError

    def close(self) -> None:  # pragma: no cover - transport specific
        pass


class SubprocessTransport(LineTransport):
    """Spawn the policy as a child process and talk over its stdio."""

    def __init__(self, command: str | list[str]):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        try:
            self._proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise PolicyProtocolError(f"cannot start policy {argv!r}: {exc}") from exc
        self._lines: queue.Queue[str | None] = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()

    def _pump(self) -> None:
        assert self._proc.stdout is not None
        for line in self._proc.stdout:
            self._lines.put(line.rstrip("\n"))
        self._lines.put(None)

    def _write_line(self, line: str) -> None:
        if self._proc.poll() is not None:
            raise OSError("policy process exited")
        assert self._proc.stdin is not None
        self._proc.stdin.write(line + "\n")
        self._proc.stdin.flush()

    def _read_line(self, timeout: float) -> str | None:
        try:
            return self._lines.get(timeout=timeout)
        except queue.Empty:
            raise PolicyTimeoutError(f"no policy answer within {timeout:g} s") from None

    def close(self) -> None:
        if self._proc.poll() is None:
            self._proc.terminate()
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:  # pragma: no cover
                self._proc.kill()


class TcpTransport(LineTransport):
    """Connect to a policy server at host:port."""

    def __init__(self, address: str):
        host, _, port = address.rpartition(":")
        if not host or not port.isdigit():
            raise PolicyProtocolError(f"bad policy address {address!r}")
        try:
            self._sock = socket.create_connection((host, int(port)), timeout=10.0)
        except OSError as exc:
            raise PolicyProtocolError(f"cannot connect to {address}: {exc}") from exc
        self._file = self._sock.makefile("r", encoding="utf-8", newline="\n")

    def _write_line(self, line: str) -> None:
        self._sock.sendall((line + "\n").encode("utf-8"))

    def _read_line(self, timeout: float) -> str | None:
        self._sock.settimeout(timeout)
        try:
            line = self._file.readline()
        except socket.timeout:
            raise PolicyTimeoutError(f"no policy answer within {timeout:g} s") from None
        return line.rstrip("\n") if line else None

    def close(self) -> None:
        try:
            self._file.close()
            self._sock.close()
        except OSError:  # pragma: no cover
            pass


class ExternalPolicy:
    """Policy adapter: serialize the state, validate the returned index."""

    def __init__(self, transport: LineTransport, timeout: float | None = None):
        self._transport = transport
        self._timeout = step_timeout() if timeout is None else timeout

    def __call__(self, state: EgsState, rng: random.Random) -> PolicyDecision:
        eligible = state.eligible_edges()
        self._transport.send(observation_message(state))
        reply = self._transport.receive(self._timeout)
        if reply.get("type") != "act":
            raise PolicyProtocolError(f"expected an act message, got {reply!r}")
        index = reply.get("index")
        if not isinstance(index, int) or isinstance(index, bool):
            raise PolicyProtocolError(f"act index is not an integer: {reply!r}")
        if not 0 <= index < len(eligible):
            raise PolicyProtocolError(
                f"act index {index} out of range 0..{len(eligible) - 1}")
        return PolicyDecision(eligible[index], 1.0)

    def episode_end(self, reward_total: int) -> None:
        self._transport.send({"type": "episode_end", "reward_total": reward_total})

    def close(self) -> None:
        self._transport.close()
