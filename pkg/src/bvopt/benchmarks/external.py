"""Line-delimited subprocess protocol for objectives evaluated elsewhere.

One request per line on the child's stdin: space-separated category
indices. One response per line on its stdout: a single float. Anything
else (or silence past the timeout) is an error. The child is expected
to flush after each response.
"""

from __future__ import annotations

import select
import subprocess

import numpy as np

__all__ = ["ExternalObjective"]


class ExternalObjective:
    """Callable wrapper around an external evaluator process."""

    def __init__(self, cmd: list[str], timeout: float = 30.0):
        if not cmd:
            raise ValueError("cmd must name an executable")
        self.cmd = list(cmd)
        self.timeout = float(timeout)
        self._proc = subprocess.Popen(
            self.cmd,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )

    def __call__(self, x) -> float:
        if self._proc.poll() is not None:
            raise RuntimeError(f"external objective exited with {self._proc.returncode}")
        request = " ".join(str(int(v)) for v in np.asarray(x).ravel())
        self._proc.stdin.write(request + "\n")
        self._proc.stdin.flush()
        ready, _, _ = select.select([self._proc.stdout], [], [], self.timeout)
        if not ready:
            self._proc.kill()
            raise TimeoutError(f"external objective gave no response in {self.timeout}s")
        line = self._proc.stdout.readline()
        if not line:
            raise RuntimeError("external objective closed its output stream")
        try:
            return float(line.strip())
        except ValueError as err:
            raise ValueError(f"external objective sent a non-numeric response: {line!r}") from err

    def close(self) -> None:
        if self._proc.poll() is None:
            self._proc.stdin.close()
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
